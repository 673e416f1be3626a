#include "histo/ingest.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "histo/errors.hpp"

namespace histo {

namespace {

// days since 1970-01-01 for a proleptic Gregorian date
int64_t days_from_civil(int64_t y, int m, int d) {
    y -= m <= 2;
    int64_t era = (y >= 0 ? y : y - 399) / 400;
    int64_t yoe = y - era * 400;
    int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

item_t text_item(const std::string& word, int len) {
    item_t v = 0;
    for (int i = 0; i < len; ++i) v = v * 26 + (word[(size_t)i] - 'a');
    return v + 1;
}

[[noreturn]] void fail(size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

item_t weeksecond_item(int64_t year, int month, int day, int hour, int minute,
                       int second) {
    int64_t days = days_from_civil(year, month, day);
    int dow = (int)(((days % 7) + 7 + 3) % 7);  // 1970-01-01 was a Thursday
    return ((item_t)(dow * 24 + hour) * 60 + minute) * 60 + second + 1;
}

IngestMode ingest_mode_from_name(const std::string& name) {
    if (name == "text-prefix") return IngestMode::TextPrefix;
    if (name == "ipv4-prefix") return IngestMode::Ipv4Prefix;
    if (name == "decimal-bucket") return IngestMode::DecimalBucket;
    if (name == "timestamp-tuple") return IngestMode::TimestampTuple;
    throw BadParams("unknown ingest mode: " + name);
}

IngestStats ingest_file(const std::string& raw_path, const IngestConfig& cfg,
                        const std::string& out_path) {
    std::ifstream in(raw_path);
    if (!in) throw ParseError("cannot open " + raw_path);

    IngestStats stats;
    std::map<item_t, count_t> agg;
    auto put = [&](item_t item) {
        agg[item] += 1;
        ++stats.records;
    };

    switch (cfg.mode) {
        case IngestMode::TextPrefix: {
            if (cfg.prefix_len < 1 || cfg.prefix_len > 12)
                throw BadParams("prefix length must be in [1,12]");
            item_t domain = 1;
            for (int i = 0; i < cfg.prefix_len; ++i) domain *= 26;
            stats.domain = domain;
            std::string word;
            char ch;
            auto flush = [&] {
                if ((int)word.size() >= cfg.prefix_len)
                    put(text_item(word, cfg.prefix_len));
                else if (!word.empty())
                    ++stats.skipped;
                word.clear();
            };
            while (in.get(ch)) {
                if (std::isalpha((unsigned char)ch))
                    word.push_back((char)std::tolower((unsigned char)ch));
                else
                    flush();
            }
            flush();
            break;
        }
        case IngestMode::Ipv4Prefix: {
            stats.domain = 1 << 24;
            std::string line;
            size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                std::istringstream ls(line);
                std::string tok;
                if (!(ls >> tok) || tok[0] == '#') {
                    ++stats.skipped;
                    continue;
                }
                unsigned b[4];
                char dot;
                std::istringstream ts(tok);
                bool ok = true;
                for (int i = 0; i < 4; ++i) {
                    if (!(ts >> b[i]) || b[i] > 255) ok = false;
                    if (i < 3 && (!(ts >> dot) || dot != '.')) ok = false;
                    if (!ok) break;
                }
                if (!ok) fail(line_no, "expected dotted-quad address, got '" + tok + "'");
                put((item_t)b[0] * 65536 + (item_t)b[1] * 256 + (item_t)b[2] + 1);
            }
            break;
        }
        case IngestMode::DecimalBucket: {
            if (cfg.step <= 0 || cfg.hi <= cfg.lo)
                throw BadParams("decimal mode needs step > 0 and lo < hi");
            int64_t base = std::llround(cfg.lo / cfg.step);
            stats.domain = (item_t)(std::llround(cfg.hi / cfg.step) - base) + 1;
            std::string line;
            size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                std::istringstream ls(line);
                std::string tok;
                if (!(ls >> tok) || tok[0] == '#') {
                    ++stats.skipped;
                    continue;
                }
                double v;
                try {
                    size_t used;
                    v = std::stod(tok, &used);
                    if (used != tok.size()) fail(line_no, "trailing junk in '" + tok + "'");
                } catch (const std::logic_error&) {
                    fail(line_no, "expected a number, got '" + tok + "'");
                }
                if (v < cfg.lo || v > cfg.hi)
                    fail(line_no, "value " + tok + " outside the configured range");
                put((item_t)(std::llround(v / cfg.step) - base) + 1);
            }
            break;
        }
        case IngestMode::TimestampTuple: {
            stats.domain = 7 * 24 * 60 * 60;
            std::string line;
            size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty() || line[0] == '#') {
                    ++stats.skipped;
                    continue;
                }
                long long y;
                int mo, d, h, mi, se;
                char sep;
                if (std::sscanf(line.c_str(), "%lld-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep,
                                &h, &mi, &se) != 7 ||
                    (sep != ' ' && sep != 'T'))
                    fail(line_no, "expected YYYY-MM-DD HH:MM:SS");
                if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 ||
                    mi < 0 || mi > 59 || se < 0 || se > 59)
                    fail(line_no, "timestamp fields out of range");
                put(weeksecond_item(y, mo, d, h, mi, se));
            }
            break;
        }
    }

    std::vector<StreamUpdate> ups;
    ups.reserve(agg.size());
    for (const auto& [item, c] : agg) ups.push_back({item, c});
    VectorSource src(stats.domain, std::move(ups));
    write_stream_file(out_path, src);
    return stats;
}

}  // namespace histo
