#include "histo/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "histo/hashing.hpp"

namespace histo {

ExactDistribution::ExactDistribution(item_t n) : n_(n) {
    if (n < 1) throw BadParams("domain size must be >= 1");
}

void ExactDistribution::apply_update(const StreamUpdate& u) {
    if (u.item < 1 || u.item > n_)
        throw DomainViolation("item " + std::to_string(u.item) + " outside [1," +
                              std::to_string(n_) + "]");
    auto it = counts_.find(u.item);
    count_t cur = (it == counts_.end()) ? 0 : it->second;
    count_t next = cur + u.delta;
    if (next < 0)
        throw NegativeCount("count of item " + std::to_string(u.item) + " would become " +
                            std::to_string(next));
    if (next == 0) {
        if (it != counts_.end()) counts_.erase(it);
    } else if (it == counts_.end()) {
        counts_.emplace(u.item, next);
    } else {
        it->second = next;
    }
    total_ += u.delta;
}

double ExactDistribution::mass(item_t i) const {
    if (total_ == 0) throw EmptyStream("mass query on empty distribution");
    auto it = counts_.find(i);
    if (it == counts_.end()) return 0.0;
    return (double)it->second / (double)total_;
}

count_t ExactDistribution::count(item_t i) const {
    auto it = counts_.find(i);
    return it == counts_.end() ? 0 : it->second;
}

FileSource::FileSource(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open stream file: " + path);
    std::string line;
    size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        if (line[b] == '#') continue;
        if (!have_header) {
            if (line.compare(b, 2, "n=") != 0)
                throw ParseError("line " + std::to_string(lineno) + ": expected n=<int> header");
            try {
                n_ = std::stoll(line.substr(b + 2));
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": bad domain size");
            }
            if (n_ < 1)
                throw ParseError("line " + std::to_string(lineno) + ": domain size must be >= 1");
            have_header = true;
            continue;
        }
        StreamUpdate u;
        u.delta = 1;
        size_t comma = line.find(',', b);
        try {
            if (comma == std::string::npos) {
                u.item = std::stoll(line.substr(b));
            } else {
                u.item = std::stoll(line.substr(b, comma - b));
                u.delta = std::stoll(line.substr(comma + 1));
            }
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad update: " + line);
        }
        if (u.item < 1 || u.item > n_)
            throw ParseError("line " + std::to_string(lineno) + ": item out of domain");
        updates_.push_back(u);
    }
    if (!have_header) throw ParseError("missing n=<int> header in " + path);
    total_updates_ = updates_.size();
}

void write_stream_file(const std::string& path, StreamSource& src) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << "n=" << src.domain_size() << "\n";
    src.reset();
    StreamUpdate u;
    while (src.next(u)) {
        if (u.delta == 1)
            out << u.item << "\n";
        else
            out << u.item << "," << u.delta << "\n";
    }
    src.reset();
}

ExactDistribution exact_from_source(StreamSource& src) {
    ExactDistribution dist(src.domain_size());
    src.reset();
    StreamUpdate u;
    while (src.next(u)) dist.apply_update(u);
    src.reset();
    return dist;
}

SynthKind synth_kind_from_name(const std::string& name) {
    if (name == "even-uniform") return SynthKind::EvenUniform;
    if (name == "zipf") return SynthKind::Zipf;
    if (name == "uniform-sparse") return SynthKind::UniformSparse;
    if (name == "mice-elephants") return SynthKind::MiceElephants;
    throw BadParams("unknown synthetic kind: " + name);
}

namespace {

// with probability churn, replace the pending insertion by a deletion of a
// uniformly chosen currently-positive item; strictness holds by construction
class ChurnState {
public:
    explicit ChurnState(double churn) : churn_(churn) {}

    void push(std::vector<StreamUpdate>& out, std::mt19937_64& g, const StreamUpdate& ins) {
        if (churn_ > 0.0 && !alive_.empty() && uniform_double(g) < churn_) {
            size_t idx = (size_t)uniform_below(g, alive_.size());
            out.push_back({alive_[idx], -1});
            alive_[idx] = alive_.back();
            alive_.pop_back();
        }
        out.push_back(ins);
        for (count_t c = 0; c < ins.delta; ++c) alive_.push_back(ins.item);
    }

private:
    double churn_;
    std::vector<item_t> alive_;  // one entry per unit of live count
};

}  // namespace

std::unique_ptr<VectorSource> generate_synthetic(SynthKind kind, const SynthParams& p,
                                                 uint64_t seed) {
    if (p.n < 2) throw BadParams("synthetic stream needs n >= 2");
    if (p.churn < 0.0 || p.churn >= 1.0) throw BadParams("churn must be in [0,1)");
    std::mt19937_64 g(splitmix64(seed));
    std::vector<StreamUpdate> ups;
    ChurnState churn(p.churn);

    switch (kind) {
        case SynthKind::EvenUniform: {
            if (p.count_per_item < 1) throw BadParams("count-per-item must be >= 1");
            for (item_t i = 2; i <= p.n; i += 2) churn.push(ups, g, {i, p.count_per_item});
            break;
        }
        case SynthKind::Zipf: {
            if (p.length == 0) throw BadParams("zipf needs length > 0");
            if (p.exponent <= 0.0) throw BadParams("zipf exponent must be > 0");
            std::vector<double> cdf((size_t)p.n);
            double acc = 0.0;
            for (item_t i = 1; i <= p.n; ++i) {
                acc += std::pow((double)i, -p.exponent);
                cdf[(size_t)(i - 1)] = acc;
            }
            for (auto& v : cdf) v /= acc;
            for (uint64_t t = 0; t < p.length; ++t) {
                double r = uniform_double(g);
                auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
                item_t i = (item_t)(it - cdf.begin()) + 1;
                if (i > p.n) i = p.n;
                churn.push(ups, g, {i, 1});
            }
            break;
        }
        case SynthKind::UniformSparse: {
            if (p.support_size < 1 || p.support_size > p.n)
                throw BadParams("uniform-sparse needs 1 <= support_size <= n");
            if (p.length == 0) throw BadParams("uniform-sparse needs length > 0");
            // sampled without replacement via partial Fisher-Yates over [1..n]
            std::map<item_t, item_t> perm;
            std::vector<item_t> supp;
            for (item_t i = 0; i < p.support_size; ++i) {
                item_t j = i + (item_t)uniform_below(g, (uint64_t)(p.n - i));
                item_t vi = perm.count(i) ? perm[i] : i;
                item_t vj = perm.count(j) ? perm[j] : j;
                perm[i] = vj;
                perm[j] = vi;
                supp.push_back(vj + 1);
            }
            std::sort(supp.begin(), supp.end());
            for (uint64_t t = 0; t < p.length; ++t) {
                item_t i = supp[(size_t)uniform_below(g, supp.size())];
                churn.push(ups, g, {i, 1});
            }
            break;
        }
        case SynthKind::MiceElephants: {
            if (p.mice < 0 || p.elephants < 0 || p.mice + p.elephants == 0)
                throw BadParams("mice-elephants needs mice + elephants > 0");
            if (p.mice + p.elephants > p.n)
                throw BadParams("mice + elephants exceeds domain size");
            if (p.mice_count < 1 || p.elephant_count < 1)
                throw BadParams("per-item counts must be >= 1");
            // distinct positions via partial Fisher-Yates
            std::map<item_t, item_t> perm;
            std::vector<item_t> pos;
            int64_t want = p.mice + p.elephants;
            for (int64_t i = 0; i < want; ++i) {
                item_t j = i + (item_t)uniform_below(g, (uint64_t)(p.n - i));
                item_t vi = perm.count(i) ? perm[i] : i;
                item_t vj = perm.count(j) ? perm[j] : j;
                perm[i] = vj;
                perm[j] = vi;
                pos.push_back(vj + 1);
            }
            for (int64_t t = 0; t < p.mice; ++t) churn.push(ups, g, {pos[(size_t)t], p.mice_count});
            for (int64_t t = p.mice; t < want; ++t)
                churn.push(ups, g, {pos[(size_t)t], p.elephant_count});
            break;
        }
    }
    return std::make_unique<VectorSource>(p.n, std::move(ups));
}

}  // namespace histo
