// command-line front end: ingest raw data, synthesize streams, run the
// histogram algorithms, sweep space budgets into CSVs, evaluate histograms
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "histo/baselines.hpp"
#include "histo/errors.hpp"
#include "histo/gadgets.hpp"
#include "histo/histogram.hpp"
#include "histo/ingest.hpp"
#include "histo/stream.hpp"
#include "histo/sweep.hpp"

using namespace histo;

namespace {

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (c == '0' || c == '1') out.push_back(c - '0');
        else if (!std::isspace((unsigned char)c))
            throw BadParams("bit vectors must contain only 0 and 1");
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_ingest(const std::string& raw, const std::string& mode, const std::string& out,
               int prefix_len, double step, double lo, double hi) {
    IngestConfig cfg;
    cfg.mode = ingest_mode_from_name(mode);
    cfg.prefix_len = prefix_len;
    cfg.step = step;
    cfg.lo = lo;
    cfg.hi = hi;
    IngestStats st = ingest_file(raw, cfg, out);
    std::cout << "domain=" << st.domain << " records=" << st.records
              << " skipped=" << st.skipped << " -> " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& stream_path, const std::string& hist_path) {
    FileSource src(stream_path);
    ExactDistribution dist = exact_from_source(src);
    nlohmann::json j = nlohmann::json::parse(read_file(hist_path));
    if (j.contains("histogram")) j = j["histogram"];
    Histogram h = histogram_from_json(j.dump());
    if (h.n != dist.domain_size())
        throw DomainMismatch("histogram domain " + std::to_string(h.n) +
                             " differs from stream domain " +
                             std::to_string(dist.domain_size()));
    std::printf("pieces=%zu\n", h.values.size());
    std::printf("err_support=%.12g\n", support_error(dist, h));
    std::printf("err_domain=%.12g\n", domain_error(dist, h));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"support-aware streaming histograms"};
    app.require_subcommand(1);

    // ingest
    std::string in_raw, in_mode = "text-prefix", in_out = "stream.txt";
    int in_prefix = 3;
    double in_step = 0.01, in_lo = -90.0, in_hi = 90.0;
    auto* ingest = app.add_subcommand("ingest", "map a raw dataset to a stream file");
    ingest->add_option("raw", in_raw, "raw input file")->required();
    ingest->add_option("--mode", in_mode,
                       "text-prefix | ipv4-prefix | decimal-bucket | timestamp-tuple");
    ingest->add_option("--out", in_out, "stream file to write");
    ingest->add_option("--prefix-len", in_prefix, "letters kept per word (text mode)");
    ingest->add_option("--step", in_step, "bucket width (decimal mode)");
    ingest->add_option("--lo", in_lo, "range lower bound (decimal mode)");
    ingest->add_option("--hi", in_hi, "range upper bound (decimal mode)");

    // synth
    std::string sy_kind = "zipf", sy_out = "stream.txt", sy_gadget;
    std::string sy_abits, sy_bbits;
    SynthParams sp;
    sp.n = 1 << 14;
    sp.length = 100000;
    uint64_t sy_seed = 0;
    int64_t sy_j = 1;
    double sy_gamma = 0.25, sy_ca = 0.5, sy_cb = 0.125, sy_cc = 0.1, sy_pf = 0.025;
    auto* synth = app.add_subcommand("synth", "generate a synthetic or gadget stream");
    synth->add_option("--kind", sy_kind,
                      "even-uniform | zipf | uniform-sparse | mice-elephants");
    synth->add_option("--n", sp.n, "domain size");
    synth->add_option("--out", sy_out, "stream file to write");
    synth->add_option("--seed", sy_seed, "generator seed");
    synth->add_option("--count-per-item", sp.count_per_item, "even-uniform count");
    synth->add_option("--exponent", sp.exponent, "zipf exponent");
    synth->add_option("--updates", sp.length, "update count (zipf, uniform-sparse)");
    synth->add_option("--support", sp.support_size, "support size (uniform-sparse)");
    synth->add_option("--mice", sp.mice, "mice item count");
    synth->add_option("--mice-count", sp.mice_count, "count per mouse");
    synth->add_option("--elephants", sp.elephants, "elephant item count");
    synth->add_option("--elephant-count", sp.elephant_count, "count per elephant");
    synth->add_option("--churn", sp.churn, "deletion probability per step");
    synth->add_option("--gadget", sy_gadget,
                      "disjointness | proper | bicriteria (overrides --kind)");
    synth->add_option("--a-bits", sy_abits, "Alice bits, e.g. 10110");
    synth->add_option("--b-bits", sy_bbits, "Bob bits (disjointness)");
    synth->add_option("--j", sy_j, "Bob index (proper, bicriteria)");
    synth->add_option("--gamma", sy_gamma, "elephant fraction (proper)");
    synth->add_option("--ca", sy_ca, "bicriteria constant a");
    synth->add_option("--cb", sy_cb, "bicriteria constant b");
    synth->add_option("--cc", sy_cc, "bicriteria constant c");
    synth->add_option("--pf", sy_pf, "bicriteria piece fraction");

    // run
    std::string r_stream, r_algo = "twopass", r_out;
    AlgoParams rp;
    auto* run = app.add_subcommand("run", "run one algorithm on a stream file");
    run->add_option("stream", r_stream, "stream file")->required();
    run->add_option("--algo", r_algo,
                    "onepass | twopass | fixed-support | fixed-domain | oracle");
    run->add_option("--k", rp.k, "piece budget");
    run->add_option("--eps", rp.eps, "accuracy parameter");
    run->add_option("--space", rp.space, "sample/space budget (0 = defaults)");
    run->add_option("--seed", rp.seed, "run seed");
    run->add_flag("--theoretical", rp.theoretical,
                  "use the analysis parameterization instead of the experimental one");
    run->add_flag("--exact-hhh", rp.exact_hhh, "twopass: oracle first pass");
    run->add_option("--support-bound", rp.support_bound,
                    "onepass theoretical: known support bound");
    run->add_option("--scale-k", rp.scale_k, "baselines: derive k = space/scale");
    run->add_option("--out", r_out, "write histogram JSON here");

    // sweep
    std::string sw_stream, sw_out = "sweep";
    std::string sw_algos = "onepass,twopass,fixed-support,fixed-domain";
    SweepConfig sw;
    auto* sweep = app.add_subcommand("sweep", "error vs space CSV over algorithms");
    sweep->add_option("stream", sw_stream, "stream file")->required();
    sweep->add_option("--algos", sw_algos, "comma-separated algorithm list");
    sweep->add_option("--space", sw.spaces, "space budgets (repeatable)")->required();
    sweep->add_option("--k", sw.k, "piece budget");
    sweep->add_option("--eps", sw.eps, "accuracy parameter");
    sweep->add_option("--trials", sw.trials, "trials per point");
    sweep->add_option("--seed", sw.seed, "master seed");
    sweep->add_flag("--theoretical", sw.theoretical, "theoretical parameterization");
    sweep->add_option("--scale-k", sw.scale_k, "baselines: derive k = space/scale");
    sweep->add_option("--threads", sw.threads, "worker threads (0 = hardware)");
    sweep->add_option("--out", sw_out, "output prefix for _detail.csv / _summary.csv");

    // eval
    std::string ev_stream, ev_hist;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a histogram JSON on a stream");
    eval_cmd->add_option("stream", ev_stream, "stream file")->required();
    eval_cmd->add_option("histogram", ev_hist, "histogram JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(in_raw, in_mode, in_out, in_prefix, in_step, in_lo, in_hi);

        if (*synth) {
            std::unique_ptr<VectorSource> src;
            if (!sy_gadget.empty()) {
                GadgetSpec gs;
                if (sy_gadget == "disjointness") gs.family = GadgetSpec::Family::Disjointness;
                else if (sy_gadget == "proper") gs.family = GadgetSpec::Family::Proper;
                else if (sy_gadget == "bicriteria") gs.family = GadgetSpec::Family::Bicriteria;
                else throw BadParams("unknown gadget family: " + sy_gadget);
                gs.n = sp.n;
                gs.a_bits = parse_bits(sy_abits);
                gs.b_bits = parse_bits(sy_bbits);
                gs.j = sy_j;
                gs.gamma = sy_gamma;
                gs.ca = sy_ca;
                gs.cb = sy_cb;
                gs.cc = sy_cc;
                gs.pf = sy_pf;
                src = gadget_stream(gs);
            } else {
                src = generate_synthetic(synth_kind_from_name(sy_kind), sp, sy_seed);
            }
            write_stream_file(sy_out, *src);
            std::cout << "n=" << src->domain_size() << " updates=" << src->total_updates()
                      << " -> " << sy_out << "\n";
            return 0;
        }

        if (*run) {
            FileSource src(r_stream);
            AlgoOutput got = run_algo(r_algo, src, rp);
            ExactDistribution dist = [&] {
                src.reset();
                return exact_from_source(src);
            }();
            double es = support_error(dist, got.hist);
            double ed = domain_error(dist, got.hist);
            std::printf("algo=%s pieces=%zu space_used=%lld\n", r_algo.c_str(),
                        got.hist.values.size(), (long long)got.space_used);
            std::printf("err_support=%.12g\nerr_domain=%.12g\n", es, ed);
            if (!r_out.empty()) {
                nlohmann::json j;
                j["algo"] = r_algo;
                j["config"] = {{"k", rp.k},          {"eps", rp.eps},
                               {"space", rp.space},  {"seed", rp.seed},
                               {"theoretical", rp.theoretical},
                               {"exact_hhh", rp.exact_hhh},
                               {"support_bound", rp.support_bound},
                               {"scale_k", rp.scale_k}};
                j["space_used"] = got.space_used;
                j["err_support"] = es;
                j["err_domain"] = ed;
                j["histogram"] = nlohmann::json::parse(histogram_to_json(got.hist));
                std::ofstream out(r_out);
                if (!out) throw ParseError("cannot write " + r_out);
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (*sweep) {
            std::stringstream ss(sw_algos);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) sw.algos.push_back(tok);
            std::vector<RunRecord> recs = run_sweep(sw_stream, sw);
            write_sweep_csv(recs, sw_out + "_detail.csv", sw_out + "_summary.csv");
            std::cout << recs.size() << " runs -> " << sw_out << "_detail.csv, "
                      << sw_out << "_summary.csv\n";
            return 0;
        }

        if (*eval_cmd) return cmd_eval(ev_stream, ev_hist);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
