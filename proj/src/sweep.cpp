#include "histo/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "histo/baselines.hpp"
#include "histo/errors.hpp"
#include "histo/hashing.hpp"
#include "histo/onepass.hpp"
#include "histo/twopass.hpp"

namespace histo {

namespace {

// cursor over a shared parsed update vector; each worker owns its cursor
class SharedSource : public StreamSource {
public:
    SharedSource(item_t n, std::shared_ptr<const std::vector<StreamUpdate>> ups)
        : n_(n), ups_(std::move(ups)) {}
    item_t domain_size() const override { return n_; }
    uint64_t total_updates() const override { return ups_->size(); }
    void reset() override { pos_ = 0; }
    bool next(StreamUpdate& u) override {
        if (pos_ >= ups_->size()) return false;
        u = (*ups_)[pos_++];
        return true;
    }

private:
    item_t n_;
    std::shared_ptr<const std::vector<StreamUpdate>> ups_;
    size_t pos_ = 0;
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

AlgoOutput run_algo(const std::string& algo, StreamSource& source, const AlgoParams& p) {
    AlgoOutput out;
    if (algo == "onepass") {
        OnePassConfig cfg;
        cfg.k = p.k;
        cfg.eps = p.eps;
        cfg.seed = p.seed;
        cfg.experimental = !p.theoretical;
        cfg.s = p.space;  // 0 keeps the theoretical default
        cfg.support_bound = p.support_bound;
        source.reset();
        OnePassResult r = onepass_run_full(source, cfg);
        out.hist = std::move(r.hist);
        out.space_used = r.space_words;
        return out;
    }
    if (algo == "twopass") {
        TwoPassConfig cfg;
        cfg.k = p.k;
        cfg.eps = p.eps;
        cfg.seed = p.seed;
        cfg.sampler_chains = p.sampler_chains;
        if (p.exact_hhh)
            cfg.backend = HHHBackend::Exact;
        else if (!p.theoretical && p.space > 0)
            cfg.space_budget = p.space;
        TwoPassResult r = twopass_run_full(source, cfg);
        out.hist = std::move(r.hist);
        out.space_used = r.space_words;
        return out;
    }
    if (algo == "fixed-support" || algo == "fixed-domain") {
        BaselineConfig cfg;
        cfg.k = p.k;
        cfg.s = p.space > 0 ? p.space : p.k;
        cfg.seed = p.seed;
        cfg.variant = algo == "fixed-support" ? BaselineVariant::Support
                                              : BaselineVariant::Domain;
        cfg.scale_k = p.scale_k;
        cfg.sampler_chains = p.sampler_chains;
        out.hist = fixed_baseline(source, cfg);
        out.space_used = p.space > 0 ? p.space : p.k;
        return out;
    }
    if (algo == "oracle") {
        source.reset();
        ExactDistribution dist = exact_from_source(source);
        out.hist = optimal_histogram_exact(dist, (int)p.k).hist;
        out.space_used = 0;
        return out;
    }
    throw BadParams("unknown algorithm: " + algo);
}

std::vector<RunRecord> run_sweep(const std::string& stream_path, const SweepConfig& cfg) {
    if (cfg.algos.empty() || cfg.spaces.empty() || cfg.trials < 1)
        throw BadParams("sweep needs algorithms, a space grid, and trials >= 1");
    if (cfg.algos.size() >= 1000 || cfg.spaces.size() >= 1000 || cfg.trials >= 1000)
        throw BadParams("sweep grid exceeds the seed-split bounds");

    auto shared = std::make_shared<std::vector<StreamUpdate>>();
    item_t n;
    {
        FileSource f(stream_path);
        n = f.domain_size();
        StreamUpdate u;
        while (f.next(u)) shared->push_back(u);
    }
    std::shared_ptr<const std::vector<StreamUpdate>> ups = shared;
    ExactDistribution dist = [&] {
        SharedSource s(n, ups);
        return exact_from_source(s);
    }();

    struct Task {
        size_t ai, si;
        int trial;
    };
    std::vector<Task> tasks;
    for (size_t ai = 0; ai < cfg.algos.size(); ++ai)
        for (size_t si = 0; si < cfg.spaces.size(); ++si)
            for (int t = 0; t < cfg.trials; ++t) tasks.push_back({ai, si, t});

    std::vector<RunRecord> records(tasks.size());
    std::atomic<size_t> cursor{0};
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : (int)std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<int>(nthreads, (int)tasks.size());

    auto worker = [&] {
        for (;;) {
            size_t t = cursor.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            RunRecord rec;
            rec.algo = cfg.algos[task.ai];
            rec.space = cfg.spaces[task.si];
            rec.trial = task.trial;
            rec.seed = derive_seed(cfg.seed,
                                   (task.ai * 1000 + task.si) * 1000 + (size_t)task.trial);
            AlgoParams p;
            p.k = cfg.k;
            p.eps = cfg.eps;
            p.space = rec.space;
            p.seed = rec.seed;
            p.theoretical = cfg.theoretical;
            p.scale_k = cfg.scale_k;
            p.sampler_chains = cfg.sampler_chains;
            SharedSource src(n, ups);
            auto t0 = std::chrono::steady_clock::now();
            AlgoOutput got = run_algo(rec.algo, src, p);
            auto t1 = std::chrono::steady_clock::now();
            rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            rec.space_used = got.space_used;
            rec.pieces = (int64_t)got.hist.values.size();
            rec.err_support = support_error(dist, got.hist);
            rec.err_domain = domain_error(dist, got.hist);
            records[t] = std::move(rec);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return records;
}

void write_sweep_csv(const std::vector<RunRecord>& detail, const std::string& detail_path,
                     const std::string& summary_path) {
    {
        std::ofstream out(detail_path);
        if (!out) throw ParseError("cannot write " + detail_path);
        out << "algo,space,trial,seed,space_used,pieces,err_support,err_domain\n";
        for (const auto& r : detail)
            out << r.algo << ',' << r.space << ',' << r.trial << ',' << r.seed << ','
                << r.space_used << ',' << r.pieces << ',' << fmt_double(r.err_support)
                << ',' << fmt_double(r.err_domain) << '\n';
    }
    // group by (algo, space) in first-appearance order
    std::vector<std::pair<std::string, int64_t>> keys;
    for (const auto& r : detail) {
        std::pair<std::string, int64_t> key{r.algo, r.space};
        bool seen = false;
        for (const auto& k : keys) seen = seen || k == key;
        if (!seen) keys.push_back(key);
    }
    std::ofstream out(summary_path);
    if (!out) throw ParseError("cannot write " + summary_path);
    out << "algo,space,trials,err_support_mean,err_support_std,err_domain_mean,"
           "err_domain_std,space_used_mean\n";
    for (const auto& [algo, space] : keys) {
        std::vector<double> es, ed;
        double su = 0.0;
        for (const auto& r : detail) {
            if (r.algo != algo || r.space != space) continue;
            es.push_back(r.err_support);
            ed.push_back(r.err_domain);
            su += (double)r.space_used;
        }
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / (double)v.size();
        };
        auto sdev = [&](const std::vector<double>& v, double mu) {
            if (v.size() < 2) return 0.0;
            double s = 0.0;
            for (double x : v) s += (x - mu) * (x - mu);
            return std::sqrt(s / (double)(v.size() - 1));
        };
        double mes = mean(es), med = mean(ed);
        out << algo << ',' << space << ',' << es.size() << ',' << fmt_double(mes) << ','
            << fmt_double(sdev(es, mes)) << ',' << fmt_double(med) << ','
            << fmt_double(sdev(ed, med)) << ',' << fmt_double(su / (double)es.size())
            << '\n';
    }
}

}  // namespace histo
