#include "histo/onepass.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"
#include "histo/hh_sketch.hpp"
#include "histo/l0_sampler.hpp"

namespace histo {

namespace {

int64_t default_samples(item_t base, item_t n, int64_t k, double eps) {
    double b = (double)std::max<item_t>(2, base);
    double s = 4.0 * std::sqrt(b) * std::log2(b) * (double)k / (eps * eps * eps);
    int64_t si = (int64_t)std::ceil(s);
    return std::clamp<int64_t>(si, 1, n);
}

void validate(const OnePassConfig& cfg) {
    if (cfg.n < 1) throw BadParams("onepass needs a positive domain");
    if (cfg.k < 1) throw BadParams("onepass needs k >= 1");
    if (cfg.eps <= 0.0 || cfg.eps >= 1.0) throw BadParams("onepass needs eps in (0,1)");
}

// masses of successful draws, then the point set sorted with Z members removed
WeightedPointSet draws_to_points(std::vector<std::pair<item_t, count_t>> draws,
                                 const std::vector<std::pair<item_t, double>>& Z,
                                 count_t m) {
    std::sort(draws.begin(), draws.end());
    WeightedPointSet S;
    for (const auto& [idx, c] : draws) {
        bool in_z = std::binary_search(
            Z.begin(), Z.end(), std::make_pair(idx, 0.0),
            [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!in_z && c > 0) S.push_back({idx, (double)c / (double)m});
    }
    return S;
}

OnePassResult run_experimental(StreamSource& source, const OnePassConfig& cfg) {
    int64_t s = cfg.s;
    if (s < 2) throw BadParams("experimental onepass needs a sample budget >= 2");
    int64_t half = s / 2;
    int64_t nsamp = s - half;

    HHParams hp;
    hp.n = cfg.n;
    hp.ell = std::max(1.0, cfg.ell > 0 ? cfg.ell : std::sqrt((double)cfg.n) / (cfg.eps * cfg.eps));
    hp.eps = cfg.eps;
    hp.mode = HHMode::InsertionOnly;
    hp.seed = derive_seed(cfg.seed, 0x51);
    hp.ss_capacity = half;
    HeavyHitterSketch sketch(hp);

    std::vector<L0Sampler> samplers;
    samplers.reserve((size_t)nsamp);
    uint64_t sseed = derive_seed(cfg.seed, 0x53);
    for (int64_t i = 0; i < nsamp; ++i)
        samplers.emplace_back(cfg.n, 1, cfg.n, derive_seed(sseed, (uint64_t)i), 2);

    // the sketch sees the true update order; samplers are linear in the
    // final counts, so they can be fed the aggregate afterwards
    std::map<item_t, count_t> agg;
    count_t m = 0;
    StreamUpdate u;
    while (source.next(u)) {
        sketch.hh_update(u);
        agg[u.item] += u.delta;
        m += u.delta;
    }
    if (m <= 0) throw EmptyStream("onepass over an empty stream");
    for (const auto& [item, c] : agg)
        if (c != 0)
            for (auto& sp : samplers) sp.l0_update(item, c);

    std::vector<std::pair<item_t, double>> Z;
    for (const auto& [item, c] : sketch.monitored())
        Z.emplace_back(item, std::min(1.0, (double)c / (double)m));
    std::sort(Z.begin(), Z.end());

    std::vector<std::pair<item_t, count_t>> draws;
    std::vector<double> all_masses;
    for (const auto& sp : samplers) {
        L0Sample d = sp.l0_query();
        if (d.ok) {
            draws.emplace_back(d.index, d.count);
            all_masses.push_back((double)d.count / (double)m);
        }
    }
    double gap = 0.0;
    if (!all_masses.empty()) {
        std::sort(all_masses.begin(), all_masses.end());
        gap = all_masses[(all_masses.size() - 1) / 2];
    }

    WeightedPointSet S = draws_to_points(std::move(draws), Z, m);
    OnePassResult out;
    out.hist = override_singletons(
        anchored_histogram_samples(S, (int)cfg.k, cfg.n, gap), Z);
    out.space_words = s;
    out.sample_count = nsamp;
    out.hh_entries = (int64_t)Z.size();
    return out;
}

}  // namespace

Histogram override_singletons(const Histogram& base,
                              const std::vector<std::pair<item_t, double>>& points) {
    Histogram out;
    out.n = base.n;
    size_t pi = 0;
    std::vector<std::pair<item_t, double>> pieces;
    for (size_t j = 0; j < base.values.size(); ++j) {
        item_t lo = j == 0 ? 1 : base.breakpoints[j - 1] + 1;
        item_t hi = j < base.breakpoints.size() ? base.breakpoints[j] : base.n;
        if (hi < lo) continue;
        double v = base.values[j];
        item_t cur = lo;
        while (pi < points.size() && points[pi].first <= hi) {
            item_t x = points[pi].first;
            double z = std::clamp(points[pi].second, 0.0, 1.0);
            if (x > cur) pieces.emplace_back(x - 1, v);
            pieces.emplace_back(x, z);
            cur = x + 1;
            ++pi;
        }
        if (cur <= hi) pieces.emplace_back(hi, v);
    }
    for (size_t j = 0; j < pieces.size(); ++j) {
        if (j + 1 < pieces.size()) out.breakpoints.push_back(pieces[j].first);
        out.values.push_back(pieces[j].second);
    }
    return out;
}

OnePassResult onepass_run_full(StreamSource& source, const OnePassConfig& cfg_in) {
    OnePassConfig cfg = cfg_in;
    if (cfg.n == 0) cfg.n = source.domain_size();
    if (cfg.n != source.domain_size())
        throw DomainMismatch("config domain differs from the source domain");
    validate(cfg);
    if (cfg.experimental) return run_experimental(source, cfg);
    if (cfg.s == 0)
        cfg.s = default_samples(cfg.support_bound > 0 ? cfg.support_bound : cfg.n,
                                cfg.n, cfg.k, cfg.eps);
    if (cfg.s < 1) throw BadParams("onepass needs s >= 1");

    HHParams hp;
    hp.n = cfg.n;
    hp.ell = std::max(1.0, cfg.ell > 0 ? cfg.ell : std::sqrt((double)cfg.n) / (cfg.eps * cfg.eps));
    hp.eps = cfg.eps;
    hp.mode = HHMode::Turnstile;
    hp.seed = derive_seed(cfg.seed, 0x51);
    hp.delta = cfg.hh_delta;
    HeavyHitterSketch sketch(hp);

    // the sample set is fixed before the pass
    std::map<item_t, int> sampled;         // index -> multiplicity
    std::vector<L0Sampler> samplers;
    if (cfg.support_bound > 0) {
        samplers.reserve((size_t)cfg.s);
        uint64_t sseed = derive_seed(cfg.seed, 0x53);
        for (int64_t i = 0; i < cfg.s; ++i)
            samplers.emplace_back(cfg.n, 1, cfg.n, derive_seed(sseed, (uint64_t)i));
    } else {
        std::mt19937_64 g(derive_seed(cfg.seed, 0x52));
        for (int64_t i = 0; i < cfg.s; ++i)
            sampled[(item_t)uniform_below(g, (uint64_t)cfg.n) + 1] += 1;
    }

    std::map<item_t, count_t> counters;
    std::map<item_t, count_t> agg;  // linear feed for the samplers, post-pass
    count_t m = 0;
    StreamUpdate u;
    while (source.next(u)) {
        sketch.hh_update(u);
        if (!samplers.empty()) {
            agg[u.item] += u.delta;
        } else {
            auto it = sampled.find(u.item);
            if (it != sampled.end()) counters[u.item] += u.delta;
        }
        m += u.delta;
    }
    if (m <= 0) throw EmptyStream("onepass over an empty stream");
    if (!samplers.empty())
        for (const auto& [item, c] : agg)
            if (c != 0)
                for (auto& sp : samplers) sp.l0_update(item, c);

    std::vector<std::pair<item_t, double>> Z = sketch.hh_query(hp.ell, m);

    std::vector<std::pair<item_t, count_t>> draws;
    if (!samplers.empty()) {
        for (const auto& sp : samplers) {
            L0Sample d = sp.l0_query();
            if (d.ok) draws.emplace_back(d.index, d.count);
        }
    } else {
        for (const auto& [item, mult] : sampled) {
            auto it = counters.find(item);
            count_t c = it == counters.end() ? 0 : it->second;
            for (int t = 0; t < mult; ++t) draws.emplace_back(item, c);
        }
    }
    WeightedPointSet S = draws_to_points(std::move(draws), Z, m);

    OnePassResult out;
    out.hist = override_singletons(optimal_histogram_samples(S, (int)cfg.k, cfg.n), Z);
    out.space_words = cfg.s + sketch.space_words();
    out.sample_count = cfg.s;
    out.hh_entries = (int64_t)Z.size();
    return out;
}

Histogram onepass_run(StreamSource& source, const OnePassConfig& cfg) {
    return onepass_run_full(source, cfg).hist;
}

}  // namespace histo
