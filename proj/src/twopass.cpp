#include "histo/twopass.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"
#include "histo/l0_sampler.hpp"

namespace histo {

namespace {

int64_t default_q(int64_t k, double eps) {
    double q = 16.0 * std::log((double)k / eps) / (eps * eps);
    return std::max<int64_t>(1, (int64_t)std::ceil(q));
}

}  // namespace

TwoPassResult twopass_run_full(StreamSource& source, const TwoPassConfig& cfg_in) {
    TwoPassConfig cfg = cfg_in;
    if (cfg.n == 0) cfg.n = source.domain_size();
    if (cfg.n != source.domain_size())
        throw DomainMismatch("config domain differs from the source domain");
    if (cfg.k < 1) throw BadParams("twopass needs k >= 1");
    if (cfg.eps <= 0.0 || cfg.eps >= 1.0) throw BadParams("twopass needs eps in (0,1)");
    if (!source.replayable())
        throw NonReplayableSource("twopass needs a replayable source");
    if (cfg.q == 0) cfg.q = default_q(cfg.k, cfg.eps);
    if (cfg.sampler_chains < 1) cfg.sampler_chains = 2;
    double phi = cfg.eps / (2.0 * (double)cfg.k);
    int levels = (int)std::countr_zero(std::bit_ceil((uint64_t)cfg.n)) + 1;

    // pass 1: hierarchical heavy hitters, then the (H, L) partition
    source.reset();
    count_t m = 0;
    HHHSet T;
    int64_t pass1_words = 0;
    if (cfg.backend == HHHBackend::Exact) {
        ExactDistribution dist = exact_from_source(source);
        m = dist.total();
        if (m <= 0) throw EmptyStream("twopass over an empty stream");
        T = hhh_exact(dist, phi);
        pass1_words = (int64_t)dist.support_size();
    } else {
        HHHStreamConfig hc;
        hc.n = cfg.n;
        hc.phi = phi;
        hc.mode = cfg.backend == HHHBackend::InsertionOnly ? HHMode::InsertionOnly
                                                           : HHMode::Turnstile;
        hc.seed = derive_seed(cfg.seed, 0x71);
        if (cfg.space_budget > 0) {
            hc.mode = HHMode::InsertionOnly;
            hc.level_capacity =
                std::max<int64_t>(1, (cfg.space_budget + levels - 1) / levels);
        }
        HHHStream sk(hc);
        StreamUpdate u;
        while (source.next(u)) {
            sk.update(u);
            m += u.delta;
        }
        if (m <= 0) throw EmptyStream("twopass over an empty stream");
        double phi_q = 0.0;
        if (cfg.space_budget > 0) {
            double nn = (double)cfg.n;
            phi_q = nn * std::log2(nn) / (double)cfg.space_budget / (double)m;
            phi_q = std::min(phi_q, 1.0);
        }
        T = sk.query(m, phi_q);
        pass1_words = sk.space_words();
    }
    IntervalPartition part = build_partition(T, cfg.n, cfg.k, cfg.eps);

    // pass 2: exact counts on H, interval-restricted samplers on L
    std::vector<int64_t> q_of(part.L.size(), cfg.q);
    if (cfg.space_budget > 0) {
        int64_t slots = std::max<int64_t>(0, cfg.space_budget - (int64_t)part.H.size());
        int64_t base = part.L.empty() ? 0 : slots / (int64_t)part.L.size();
        int64_t extra = part.L.empty() ? 0 : slots % (int64_t)part.L.size();
        for (size_t i = 0; i < part.L.size(); ++i)
            q_of[i] = base + ((int64_t)i < extra ? 1 : 0);
    }
    std::vector<std::vector<L0Sampler>> samplers(part.L.size());
    uint64_t s2 = derive_seed(cfg.seed, 0x72);
    for (size_t i = 0; i < part.L.size(); ++i) {
        auto [a, b] = part.L[i];
        uint64_t si = derive_seed(s2, (uint64_t)i);
        samplers[i].reserve((size_t)q_of[i]);
        for (int64_t t = 0; t < q_of[i]; ++t)
            samplers[i].emplace_back(cfg.n, a, b, derive_seed(si, (uint64_t)t),
                                     cfg.sampler_chains);
    }

    source.reset();
    std::map<item_t, count_t> agg;
    StreamUpdate u;
    while (source.next(u)) agg[u.item] += u.delta;

    // samplers are linear in the final counts, so the aggregate feed is
    // equivalent to streaming every update into them
    for (size_t i = 0; i < part.L.size(); ++i) {
        if (samplers[i].empty()) continue;
        auto [a, b] = part.L[i];
        for (auto it = agg.lower_bound(a); it != agg.end() && it->first <= b; ++it) {
            if (it->second == 0) continue;
            for (auto& sp : samplers[i]) sp.l0_update(it->first, it->second);
        }
    }

    struct Piece {
        item_t a, b;
        double v;
    };
    std::vector<Piece> pieces;
    pieces.reserve(part.H.size() + part.L.size());
    for (item_t h : part.H) {
        auto it = agg.find(h);
        count_t c = it == agg.end() ? 0 : it->second;
        pieces.push_back({h, h, std::clamp((double)c / (double)m, 0.0, 1.0)});
    }
    for (size_t i = 0; i < part.L.size(); ++i) {
        std::vector<double> got;
        for (const auto& sp : samplers[i]) {
            L0Sample d = sp.l0_query();
            if (d.ok) got.push_back((double)d.count / (double)m);
        }
        double v = 0.0;  // empty support or no successful draw
        if (!got.empty()) {
            std::sort(got.begin(), got.end());
            v = std::clamp(got[(got.size() - 1) / 2], 0.0, 1.0);
        }
        pieces.push_back({part.L[i].first, part.L[i].second, v});
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return x.a < y.a; });

    int64_t pass2_words = (int64_t)part.H.size();
    for (const auto& qs : samplers) pass2_words += (int64_t)qs.size();

    TwoPassResult out;
    out.hist.n = cfg.n;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i + 1 < pieces.size()) out.hist.breakpoints.push_back(pieces[i].b);
        out.hist.values.push_back(pieces[i].v);
    }
    out.part = std::move(part);
    out.space_words = std::max(pass1_words, pass2_words);
    return out;
}

Histogram twopass_run(StreamSource& source, const TwoPassConfig& cfg) {
    return twopass_run_full(source, cfg).hist;
}

double median_tail_check(const std::vector<double>& masses, int64_t s, double eps,
                         int64_t trials, uint64_t seed) {
    if (masses.empty()) throw BadParams("median tail check needs a nonempty mass set");
    if (s < 1 || trials < 1) throw BadParams("median tail check needs s >= 1, trials >= 1");
    for (double x : masses)
        if (x < 0.0 || x > 1.0) throw BadParams("masses must lie in [0,1]");

    std::vector<double> sorted = masses;
    std::sort(sorted.begin(), sorted.end());
    size_t N = sorted.size();
    std::vector<double> prefix(N + 1, 0.0);
    for (size_t i = 0; i < N; ++i) prefix[i + 1] = prefix[i] + sorted[i];
    double beta = prefix[N];

    // L1 cost of fitting every mass with the constant M
    auto cost = [&](double M) {
        size_t i = std::upper_bound(sorted.begin(), sorted.end(), M) - sorted.begin();
        return M * (double)i - prefix[i] + (prefix[N] - prefix[i]) - M * (double)(N - i);
    };
    double base = cost(sorted[(N - 1) / 2]);

    std::mt19937_64 g(derive_seed(seed, 0xA5));
    std::vector<double> sample((size_t)s);
    int64_t bad = 0;
    for (int64_t t = 0; t < trials; ++t) {
        for (int64_t i = 0; i < s; ++i)
            sample[(size_t)i] = sorted[uniform_below(g, N)];
        std::nth_element(sample.begin(), sample.begin() + (s - 1) / 2, sample.end());
        double med = sample[(size_t)((s - 1) / 2)];
        if (cost(med) - base > eps * beta) ++bad;
    }
    return (double)bad / (double)trials;
}

}  // namespace histo
