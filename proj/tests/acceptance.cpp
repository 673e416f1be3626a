// acceptance gate: eleven end-to-end criteria, one pass/fail line each.
// run with a criterion number (1..11) or with no argument for the full set.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "histo/gadgets.hpp"
#include "histo/hh_sketch.hpp"
#include "histo/histogram.hpp"
#include "histo/l0_sampler.hpp"
#include "histo/onepass.hpp"
#include "histo/stream.hpp"
#include "histo/sweep.hpp"
#include "histo/twopass.hpp"

using namespace histo;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

int64_t iceil(double x) { return (int64_t)std::ceil(x - 1e-9); }

// ---------------------------------------------------------------------------
// criterion 1 helper: best histogram under the domain metric, by brute-force
// DP over every breakpoint position. medians can only be nonzero on windows
// narrower than twice the support size, so wide windows cost their mass sum.
struct DomainOpt {
    double err = 0.0;
    Histogram hist;
};

DomainOpt domain_optimal(const ExactDistribution& d, int k) {
    item_t n = d.domain_size();
    std::vector<double> p((size_t)n + 2, 0.0);
    for (const auto& [i, c] : d.counts()) p[(size_t)i] = (double)c / (double)d.total();
    std::vector<double> pre((size_t)n + 2, 0.0);
    for (item_t i = 1; i <= n; ++i) pre[(size_t)i] = pre[(size_t)i - 1] + p[(size_t)i];
    const item_t W = 2 * (item_t)d.support_size() + 2;
    const double INF = 1e18;

    // exact cost of fitting [i..j] with one constant (its lower median)
    auto seg = [&](item_t i, item_t j) {
        std::vector<double> ms;
        for (item_t x = i; x <= j; ++x)
            if (p[(size_t)x] > 0.0) ms.push_back(p[(size_t)x]);
        std::sort(ms.begin(), ms.end());
        int64_t w = j - i + 1, z = w - (int64_t)ms.size(), mi = (w - 1) / 2;
        double med = mi < z ? 0.0 : ms[(size_t)(mi - z)];
        double c = (double)z * med;
        for (double x : ms) c += std::fabs(x - med);
        return std::make_pair(c, med);
    };

    std::vector<double> prev((size_t)n + 2, INF), cur((size_t)n + 2, INF);
    prev[(size_t)n + 1] = 0.0;
    std::vector<std::vector<item_t>> choice((size_t)k + 1,
                                            std::vector<item_t>((size_t)n + 2, 0));
    for (int e = 1; e <= k; ++e) {
        // suffix minima of pre[j] + prev[j+1] cover the all-zero-median tail
        std::vector<double> suf((size_t)n + 2, INF);
        std::vector<item_t> sufarg((size_t)n + 2, 0);
        for (item_t j = n; j >= 1; --j) {
            double v = prev[(size_t)j + 1] >= INF / 2 ? INF : pre[(size_t)j] + prev[(size_t)j + 1];
            if (v < suf[(size_t)j + 1]) {
                suf[(size_t)j] = v;
                sufarg[(size_t)j] = j;
            } else {
                suf[(size_t)j] = suf[(size_t)j + 1];
                sufarg[(size_t)j] = sufarg[(size_t)j + 1];
            }
        }
        cur.assign((size_t)n + 2, INF);
        cur[(size_t)n + 1] = 0.0;
        for (item_t i = n; i >= 1; --i) {
            double best = INF;
            item_t at = 0;
            std::vector<double> ms;
            double sum_ms = 0.0;
            item_t jmax = std::min<item_t>(n, i + W - 1);
            for (item_t j = i; j <= jmax; ++j) {
                if (p[(size_t)j] > 0.0) {
                    ms.insert(std::upper_bound(ms.begin(), ms.end(), p[(size_t)j]),
                              p[(size_t)j]);
                    sum_ms += p[(size_t)j];
                }
                if (prev[(size_t)j + 1] >= INF / 2) continue;
                int64_t w = j - i + 1, z = w - (int64_t)ms.size(), mi = (w - 1) / 2;
                double cost;
                if (mi < z) {
                    cost = sum_ms;
                } else {
                    double med = ms[(size_t)(mi - z)];
                    cost = (double)z * med;
                    for (double x : ms) cost += std::fabs(x - med);
                }
                double cand = cost + prev[(size_t)j + 1];
                if (cand < best) {
                    best = cand;
                    at = j;
                }
            }
            if (i + W <= n && suf[(size_t)(i + W)] < INF / 2) {
                double cand = suf[(size_t)(i + W)] - pre[(size_t)i - 1];
                if (cand < best) {
                    best = cand;
                    at = sufarg[(size_t)(i + W)];
                }
            }
            cur[(size_t)i] = best;
            choice[(size_t)e][(size_t)i] = at;
        }
        std::swap(prev, cur);
    }

    DomainOpt out;
    out.err = prev[1];
    out.hist.n = n;
    item_t i = 1;
    for (int e = k; e >= 1 && i <= n; --e) {
        item_t j = choice[(size_t)e][(size_t)i];
        auto [c, med] = seg(i, j);
        if (j < n) out.hist.breakpoints.push_back(j);
        out.hist.values.push_back(med);
        i = j + 1;
    }
    return out;
}

Outcome criterion1() {
    item_t n = 10000;
    ExactDistribution d(n);
    for (int j = 0; j < 100; ++j) {
        count_t c = j < 33 ? 2 : j < 67 ? 6 : 20;
        d.apply_update({(item_t)(50 + 90 * j), c});
    }
    double support_opt = optimal_histogram_exact(d, 3).err;
    DomainOpt dom = domain_optimal(d, 3);
    double self_check = std::fabs(dom.err - domain_error(d, dom.hist));
    double cross = support_error(d, dom.hist);
    bool pass = support_opt <= 1e-12 && self_check <= 1e-9 && cross >= 0.3;
    return {pass, fmt("support-oracle err %.3g, domain-optimal support err %.4f",
                      support_opt, cross)};
}

Outcome criterion2() {
    SynthParams sp;
    sp.n = 10000;
    sp.count_per_item = 1;
    auto src = generate_synthetic(SynthKind::EvenUniform, sp, 0);
    ExactDistribution d = exact_from_source(*src);
    double opt1 = optimal_histogram_exact(d, 1).err;
    Histogram flat;
    flat.n = sp.n;
    flat.values = {2.0 / (double)sp.n};
    double dom = domain_error(d, flat);
    bool pass = opt1 == 0.0 && std::fabs(dom - 1.0) <= 1e-9;
    return {pass, fmt("opt_1 support err %.3g, constant-2/n domain err %.12f", opt1, dom)};
}

Outcome criterion3() {
    std::vector<double> masses;
    for (int i = 0; i < 610; ++i) masses.push_back(0.001);
    for (int i = 0; i < 390; ++i) masses.push_back(1.0);
    double s = 128.0, eps = 0.5;
    double rate = median_tail_check(masses, (int64_t)s, eps, 10000, 5);
    double bound = 2.0 * std::exp(-eps * eps * s / 8.0) + 0.015;
    return {rate <= bound, fmt("failure rate %.4f vs bound %.4f", rate, bound)};
}

Outcome criterion4() {
    int violations = 0;
    for (uint64_t t = 0; t < 100; ++t) {
        std::mt19937_64 rng(7100 + t);
        item_t n = (item_t)1 << (6 + (int)(t % 9));
        std::unique_ptr<VectorSource> src;
        switch (t % 4) {
            case 0: {
                SynthParams sp;
                sp.n = n;
                sp.support_size = 1 + (item_t)(rng() % (uint64_t)std::max<item_t>(1, n / 4));
                sp.length = 4000;
                src = generate_synthetic(SynthKind::UniformSparse, sp, rng());
                break;
            }
            case 1: {
                SynthParams sp;
                sp.n = n;
                sp.length = 20000;
                src = generate_synthetic(SynthKind::Zipf, sp, rng());
                break;
            }
            case 2: {
                SynthParams sp;
                sp.n = n;
                sp.mice = std::min<int64_t>(n - 5, 50);
                sp.mice_count = 1;
                sp.elephants = std::min<int64_t>(5, n / 8);
                sp.elephant_count = 40;
                src = generate_synthetic(SynthKind::MiceElephants, sp, rng());
                break;
            }
            default: {
                std::vector<StreamUpdate> ups;
                item_t pos = 1 + (item_t)(rng() % (uint64_t)std::max<item_t>(1, n / 4));
                item_t width = std::min<item_t>(n - pos, 1 + (item_t)(rng() % 64));
                for (item_t i = 0; i < width; ++i)
                    ups.push_back({pos + i, (count_t)(rng() % 4) + 1});
                ups.push_back({1 + (item_t)(rng() % (uint64_t)n), 60});
                src = std::make_unique<VectorSource>(n, std::move(ups));
                break;
            }
        }
        int64_t k = 1 + (int64_t)(rng() % 5);
        double epss[4] = {0.2, 0.25, 0.4, 0.5};
        double eps = epss[rng() % 4];

        TwoPassConfig cfg;
        cfg.k = k;
        cfg.eps = eps;
        cfg.seed = rng();
        cfg.backend = HHHBackend::Exact;
        cfg.q = 8;  // the checks here are about the partition, not the fit
        TwoPassResult r = twopass_run_full(*src, cfg);
        src->reset();
        ExactDistribution d = exact_from_source(*src);

        if ((int64_t)r.part.H.size() > iceil(2.0 * (double)k / eps)) ++violations;
        double phi = eps / (2.0 * (double)k);
        for (const auto& [a, b] : r.part.L) {
            count_t sum = 0;
            for (auto it = d.counts().lower_bound(a);
                 it != d.counts().end() && it->first <= b; ++it)
                sum += it->second;
            if ((double)sum / (double)d.total() >= phi) ++violations;
        }
    }
    return {violations == 0, fmt("%d violations across 100 streams", violations)};
}

// shared instance builder for the bicriteria criteria: dense constant blocks,
// optional heavy singleton, optional within-block noise
std::vector<StreamUpdate> block_instance(std::mt19937_64& rng, item_t n, int blocks,
                                         item_t wlo, item_t whi, bool noisy) {
    std::vector<StreamUpdate> ups;
    item_t pos = 1 + (item_t)(rng() % 500);
    count_t total = 0;
    for (int b = 0; b < blocks; ++b) {
        item_t width = wlo + (item_t)(rng() % (uint64_t)(whi - wlo + 1));
        if (pos + width >= n) break;
        count_t c = (count_t)(rng() % 8) + 1;
        for (item_t i = 0; i < width; ++i) {
            count_t ci = c + (noisy && b == 0 && (i & 1) ? 1 : 0);
            ups.push_back({pos + i, ci});
            total += ci;
        }
        pos += width + 1000 + (item_t)(rng() % (uint64_t)std::max<item_t>(1, n / 8));
    }
    if (ups.empty()) ups.push_back({1, 5});
    if (rng() & 1) {
        item_t at = n - 1 - (item_t)(rng() % 200);
        ups.push_back({at, std::max<count_t>(1, total / 20)});
    }
    return ups;
}

Outcome criterion5() {
    int ok = 0, piece_viol = 0;
    for (uint64_t t = 0; t < 20; ++t) {
        std::mt19937_64 rng(5200 + t);
        item_t n = (item_t)1 << (10 + (int)(t % 5));
        int64_t k = 1 + (int64_t)(rng() % 4);
        double eps = 0.25;
        std::vector<StreamUpdate> ups;
        if (t % 2 == 0) {
            int supp = 32 + (int)(rng() % 993);
            std::set<item_t> picked;
            while ((int)picked.size() < supp) picked.insert((item_t)(rng() % n) + 1);
            for (item_t i : picked) ups.push_back({i, (count_t)(rng() % 50) + 1});
        } else {
            ups = block_instance(rng, n, (int)k, 50, 300, false);
        }
        VectorSource src(n, ups);
        TwoPassConfig cfg;
        cfg.k = k;
        cfg.eps = eps;
        cfg.seed = rng();
        cfg.backend = HHHBackend::Exact;
        TwoPassResult r = twopass_run_full(src, cfg);
        src.reset();
        ExactDistribution d = exact_from_source(src);

        if ((int64_t)r.hist.values.size() > 20 * iceil((double)k / eps) + 2) ++piece_viol;
        double opt = optimal_histogram_exact(d, (int)k).err;
        if (support_error(d, r.hist) <= opt + eps + 1e-12) ++ok;
    }
    bool pass = ok >= 18 && piece_viol == 0;
    return {pass, fmt("%d/20 within opt+eps, %d piece-bound violations", ok, piece_viol)};
}

Outcome criterion6() {
    int ok = 0;
    for (uint64_t t = 0; t < 20; ++t) {
        std::mt19937_64 rng(6300 + t);
        item_t n = (t % 2) ? 32768 : 65536;
        int64_t k = 2 + (int64_t)(rng() % 4);
        double eps = 0.25;
        std::vector<StreamUpdate> ups =
            block_instance(rng, n, (int)k, 400, 1200, t % 3 == 0);
        VectorSource src(n, ups);
        OnePassConfig cfg;
        cfg.k = k;
        cfg.eps = eps;
        cfg.seed = rng();
        Histogram h = onepass_run(src, cfg);
        src.reset();
        ExactDistribution d = exact_from_source(src);
        double opt = optimal_histogram_exact(d, (int)k).err;
        if (support_error(d, h) <= opt + eps + 1e-12) ++ok;
    }
    return {ok >= 18, fmt("%d/20 within opt+eps", ok)};
}

Outcome criterion7() {
    item_t n = 1024;
    std::mt19937_64 rng(777);
    std::set<item_t> picked;
    while (picked.size() < 16) picked.insert((item_t)(rng() % n) + 1);
    std::map<item_t, count_t> supp;
    for (item_t i : picked) supp[i] = (count_t)(rng() % 9) + 1;

    const int64_t draws = 100000;
    int64_t succ = 0, bad_index = 0;
    std::map<item_t, int64_t> tally;
    for (int64_t i = 0; i < draws; ++i) {
        L0Sampler sp(n, 1, n, 40000 + (uint64_t)i);
        for (const auto& [item, c] : supp) sp.l0_update(item, c);
        L0Sample s = sp.l0_query();
        if (!s.ok) continue;
        ++succ;
        if (!supp.count(s.index) || supp[s.index] != s.count) ++bad_index;
        else ++tally[s.index];
    }
    double tv = 0.0;
    for (const auto& [item, c] : supp)
        tv += std::fabs((double)tally[item] / (double)succ - 1.0 / 16.0);
    tv /= 2.0;
    double fail_frac = (double)(draws - succ) / (double)draws;
    bool pass = tv <= 0.02 && fail_frac <= 0.02 && bad_index == 0;
    return {pass, fmt("TV %.4f, failures %.4f, wrong recoveries %lld", tv, fail_frac,
                      (long long)bad_index)};
}

Outcome criterion8() {
    int recall = 0, accurate = 0;
    double ell = 20.0, eps = 0.3;
    for (uint64_t t = 0; t < 100; ++t) {
        std::mt19937_64 rng(8800 + t);
        item_t n = 4096;
        std::map<item_t, count_t> counts;
        for (int i = 0; i < 60; ++i)
            counts[(item_t)(rng() % n) + 1] += (count_t)(rng() % 21) + 5;
        item_t planted;
        do {
            planted = (item_t)(rng() % n) + 1;
        } while (counts.count(planted));
        count_t bg = 0;
        for (const auto& [i, c] : counts) bg += c;
        counts[planted] = (count_t)std::max<count_t>(1, bg / 8);  // mass ~0.11 > 1/ell

        HHParams hp;
        hp.n = n;
        hp.ell = ell;
        hp.eps = eps;
        hp.mode = (t % 2) ? HHMode::InsertionOnly : HHMode::Turnstile;
        hp.seed = rng();
        hp.delta = 0.001;
        HeavyHitterSketch sk(hp);
        count_t m = 0;
        for (const auto& [i, c] : counts) {
            if (hp.mode == HHMode::Turnstile && (rng() & 1)) {
                sk.hh_update({i, c + 3});
                sk.hh_update({i, -3});
            } else {
                sk.hh_update({i, c});
            }
            m += c;
        }
        double p = (double)counts[planted] / (double)m;
        auto Z = sk.hh_query(ell, m);
        for (const auto& [item, z] : Z) {
            if (item != planted) continue;
            ++recall;
            if (std::fabs(z - p) <= eps / ell + 1e-12) ++accurate;
            break;
        }
    }
    bool pass = recall >= 99 && accurate >= 99;
    return {pass, fmt("recall %d/100, within eps/ell %d/100", recall, accurate)};
}

Outcome criterion9() {
    int classified = 0;
    bool zero_ok = true, margin_ok = true;
    double gamma = 0.2;
    for (uint64_t t = 0; t < 100; ++t) {
        std::mt19937_64 rng(9900 + t);
        GadgetSpec s;
        s.family = GadgetSpec::Family::Proper;
        s.n = 4096;  // u = 64
        s.gamma = gamma;
        s.a_bits.resize(64);
        for (auto& b : s.a_bits) b = (int)(rng() & 1);
        s.j = 1 + (int64_t)(rng() % 64);

        s.a_bits[(size_t)s.j - 1] = 1;
        auto on = gadget_stream(s);
        ExactDistribution d1 = exact_from_source(*on);
        double err1 = optimal_histogram_exact(d1, 2).err;

        s.a_bits[(size_t)s.j - 1] = 0;
        auto off = gadget_stream(s);
        ExactDistribution d0 = exact_from_source(*off);
        double err0 = optimal_histogram_exact(d0, 2).err;

        item_t u = 64;
        double margin =
            std::floor(gamma * (double)u) * (double)(u - 1) / (double)d1.total();
        if (err0 > 1e-12) zero_ok = false;
        if (err1 < margin - 1e-12) margin_ok = false;
        if (err0 < margin / 2.0 && err1 > margin / 2.0) ++classified;
    }
    bool pass = zero_ok && margin_ok && classified == 100;
    return {pass, fmt("classified %d/100, zero-case %s, margin-case %s", classified,
                      zero_ok ? "clean" : "violated", margin_ok ? "clean" : "violated")};
}

Outcome criterion10() {
    SynthParams sp;
    sp.n = 100000;
    sp.length = 1000000;
    auto src = generate_synthetic(SynthKind::Zipf, sp, 11);
    std::string path = "/tmp/histo_acceptance_zipf.txt";
    write_stream_file(path, *src);

    SweepConfig cfg;
    cfg.algos = {"onepass", "twopass", "fixed-domain"};
    cfg.spaces = {300, 1000, 3000};
    cfg.k = 10;
    cfg.eps = 0.25;
    cfg.trials = 10;
    cfg.seed = 1;
    std::vector<RunRecord> recs = run_sweep(path, cfg);

    std::map<std::pair<std::string, int64_t>, std::pair<double, int>> agg;
    for (const auto& r : recs) {
        auto& [sum, cnt] = agg[{r.algo, r.space}];
        sum += r.err_support;
        ++cnt;
    }
    auto mean = [&](const std::string& a, int64_t s) {
        auto& [sum, cnt] = agg.at({a, s});
        return sum / (double)cnt;
    };
    bool pass = true;
    std::string detail;
    for (int64_t s : cfg.spaces) {
        double o = mean("onepass", s), tw = mean("twopass", s), fd = mean("fixed-domain", s);
        if (!(o < fd && tw < fd)) pass = false;
        detail += fmt("%ss=%lld: 1p %.3f / 2p %.3f / fd %.3f", detail.empty() ? "" : "; ",
                      (long long)s, o, tw, fd);
    }
    return {pass, detail};
}

Outcome criterion11() {
    int mismatches = 0;
    for (uint64_t t = 0; t < 200; ++t) {
        std::mt19937_64 rng(1100 + t);
        item_t n = 5 + (item_t)(rng() % 60);
        int supp = 1 + (int)(rng() % (uint64_t)std::min<item_t>(12, n));
        std::set<item_t> picked;
        while ((int)picked.size() < supp) picked.insert((item_t)(rng() % n) + 1);
        ExactDistribution d(n);
        std::vector<count_t> cs;
        for (item_t i : picked) {
            count_t c = (count_t)(rng() % 9) + 1;
            d.apply_update({i, c});
            cs.push_back(c);
        }
        int k = 1 + (int)(rng() % 3);

        // exhaustive: every split of the support sequence into <= k runs,
        // each valued at its lower median, cost in exact integer counts
        int64_t best = INT64_MAX;
        int gaps = supp - 1;
        for (uint32_t mask = 0; mask < (1u << gaps); ++mask) {
            if (std::popcount(mask) > k - 1) continue;
            int64_t cost = 0;
            size_t a = 0;
            for (size_t b = 0; b <= (size_t)gaps; ++b) {
                if (b < (size_t)gaps && !(mask >> b & 1)) continue;
                std::vector<count_t> seg(cs.begin() + (long)a, cs.begin() + (long)b + 1);
                std::sort(seg.begin(), seg.end());
                count_t med = seg[(seg.size() - 1) / 2];
                for (count_t c : seg) cost += std::llabs((long long)(c - med));
                a = b + 1;
            }
            best = std::min(best, cost);
        }
        OptResult got = optimal_histogram_exact(d, k);
        if (got.err != (double)best / (double)d.total()) ++mismatches;
    }
    return {mismatches == 0, fmt("%d mismatches across 200 instances", mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
    Outcome (*crit[11])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8,
                             criterion9, criterion10, criterion11};
    double caps[11] = {10, 1, 30, 60, 120, 180, 60, 60, 60, 300, 30};

    int lo = 1, hi = 11;
    if (argc > 1) {
        int i = std::atoi(argv[1]);
        if (i < 1 || i > 11) {
            std::fprintf(stderr, "usage: %s [criterion 1..11]\n", argv[0]);
            return 2;
        }
        lo = hi = i;
    }
    int failures = 0;
    for (int i = lo; i <= hi; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = crit[i - 1]();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = out.pass && secs <= caps[i - 1];
        std::printf("criterion %d: %s (%s, %.1fs%s)\n", i, ok ? "PASS" : "FAIL",
                    out.detail.c_str(), secs,
                    secs > caps[i - 1] ? ", over the time cap" : "");
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
