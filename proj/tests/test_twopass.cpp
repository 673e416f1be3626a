#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "histo/errors.hpp"
#include "histo/histogram.hpp"
#include "histo/stream.hpp"
#include "histo/twopass.hpp"

using namespace histo;

namespace {

VectorSource make_source(item_t n, const std::vector<std::pair<item_t, count_t>>& items) {
    std::vector<StreamUpdate> ups;
    for (const auto& [i, c] : items) ups.push_back({i, c});
    return VectorSource(n, std::move(ups));
}

ExactDistribution make_dist(item_t n, const std::vector<std::pair<item_t, count_t>>& items) {
    ExactDistribution d(n);
    for (const auto& [i, c] : items) d.apply_update({i, c});
    return d;
}

// H singletons plus L intervals must tile [1..n] with no overlap
void check_tiling(const IntervalPartition& part, item_t n) {
    std::vector<std::pair<item_t, item_t>> ivs;
    for (item_t h : part.H) ivs.emplace_back(h, h);
    for (const auto& [a, b] : part.L) ivs.emplace_back(a, b);
    std::sort(ivs.begin(), ivs.end());
    item_t expect = 1;
    for (const auto& [a, b] : ivs) {
        REQUIRE(a == expect);
        REQUIRE(b >= a);
        expect = b + 1;
    }
    REQUIRE(expect == n + 1);
}

class OneShotSource : public StreamSource {
public:
    OneShotSource(item_t n, std::vector<StreamUpdate> ups) : inner_(n, std::move(ups)) {}
    item_t domain_size() const override { return inner_.domain_size(); }
    uint64_t total_updates() const override { return inner_.total_updates(); }
    void reset() override { inner_.reset(); }
    bool next(StreamUpdate& u) override { return inner_.next(u); }
    bool replayable() const override { return false; }

private:
    VectorSource inner_;
};

}  // namespace

TEST_CASE("config and stream validation") {
    auto src = [] { return make_source(16, {{3, 5}}); };

    TwoPassConfig bad_k;
    bad_k.k = 0;
    auto s1 = src();
    CHECK_THROWS_AS(twopass_run(s1, bad_k), BadParams);

    TwoPassConfig bad_eps;
    bad_eps.eps = 1.0;
    auto s2 = src();
    CHECK_THROWS_AS(twopass_run(s2, bad_eps), BadParams);

    TwoPassConfig bad_n;
    bad_n.n = 8;
    auto s3 = src();
    CHECK_THROWS_AS(twopass_run(s3, bad_n), DomainMismatch);

    TwoPassConfig ok;
    OneShotSource once(16, {{3, 5}});
    CHECK_THROWS_AS(twopass_run(once, ok), NonReplayableSource);

    for (HHHBackend be : {HHHBackend::Exact, HHHBackend::Turnstile}) {
        TwoPassConfig cfg;
        cfg.backend = be;
        VectorSource empty(16, {});
        CHECK_THROWS_AS(twopass_run(empty, cfg), EmptyStream);
        VectorSource churned = make_source(16, {{3, 5}, {3, -5}});
        CHECK_THROWS_AS(twopass_run(churned, cfg), EmptyStream);
    }
}

TEST_CASE("single item of mass one becomes an exact heavy singleton") {
    for (HHHBackend be : {HHHBackend::Exact, HHHBackend::Turnstile}) {
        CAPTURE((int)be);
        auto src = make_source(64, {{23, 500}});
        TwoPassConfig cfg;
        cfg.k = 2;
        cfg.eps = 0.25;
        cfg.seed = 4;
        cfg.backend = be;
        TwoPassResult r = twopass_run_full(src, cfg);
        check_tiling(r.part, 64);
        CHECK(std::count(r.part.H.begin(), r.part.H.end(), 23) == 1);
        CHECK(eval(r.hist, 23) == 1.0);
        for (item_t i : {1, 22, 24, 64}) CHECK(eval(r.hist, (item_t)i) == 0.0);
        ExactDistribution d = make_dist(64, {{23, 500}});
        CHECK(support_error(d, r.hist) == 0.0);
    }
}

TEST_CASE("uniform stream splits into width-one intervals recovered exactly") {
    item_t n = 16;
    std::vector<std::pair<item_t, count_t>> items;
    for (item_t i = 1; i <= n; ++i) items.emplace_back(i, 1);
    auto src = make_source(n, items);

    TwoPassConfig cfg;
    cfg.k = 2;
    cfg.eps = 0.5;
    cfg.seed = 11;
    cfg.backend = HHHBackend::Exact;
    TwoPassResult r = twopass_run_full(src, cfg);
    check_tiling(r.part, n);
    CHECK(r.part.H.empty());
    CHECK(r.part.L.size() == 16);
    REQUIRE(r.hist.values.size() == 16);
    for (double v : r.hist.values) CHECK(v == 1.0 / 16.0);
    ExactDistribution d = make_dist(n, items);
    CHECK(support_error(d, r.hist) == 0.0);
}

TEST_CASE("heavy singleton and odd-support interval medians are exact") {
    item_t n = 32;
    std::vector<std::pair<item_t, count_t>> items = {{3, 1}, {7, 2}, {12, 4}, {20, 40}};
    auto src = make_source(n, items);
    ExactDistribution d = make_dist(n, items);

    TwoPassConfig cfg;
    cfg.k = 1;
    cfg.eps = 0.5;
    cfg.seed = 6;
    cfg.q = 501;
    cfg.backend = HHHBackend::Exact;
    TwoPassResult r = twopass_run_full(src, cfg);
    check_tiling(r.part, n);
    REQUIRE(r.part.H == std::vector<item_t>{20});
    REQUIRE(r.part.L == std::vector<std::pair<item_t, item_t>>{{1, 19}, {21, 32}});

    CHECK(eval(r.hist, 20) == 40.0 / 47.0);  // exact second-pass count
    // median of q draws over the three-point support {1/47, 2/47, 4/47}
    for (item_t i : {3, 7, 12}) CHECK(eval(r.hist, (item_t)i) == 2.0 / 47.0);
    CHECK(eval(r.hist, 25) == 0.0);  // empty-support interval
    CHECK(support_error(d, r.hist) == doctest::Approx(3.0 / 47.0).epsilon(1e-12));
}

TEST_CASE("a single sampler per interval still yields a valid histogram") {
    item_t n = 64;
    std::vector<std::pair<item_t, count_t>> items = {{5, 3}, {6, 3}, {40, 3}, {41, 3}};
    auto src = make_source(n, items);
    TwoPassConfig cfg;
    cfg.k = 1;
    cfg.eps = 0.5;
    cfg.q = 1;
    cfg.seed = 2;
    cfg.backend = HHHBackend::Exact;
    TwoPassResult r = twopass_run_full(src, cfg);
    check_tiling(r.part, n);
    REQUIRE(r.hist.values.size() == r.hist.breakpoints.size() + 1);
    for (double v : r.hist.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("randomized instances meet the bicriteria bound in exact mode") {
    int ok = 0;
    for (uint64_t t = 0; t < 20; ++t) {
        std::mt19937_64 rng(4400 + t);
        item_t n = 1024;
        int supp = 10 + (int)(rng() % 31);
        std::set<item_t> picked;
        while ((int)picked.size() < supp) picked.insert((item_t)(rng() % n) + 1);
        std::vector<std::pair<item_t, count_t>> items;
        for (item_t i : picked) items.emplace_back(i, (count_t)(rng() % 100) + 1);
        ExactDistribution d = make_dist(n, items);
        int k = 1 + (int)(rng() % 4);

        auto src = make_source(n, items);
        TwoPassConfig cfg;
        cfg.k = k;
        cfg.eps = 0.25;
        cfg.seed = 880 + t;
        cfg.backend = HHHBackend::Exact;
        TwoPassResult r = twopass_run_full(src, cfg);

        check_tiling(r.part, n);
        int64_t bound = 20 * (int64_t)std::ceil((double)k / cfg.eps) + 2;
        CHECK((int64_t)r.hist.values.size() <= bound);
        CHECK((int64_t)r.part.H.size() <= (int64_t)std::ceil(2.0 * k / cfg.eps));
        for (item_t h : r.part.H) CHECK(eval(r.hist, h) == d.mass(h));

        double opt = optimal_histogram_exact(d, k).err;
        if (support_error(d, r.hist) <= opt + cfg.eps) ++ok;
    }
    CHECK(ok >= 18);
}

TEST_CASE("turnstile backend keeps the invariants and tracks the optimum") {
    int ok = 0;
    for (uint64_t t = 0; t < 20; ++t) {
        std::mt19937_64 rng(5500 + t);
        item_t n = 1024;
        int supp = 10 + (int)(rng() % 31);
        std::set<item_t> picked;
        while ((int)picked.size() < supp) picked.insert((item_t)(rng() % n) + 1);
        std::vector<std::pair<item_t, count_t>> items;
        for (item_t i : picked) items.emplace_back(i, (count_t)(rng() % 100) + 1);
        ExactDistribution d = make_dist(n, items);
        int k = 1 + (int)(rng() % 3);

        auto src = make_source(n, items);
        TwoPassConfig cfg;
        cfg.k = k;
        cfg.eps = 0.25;
        cfg.seed = 990 + t;
        cfg.backend = HHHBackend::Turnstile;
        TwoPassResult r = twopass_run_full(src, cfg);

        check_tiling(r.part, n);
        int64_t bound = 20 * (int64_t)std::ceil((double)k / cfg.eps) + 2;
        CHECK((int64_t)r.hist.values.size() <= bound);
        for (item_t h : r.part.H) CHECK(eval(r.hist, h) == d.mass(h));

        double opt = optimal_histogram_exact(d, k).err;
        if (support_error(d, r.hist) <= opt + cfg.eps) ++ok;
    }
    CHECK(ok >= 15);
}

TEST_CASE("identical source, config, and seed give identical output") {
    SynthParams sp;
    sp.n = 512;
    sp.length = 8000;
    auto base = generate_synthetic(SynthKind::Zipf, sp, 21);

    for (HHHBackend be : {HHHBackend::Exact, HHHBackend::Turnstile}) {
        TwoPassConfig cfg;
        cfg.k = 3;
        cfg.eps = 0.25;
        cfg.seed = 14;
        cfg.backend = be;
        VectorSource a(512, base->updates());
        VectorSource b(512, base->updates());
        Histogram ha = twopass_run(a, cfg);
        Histogram hb = twopass_run(b, cfg);
        CHECK(ha.breakpoints == hb.breakpoints);
        CHECK(ha.values == hb.values);
    }
}

TEST_CASE("budget mode keeps pieces and space near the budget") {
    SynthParams sp;
    sp.n = 4096;
    sp.length = 50000;
    auto base = generate_synthetic(SynthKind::Zipf, sp, 33);

    for (int64_t budget : {60, 200}) {
        TwoPassConfig cfg;
        cfg.k = 5;
        cfg.eps = 0.25;
        cfg.seed = 3;
        cfg.space_budget = budget;
        VectorSource a(4096, base->updates());
        TwoPassResult r = twopass_run_full(a, cfg);
        check_tiling(r.part, 4096);
        CHECK((int64_t)r.hist.values.size() <= budget);
        CHECK(r.space_words <= 2 * budget);
        CHECK(r.space_words >= (int64_t)r.hist.values.size());

        VectorSource b(4096, base->updates());
        TwoPassResult r2 = twopass_run_full(b, cfg);
        CHECK(r.hist.breakpoints == r2.hist.breakpoints);
        CHECK(r.hist.values == r2.hist.values);
    }
}

TEST_CASE("median tail check validation and trivial cases") {
    CHECK_THROWS_AS(median_tail_check({}, 8, 0.5, 10), BadParams);
    CHECK_THROWS_AS(median_tail_check({0.5}, 0, 0.5, 10), BadParams);
    CHECK_THROWS_AS(median_tail_check({0.5}, 8, 0.5, 0), BadParams);
    CHECK_THROWS_AS(median_tail_check({1.5}, 8, 0.5, 10), BadParams);
    CHECK_THROWS_AS(median_tail_check({-0.1}, 8, 0.5, 10), BadParams);

    std::vector<double> flat(100, 0.02);
    CHECK(median_tail_check(flat, 4, 0.25, 500, 9) == 0.0);

    std::vector<double> single = {0.7};
    CHECK(median_tail_check(single, 1, 0.1, 200, 9) == 0.0);
}

TEST_CASE("median tail check stays under the analytic bound on a bimodal set") {
    std::vector<double> masses;
    for (int i = 0; i < 610; ++i) masses.push_back(0.001);
    for (int i = 0; i < 390; ++i) masses.push_back(1.0);
    double s = 128, eps = 0.5;
    double rate = median_tail_check(masses, (int64_t)s, eps, 2000, 5);
    double bound = 2.0 * std::exp(-eps * eps * s / 8.0);
    CHECK(rate <= bound + 0.015);
}

TEST_CASE("median tail check is deterministic in the seed") {
    std::vector<double> masses = {0.1, 0.1, 0.4, 0.9, 0.9};
    double a = median_tail_check(masses, 3, 0.2, 400, 77);
    double b = median_tail_check(masses, 3, 0.2, 400, 77);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
}
