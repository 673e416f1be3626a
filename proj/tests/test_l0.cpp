#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"
#include "histo/l0_sampler.hpp"

using namespace histo;

TEST_CASE("singleton support is always recovered exactly") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        L0Sampler s(1000, 1, 1000, seed);
        s.l0_update(5, 7);
        L0Sample d = s.l0_query();
        REQUIRE(d.ok);
        CHECK(!d.empty);
        CHECK(d.index == 5);
        CHECK(d.count == 7);
    }
}

TEST_CASE("empty support is reported as empty") {
    L0Sampler s(1000, 1, 1000, 3);
    L0Sample d = s.l0_query();
    CHECK(d.empty);
    CHECK(!d.ok);

    // full cancellation returns to the empty state
    s.l0_update(17, 4);
    s.l0_update(17, -4);
    d = s.l0_query();
    CHECK(d.empty);
}

TEST_CASE("updates outside the restriction are ignored") {
    L0Sampler s(1000, 100, 200, 11);
    s.l0_update(99, 5);
    s.l0_update(201, 5);
    CHECK(s.l0_query().empty);
    s.l0_update(150, 2);
    L0Sample d = s.l0_query();
    REQUIRE(d.ok);
    CHECK(d.index == 150);
    CHECK(d.count == 2);
}

TEST_CASE("state is linear in the update multiset") {
    std::vector<std::pair<item_t, count_t>> ups = {
        {3, 5}, {90, 2}, {3, -4}, {57, 1}, {90, -2}, {3, -1}, {12, 9}};
    L0Sampler a(100, 1, 100, 42), b(100, 1, 100, 42);
    for (const auto& [i, c] : ups) a.l0_update(i, c);
    for (size_t j = ups.size(); j-- > 0;) b.l0_update(ups[j].first, ups[j].second);
    L0Sample da = a.l0_query(), db = b.l0_query();
    CHECK(da.empty == db.empty);
    CHECK(da.ok == db.ok);
    CHECK(da.index == db.index);
    CHECK(da.count == db.count);
}

TEST_CASE("recovered pairs are always exact") {
    // whatever a draw returns must match the true final count
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 300; ++trial) {
        item_t n = 512;
        std::vector<count_t> truth((size_t)n + 1, 0);
        L0Sampler s(n, 1, n, derive_seed(999, (uint64_t)trial));
        int support = 1 + (int)(g() % 40);
        for (int i = 0; i < support; ++i) {
            item_t it = (item_t)(g() % n) + 1;
            count_t c = (count_t)(g() % 9) + 1;
            s.l0_update(it, c);
            truth[(size_t)it] += c;
        }
        L0Sample d = s.l0_query();
        if (d.ok) {
            CHECK(truth[(size_t)d.index] == d.count);
            CHECK(d.count > 0);
        }
    }
}

TEST_CASE("two-item support splits draws about evenly") {
    int hit5 = 0, hit9 = 0, fail = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        L0Sampler s(64, 1, 64, derive_seed(31337, (uint64_t)t));
        s.l0_update(5, 3);
        s.l0_update(9, 11);
        L0Sample d = s.l0_query();
        if (!d.ok) {
            ++fail;
            continue;
        }
        if (d.index == 5) ++hit5;
        if (d.index == 9) ++hit9;
    }
    double p5 = (double)hit5 / (hit5 + hit9);
    CHECK(p5 == doctest::Approx(0.5).epsilon(0.04));
    CHECK((double)fail / trials <= 0.01 + 0.01);
}

TEST_CASE("draw failure stays within the failure budget") {
    std::mt19937_64 g(15);
    int fail = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        item_t n = 1024;
        L0Sampler s(n, 1, n, derive_seed(5150, (uint64_t)t));
        int support = 1 + (int)(g() % 1000);
        std::vector<item_t> items;
        for (item_t i = 1; i <= n; ++i) items.push_back(i);
        std::shuffle(items.begin(), items.end(), g);
        for (int i = 0; i < support; ++i) s.l0_update(items[(size_t)i], 1 + (count_t)(g() % 4));
        if (!s.l0_query().ok) ++fail;
    }
    CHECK((double)fail / trials <= 0.01 + 0.01);
}

TEST_CASE("chain count follows delta when not pinned") {
    L0Sampler a(256, 1, 256, 1);            // delta = 0.01 -> 8 chains
    L0Sampler b(256, 1, 256, 1, 2);         // pinned
    L0Sampler c(256, 1, 256, 1, 0, 0.125);  // ceil(log2(8)) + 1 = 4 chains
    int levels = 11;                        // bit_width(256) + 2
    CHECK(a.unit_count() == 8 * levels);
    CHECK(b.unit_count() == 2 * levels);
    CHECK(c.unit_count() == 4 * levels);
}
