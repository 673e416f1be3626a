#include "histo/gadgets.hpp"

#include <cmath>

#include "histo/errors.hpp"

namespace histo {

namespace {

item_t isqrt_exact(item_t n) {
    item_t r = (item_t)std::llround(std::sqrt((double)n));
    if (r < 1 || r * r != n) throw BadParams("gadget needs n to be a perfect square");
    return r;
}

std::unique_ptr<VectorSource> disjointness(const GadgetSpec& s) {
    if (s.n < 1 || (item_t)s.a_bits.size() != s.n || (item_t)s.b_bits.size() != s.n)
        throw BadParams("disjointness needs bit vectors of length n");
    std::vector<StreamUpdate> ups;
    for (item_t i = 0; i < s.n; ++i)
        if (s.a_bits[(size_t)i]) ups.push_back({i + 1, 1});
    for (item_t i = 0; i < s.n; ++i)
        if (s.b_bits[(size_t)i]) ups.push_back({i + 1, 1});
    return std::make_unique<VectorSource>(s.n, std::move(ups));
}

// universe [1..3n]: u = sqrt(n) block pairs A_t, B_t of length u tile [1..2n],
// a unit-count tail fills (2n, 3n]
std::unique_ptr<VectorSource> proper(const GadgetSpec& s) {
    item_t u = isqrt_exact(s.n);
    if ((item_t)s.a_bits.size() != u) throw BadParams("proper gadget needs u = sqrt(n) bits");
    if (s.j < 1 || s.j > u) throw BadParams("proper gadget needs j in [1..sqrt(n)]");
    if (s.gamma <= 0.0 || s.gamma > 1.0) throw BadParams("proper gadget needs gamma in (0,1]");
    auto block_a = [&](item_t t) { return (2 * t - 2) * u + 1; };  // first item of A_t
    auto block_b = [&](item_t t) { return (2 * t - 1) * u + 1; };  // first item of B_t

    std::vector<StreamUpdate> ups;
    for (item_t t = 1; t <= u; ++t)
        if (s.a_bits[(size_t)(t - 1)])
            for (item_t x = 0; x < u; ++x) ups.push_back({block_a(t) + x, 1});
    for (item_t x = 2 * s.n + 1; x <= 3 * s.n; ++x) ups.push_back({x, 1});

    // Bob: erase the blocks he already knows, then plant elephants that pin
    // the optimal pieces onto the earlier B blocks
    for (item_t t = 1; t < s.j; ++t)
        if (s.a_bits[(size_t)(t - 1)])
            for (item_t x = 0; x < u; ++x) ups.push_back({block_a(t) + x, -1});
    item_t per = s.j >= 2 ? u / (s.j - 1) : 0;
    for (item_t t = 1; t < s.j; ++t)
        for (item_t x = 0; x < per; ++x) ups.push_back({block_b(t) + x, u});
    item_t g = (item_t)std::floor(s.gamma * (double)u);
    for (item_t x = 0; x < g; ++x) ups.push_back({block_b(s.j) + x, u});
    return std::make_unique<VectorSource>(3 * s.n, std::move(ups));
}

// chunks S_t of length u tile [1..n]; Alice spreads a*u mice per set chunk
// over b*u subintervals; Bob erases the chunks before his index and plants
// one u-count elephant at the head of each
std::unique_ptr<VectorSource> bicriteria(const GadgetSpec& s) {
    item_t u = isqrt_exact(s.n);
    double a = s.ca, b = s.cb, c = s.cc, p = s.pf;
    if (!(c < b)) throw BadParams("bicriteria needs c < b");
    if (!(a <= 1.0 - b)) throw BadParams("bicriteria needs a <= 1 - b");
    if (!(p < c)) throw BadParams("bicriteria needs piece fraction < c");
    double ab = a / b;
    if (std::fabs(ab - std::round(ab)) > 1e-9) throw BadParams("bicriteria needs a/b integral");
    double inv_b = 1.0 / b;
    if (std::fabs(inv_b - std::round(inv_b)) > 1e-9)
        throw BadParams("bicriteria needs 1/b integral");
    item_t sub_w = (item_t)std::llround(inv_b);           // subinterval width
    item_t mice = (item_t)std::llround(ab);               // mice per subinterval
    item_t subs = (item_t)std::llround(b * (double)u);    // subintervals per chunk
    if (subs < 1 || sub_w * subs != u)
        throw BadParams("bicriteria needs b*sqrt(n) subintervals tiling each chunk");
    if (mice > sub_w) throw BadParams("bicriteria mice per subinterval exceed its width");
    if ((item_t)s.a_bits.size() != u) throw BadParams("bicriteria needs u = sqrt(n) bits");
    if (s.j < 1 || s.j > u) throw BadParams("bicriteria needs j in [1..sqrt(n)]");

    std::vector<StreamUpdate> ups;
    auto chunk_first = [&](item_t t) { return (t - 1) * u + 1; };
    for (item_t t = 1; t <= u; ++t) {
        if (!s.a_bits[(size_t)(t - 1)]) continue;
        for (item_t z = 0; z < subs; ++z)
            for (item_t x = 0; x < mice; ++x)
                ups.push_back({chunk_first(t) + z * sub_w + x, 1});
    }
    for (item_t t = 1; t < s.j; ++t) {
        if (!s.a_bits[(size_t)(t - 1)]) continue;
        for (item_t z = 0; z < subs; ++z)
            for (item_t x = 0; x < mice; ++x)
                ups.push_back({chunk_first(t) + z * sub_w + x, -1});
    }
    for (item_t t = 1; t < s.j; ++t) ups.push_back({chunk_first(t), u});
    return std::make_unique<VectorSource>(s.n, std::move(ups));
}

}  // namespace

void validate_gadget(const GadgetSpec& spec) {
    // construction without materializing more than the checks require
    switch (spec.family) {
        case GadgetSpec::Family::Disjointness:
            if (spec.n < 1 || (item_t)spec.a_bits.size() != spec.n ||
                (item_t)spec.b_bits.size() != spec.n)
                throw BadParams("disjointness needs bit vectors of length n");
            return;
        case GadgetSpec::Family::Proper:
        case GadgetSpec::Family::Bicriteria:
            gadget_stream(spec);
            return;
    }
    throw BadParams("unknown gadget family");
}

std::unique_ptr<VectorSource> gadget_stream(const GadgetSpec& spec) {
    switch (spec.family) {
        case GadgetSpec::Family::Disjointness:
            return disjointness(spec);
        case GadgetSpec::Family::Proper:
            return proper(spec);
        case GadgetSpec::Family::Bicriteria:
            return bicriteria(spec);
    }
    throw BadParams("unknown gadget family");
}

}  // namespace histo
