#include "histo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"
#include "histo/l0_sampler.hpp"

namespace histo {

Histogram fixed_baseline(StreamSource& source, const BaselineConfig& cfg_in) {
    BaselineConfig cfg = cfg_in;
    if (cfg.n == 0) cfg.n = source.domain_size();
    if (cfg.n != source.domain_size())
        throw DomainMismatch("config domain differs from the source domain");
    if (cfg.s < 1) throw BadParams("baseline needs s >= 1");
    if (cfg.scale_k > 0) cfg.k = std::max<int64_t>(1, cfg.s / cfg.scale_k);
    if (cfg.k < 1 || cfg.k > cfg.s) throw BadParams("baseline needs 1 <= k <= s");
    cfg.k = std::min(cfg.k, cfg.n);
    int64_t per = cfg.s / cfg.k;

    // piece j covers [floor(j*n/k)+1, floor((j+1)*n/k)]
    std::vector<std::pair<item_t, item_t>> iv((size_t)cfg.k);
    for (int64_t j = 0; j < cfg.k; ++j)
        iv[(size_t)j] = {(item_t)(j * cfg.n / cfg.k) + 1, (item_t)((j + 1) * cfg.n / cfg.k)};

    std::vector<std::vector<L0Sampler>> samplers;
    std::vector<std::vector<item_t>> picked;  // domain variant indices
    uint64_t s1 = derive_seed(cfg.seed, 0x81);
    if (cfg.variant == BaselineVariant::Support) {
        samplers.resize((size_t)cfg.k);
        for (int64_t j = 0; j < cfg.k; ++j) {
            uint64_t sj = derive_seed(s1, (uint64_t)j);
            samplers[(size_t)j].reserve((size_t)per);
            for (int64_t t = 0; t < per; ++t)
                samplers[(size_t)j].emplace_back(cfg.n, iv[(size_t)j].first,
                                                 iv[(size_t)j].second,
                                                 derive_seed(sj, (uint64_t)t),
                                                 cfg.sampler_chains);
        }
    } else {
        picked.resize((size_t)cfg.k);
        std::mt19937_64 g(s1);
        for (int64_t j = 0; j < cfg.k; ++j) {
            auto [a, b] = iv[(size_t)j];
            for (int64_t t = 0; t < per; ++t)
                picked[(size_t)j].push_back(a + (item_t)uniform_below(g, (uint64_t)(b - a + 1)));
        }
    }

    source.reset();
    std::map<item_t, count_t> agg;
    count_t m = 0;
    StreamUpdate u;
    while (source.next(u)) {
        agg[u.item] += u.delta;
        m += u.delta;
    }
    if (m <= 0) throw EmptyStream("baseline over an empty stream");

    Histogram h;
    h.n = cfg.n;
    for (int64_t j = 0; j < cfg.k; ++j) {
        auto [a, b] = iv[(size_t)j];
        std::vector<double> got;
        if (cfg.variant == BaselineVariant::Support) {
            for (auto it = agg.lower_bound(a); it != agg.end() && it->first <= b; ++it) {
                if (it->second == 0) continue;
                for (auto& sp : samplers[(size_t)j]) sp.l0_update(it->first, it->second);
            }
            for (const auto& sp : samplers[(size_t)j]) {
                L0Sample d = sp.l0_query();
                if (d.ok) got.push_back((double)d.count / (double)m);
            }
        } else {
            for (item_t x : picked[(size_t)j]) {
                auto it = agg.find(x);
                count_t c = it == agg.end() ? 0 : it->second;
                got.push_back((double)c / (double)m);  // zeros stay in
            }
        }
        double v = 0.0;
        if (!got.empty()) {
            std::sort(got.begin(), got.end());
            v = std::clamp(got[(got.size() - 1) / 2], 0.0, 1.0);
        }
        if (j + 1 < cfg.k) h.breakpoints.push_back(b);
        h.values.push_back(v);
    }
    return h;
}

}  // namespace histo
