#ifndef HISTO_BASELINES_HPP_
#define HISTO_BASELINES_HPP_

#include <cstdint>

#include "histo/histogram.hpp"
#include "histo/stream.hpp"

namespace histo {

enum class BaselineVariant { Support, Domain };

struct BaselineConfig {
    item_t n = 0;       // 0 = take the source's domain
    int64_t k = 1;
    int64_t s = 1;      // total sample budget, k <= s
    uint64_t seed = 0;
    BaselineVariant variant = BaselineVariant::Support;
    int scale_k = 0;    // 0 = fixed k; 3 or 20 = k derived as s / scale_k
    int sampler_chains = 2;
};

// k equal-width pieces, each valued by the median of floor(s/k) samples:
// interval-restricted support samples or uniform domain indices (zeros kept)
Histogram fixed_baseline(StreamSource& source, const BaselineConfig& cfg);

}  // namespace histo

#endif  // HISTO_BASELINES_HPP_
