#ifndef HISTO_ONEPASS_HPP_
#define HISTO_ONEPASS_HPP_

#include <cstdint>

#include "histo/histogram.hpp"
#include "histo/stream.hpp"

namespace histo {

struct OnePassConfig {
    item_t n = 0;       // 0 = take the source's domain
    int64_t k = 1;
    double eps = 0.25;
    int64_t s = 0;      // 0 = ceil(4*sqrt(n)*log2(n)*k/eps^3), capped at n
    uint64_t seed = 0;
    item_t support_bound = 0;  // > 0 switches the sample set to L0 samplers
    bool experimental = false; // s/2 space-saving entries + s/2 L0 samples,
                               // gaps valued at the global sample-mass median
    double ell = 0.0;          // heavy-hitter threshold 1/ell; 0 = eps^2/sqrt(n)
    double hh_delta = 1.0 / 20;
};

struct OnePassResult {
    Histogram hist;
    int64_t space_words = 0;  // samples + sketch words
    int64_t sample_count = 0;
    int64_t hh_entries = 0;
};

OnePassResult onepass_run_full(StreamSource& source, const OnePassConfig& cfg);
Histogram onepass_run(StreamSource& source, const OnePassConfig& cfg);

// shared plumbing: base histogram with unit-width carve-outs at the given
// (item, value) points; points sorted by item
Histogram override_singletons(const Histogram& base,
                              const std::vector<std::pair<item_t, double>>& points);

}  // namespace histo

#endif  // HISTO_ONEPASS_HPP_
