#ifndef HISTO_TWOPASS_HPP_
#define HISTO_TWOPASS_HPP_

#include <cstdint>
#include <vector>

#include "histo/hhh.hpp"
#include "histo/histogram.hpp"
#include "histo/stream.hpp"

namespace histo {

enum class HHHBackend { Exact, Turnstile, InsertionOnly };

struct TwoPassConfig {
    item_t n = 0;       // 0 = take the source's domain
    int64_t k = 1;
    double eps = 0.25;
    int64_t q = 0;      // samplers per light interval; 0 = ceil(16*ln(k/eps)/eps^2)
    uint64_t seed = 0;
    HHHBackend backend = HHHBackend::Turnstile;  // Exact isolates the algorithm
    int64_t space_budget = 0;  // > 0: budgeted mode; per-level space-saving in
                               // pass 1, the same budget reused in pass 2
    int sampler_chains = 2;
};

struct TwoPassResult {
    Histogram hist;
    IntervalPartition part;
    int64_t space_words = 0;  // max of the two passes
};

TwoPassResult twopass_run_full(StreamSource& source, const TwoPassConfig& cfg);
Histogram twopass_run(StreamSource& source, const TwoPassConfig& cfg);

// Monte-Carlo tail probe for the sampled-median fit: empirical rate of
// cost(sample median) exceeding cost(true median) by more than eps * total
double median_tail_check(const std::vector<double>& masses, int64_t s, double eps,
                         int64_t trials, uint64_t seed = 0);

}  // namespace histo

#endif  // HISTO_TWOPASS_HPP_
