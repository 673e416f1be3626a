#ifndef HISTO_L0_SAMPLER_HPP_
#define HISTO_L0_SAMPLER_HPP_

#include <cstdint>
#include <vector>

#include "histo/stream.hpp"

namespace histo {

// outcome of a support-sampling draw
struct L0Sample {
    bool empty = false;  // the restricted support is empty
    bool ok = false;     // false = recovery failed this draw
    item_t index = 0;
    count_t count = 0;   // exact final count of the sampled index
};

// sparse-recovery sampler over the final state of a strict turnstile stream,
// optionally restricted to a subinterval of the domain
class L0Sampler {
public:
    // chains = independent recovery chains; 0 picks a default from delta
    L0Sampler(item_t n, item_t lo, item_t hi, uint64_t seed, int chains = 0,
              double delta = 0.01);

    void l0_update(item_t item, count_t delta);
    L0Sample l0_query() const;
    int64_t unit_count() const { return (int64_t)units_.size(); }

private:
    struct OneSparse {
        count_t count_sum = 0;
        count_t index_sum = 0;
        uint64_t index_sq_sum = 0;  // mod 2^64 by design
    };
    item_t n_, lo_, hi_;
    int chains_, levels_;
    std::vector<uint64_t> chain_seeds_;
    std::vector<OneSparse> units_;  // chains_ x levels_, row-major

    bool recover(const OneSparse& u, item_t* index, count_t* count) const;
};

}  // namespace histo

#endif  // HISTO_L0_SAMPLER_HPP_
