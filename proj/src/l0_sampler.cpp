#include "histo/l0_sampler.hpp"

#include <bit>
#include <cmath>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"

namespace histo {

L0Sampler::L0Sampler(item_t n, item_t lo, item_t hi, uint64_t seed, int chains,
                     double delta)
    : n_(n), lo_(lo), hi_(hi) {
    if (n <= 0 || lo < 1 || hi > n || lo > hi)
        throw BadParams("sampler restriction must be a nonempty subinterval of the domain");
    if (chains <= 0) {
        if (delta <= 0 || delta >= 1) delta = 0.01;
        chains = std::max(2, (int)std::ceil(std::log2(1.0 / delta)) + 1);
    }
    chains_ = chains;
    uint64_t width = (uint64_t)(hi - lo + 1);
    levels_ = (int)std::bit_width(width) + 2;
    chain_seeds_.resize(chains_);
    for (int r = 0; r < chains_; ++r) chain_seeds_[r] = derive_seed(seed, (uint64_t)r);
    units_.assign((size_t)chains_ * levels_, OneSparse{});
}

void L0Sampler::l0_update(item_t item, count_t delta) {
    if (item < 1 || item > n_) throw DomainViolation("update outside the sampler domain");
    if (item < lo_ || item > hi_ || delta == 0) return;
    uint64_t ii = (uint64_t)item;
    uint64_t sq = (uint64_t)delta * (ii * ii);
    for (int r = 0; r < chains_; ++r) {
        int depth = std::countr_zero(hash64(chain_seeds_[r], ii) | (1ull << 63));
        if (depth >= levels_) depth = levels_ - 1;
        // level j keeps items whose hash depth is at least j (nested levels)
        OneSparse* row = &units_[(size_t)r * levels_];
        for (int j = 0; j <= depth; ++j) {
            row[j].count_sum += delta;
            row[j].index_sum += delta * item;
            row[j].index_sq_sum += sq;
        }
    }
}

bool L0Sampler::recover(const OneSparse& u, item_t* index, count_t* count) const {
    if (u.count_sum <= 0) return false;
    if (u.index_sum % u.count_sum != 0) return false;
    count_t idx = u.index_sum / u.count_sum;
    if (idx < lo_ || idx > hi_) return false;
    if ((__int128)idx * u.count_sum != (__int128)u.index_sum) return false;
    uint64_t expect = (uint64_t)u.count_sum * ((uint64_t)idx * (uint64_t)idx);
    if (expect != u.index_sq_sum) return false;
    *index = idx;
    *count = u.count_sum;
    return true;
}

L0Sample L0Sampler::l0_query() const {
    L0Sample out;
    const OneSparse& base = units_[0];
    if (base.count_sum == 0 && base.index_sum == 0 && base.index_sq_sum == 0) {
        out.empty = true;
        return out;
    }
    for (int r = 0; r < chains_; ++r) {
        const OneSparse* row = &units_[(size_t)r * levels_];
        for (int j = levels_ - 1; j >= 0; --j) {
            const OneSparse& u = row[j];
            if (u.count_sum == 0 && u.index_sum == 0 && u.index_sq_sum == 0) continue;
            item_t idx;
            count_t cnt;
            if (recover(u, &idx, &cnt)) {
                out.ok = true;
                out.index = idx;
                out.count = cnt;
                return out;
            }
        }
    }
    return out;  // support nonempty but no chain produced a clean cell
}

}  // namespace histo
