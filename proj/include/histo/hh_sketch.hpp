#ifndef HISTO_HH_SKETCH_HPP_
#define HISTO_HH_SKETCH_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "histo/stream.hpp"

namespace histo {

// count-min matrix; in the strict turnstile model the final-state estimate
// never underestimates the true count
class CountMin {
public:
    CountMin() = default;
    CountMin(int64_t width, int depth, uint64_t seed);

    void update(uint64_t key, count_t delta);
    count_t estimate(uint64_t key) const;
    void merge(const CountMin& other);
    int64_t words() const { return (int64_t)table_.size(); }
    int64_t width() const { return width_; }
    int depth() const { return depth_; }

private:
    int64_t width_ = 0;
    int depth_ = 0;
    uint64_t seed_ = 0;
    std::vector<count_t> table_;  // depth rows of width counters
    std::vector<uint64_t> row_seeds_;
};

// classic space-saving summary for insertion-only streams
class SpaceSaving {
public:
    explicit SpaceSaving(int64_t capacity);

    void update(item_t item, count_t delta);
    // (count, overestimate bound) for a monitored item; (min_count, min_count)
    // upper bound for an unmonitored one, so estimates never underestimate
    std::pair<count_t, count_t> estimate(item_t item) const;
    bool contains(item_t item) const { return entries_.count(item) > 0; }
    std::vector<std::pair<item_t, count_t>> entries_by_count() const;  // descending
    size_t size() const { return entries_.size(); }
    int64_t capacity() const { return capacity_; }

private:
    struct Entry {
        count_t count = 0;
        count_t err = 0;
        std::multimap<count_t, item_t>::iterator pos;
    };
    int64_t capacity_;
    std::map<item_t, Entry> entries_;
    std::multimap<count_t, item_t> by_count_;
};

enum class HHMode { Turnstile, InsertionOnly };

struct HHParams {
    item_t n = 0;
    double ell = 1.0;  // heaviness is p_i >= 1/ell
    double eps = 0.5;
    HHMode mode = HHMode::Turnstile;
    uint64_t seed = 0;
    double delta = 1.0 / 20;   // total failure budget per run (turnstile)
    int64_t ss_capacity = 0;   // insertion-only; 0 = derive from ell, eps
};

// L1 heavy-hitter sketch: dyadic count-min hierarchy in the turnstile mode,
// space-saving in the insertion-only mode
class HeavyHitterSketch {
public:
    explicit HeavyHitterSketch(const HHParams& params);

    void hh_update(const StreamUpdate& u);
    // all items whose estimate reaches 1/ell, with clamped mass estimates
    std::vector<std::pair<item_t, double>> hh_query(double ell, count_t m) const;
    // raw monitored entries (insertion-only mode), count-descending
    std::vector<std::pair<item_t, count_t>> monitored() const;
    void merge(const HeavyHitterSketch& other);
    int64_t space_words() const;
    const HHParams& params() const { return params_; }

private:
    struct Level {
        int shift = 0;           // block = (item-1) >> shift
        int64_t blocks = 0;
        bool exact = false;
        std::vector<count_t> direct;  // exact per-block counts
        CountMin cm;
    };
    HHParams params_;
    int64_t width_ = 0;
    int depth_ = 0;
    int64_t cap_ = 0;  // candidate / output cap, ceil(4*ell/eps)
    std::vector<Level> levels_;
    std::unique_ptr<SpaceSaving> ss_;

    count_t level_estimate(const Level& lv, int64_t block) const;
};

}  // namespace histo

#endif  // HISTO_HH_SKETCH_HPP_
