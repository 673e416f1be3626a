#ifndef HISTO_HHH_HPP_
#define HISTO_HHH_HPP_

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "histo/hh_sketch.hpp"
#include "histo/stream.hpp"

namespace histo {

// node of the full binary tree over the power-of-two padded domain;
// covers items [offset * 2^level + 1, (offset + 1) * 2^level]
struct DyadicNode {
    int level = 0;
    int64_t offset = 0;
};

// a marked hierarchical heavy hitter with its residual set: the positions
// below it that no marked descendant absorbed, as disjoint intervals already
// split at the node's child boundary
struct HHHNode {
    DyadicNode node;
    double resid_mass = 0.0;
    count_t resid_count = 0;  // exact count, or the estimate in streaming mode
    std::vector<std::pair<item_t, item_t>> resid;
};

struct HHHSet {
    item_t n = 0;
    double phi = 0.0;
    std::vector<HHHNode> nodes;
};

// Algorithm-2 first-pass decomposition: singleton heavy items plus light
// intervals tiling [1..n]
struct IntervalPartition {
    item_t n = 0;
    std::vector<item_t> H;
    std::vector<std::pair<item_t, item_t>> L;
};

HHHSet hhh_exact(const ExactDistribution& dist, double phi);

struct HHHStreamConfig {
    item_t n = 0;
    double phi = 0.1;
    double eps_hh = 0.0;  // estimate tolerance; 0 = phi / 4
    HHMode mode = HHMode::Turnstile;
    uint64_t seed = 0;
    int64_t level_capacity = 0;  // space-saving slots per level; 0 = derive
    double delta = 1.0 / 20;
};

// per-level frequency sketches; query reconstructs a marked set that is a
// superset of the exact one with high probability
class HHHStream {
public:
    explicit HHHStream(const HHHStreamConfig& cfg);

    void update(const StreamUpdate& u);
    HHHSet query(count_t m, double phi_override = 0.0) const;
    int64_t space_words() const;
    const HHHStreamConfig& config() const { return cfg_; }

private:
    struct Level {
        int shift = 0;
        int64_t blocks = 0;
        bool exact = false;
        std::vector<count_t> direct;
        std::unique_ptr<CountMin> cm;
        std::unique_ptr<SpaceSaving> ss;
    };
    HHHStreamConfig cfg_;
    item_t n2_ = 0;  // padded domain size
    std::vector<Level> levels_;

    count_t level_estimate(const Level& lv, int64_t block) const;
};

HHHSet hhh_stream(StreamSource& source, double phi, double eps_hh = 0.0,
                  HHMode mode = HHMode::Turnstile, uint64_t seed = 0);

IntervalPartition build_partition(const HHHSet& T, item_t n, int64_t k, double eps);

}  // namespace histo

#endif  // HISTO_HHH_HPP_
