#include "histo/hh_sketch.hpp"

#include <algorithm>
#include <cmath>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"

namespace histo {

CountMin::CountMin(int64_t width, int depth, uint64_t seed)
    : width_(width), depth_(depth), seed_(seed) {
    if (width <= 0 || depth <= 0) throw BadParams("count-min needs positive width and depth");
    table_.assign((size_t)width * depth, 0);
    row_seeds_.resize(depth);
    for (int r = 0; r < depth; ++r) row_seeds_[r] = derive_seed(seed, (uint64_t)r);
}

void CountMin::update(uint64_t key, count_t delta) {
    for (int r = 0; r < depth_; ++r) {
        uint64_t pos = reduce_range(hash64(row_seeds_[r], key), (uint64_t)width_);
        table_[(size_t)r * width_ + pos] += delta;
    }
}

count_t CountMin::estimate(uint64_t key) const {
    count_t best = 0;
    for (int r = 0; r < depth_; ++r) {
        uint64_t pos = reduce_range(hash64(row_seeds_[r], key), (uint64_t)width_);
        count_t v = table_[(size_t)r * width_ + pos];
        if (r == 0 || v < best) best = v;
    }
    return best;
}

void CountMin::merge(const CountMin& other) {
    if (width_ != other.width_ || depth_ != other.depth_ || seed_ != other.seed_)
        throw DomainMismatch("count-min merge needs identical dimensions and seed");
    for (size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
}

SpaceSaving::SpaceSaving(int64_t capacity) : capacity_(capacity) {
    if (capacity <= 0) throw BadParams("space-saving needs positive capacity");
}

void SpaceSaving::update(item_t item, count_t delta) {
    if (delta < 0) throw NegativeDeltaUnsupported("space-saving is insertion-only");
    if (delta == 0) return;
    auto it = entries_.find(item);
    if (it != entries_.end()) {
        by_count_.erase(it->second.pos);
        it->second.count += delta;
        it->second.pos = by_count_.emplace(it->second.count, item);
        return;
    }
    if ((int64_t)entries_.size() < capacity_) {
        Entry e;
        e.count = delta;
        e.err = 0;
        e.pos = by_count_.emplace(delta, item);
        entries_.emplace(item, e);
        return;
    }
    // evict the current minimum and inherit its count as the error bound
    auto victim = by_count_.begin();
    count_t floor = victim->first;
    entries_.erase(victim->second);
    by_count_.erase(victim);
    Entry e;
    e.count = floor + delta;
    e.err = floor;
    e.pos = by_count_.emplace(e.count, item);
    entries_.emplace(item, e);
}

std::pair<count_t, count_t> SpaceSaving::estimate(item_t item) const {
    auto it = entries_.find(item);
    if (it != entries_.end()) return {it->second.count, it->second.err};
    count_t floor = by_count_.empty() ? 0 : by_count_.begin()->first;
    if ((int64_t)entries_.size() < capacity_) floor = 0;
    return {floor, floor};
}

std::vector<std::pair<item_t, count_t>> SpaceSaving::entries_by_count() const {
    std::vector<std::pair<item_t, count_t>> out;
    out.reserve(entries_.size());
    for (auto it = by_count_.rbegin(); it != by_count_.rend(); ++it)
        out.emplace_back(it->second, it->first);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

HeavyHitterSketch::HeavyHitterSketch(const HHParams& params) : params_(params) {
    if (params.n <= 0) throw BadParams("heavy-hitter sketch needs a positive domain");
    if (params.ell < 1.0 || params.eps <= 0.0 || params.eps > 1.0)
        throw BadParams("heavy-hitter sketch needs ell >= 1 and eps in (0,1]");
    cap_ = (int64_t)std::ceil(4.0 * params.ell / params.eps);
    if (params.mode == HHMode::InsertionOnly) {
        int64_t c = params.ss_capacity > 0
                        ? params.ss_capacity
                        : (int64_t)std::ceil(2.0 * params.ell / params.eps);
        ss_ = std::make_unique<SpaceSaving>(c);
        return;
    }
    width_ = (int64_t)std::ceil(2.0 * params.ell / params.eps);
    int shift = 0;
    int hashed_levels = 0;
    while (true) {
        Level lv;
        lv.shift = shift;
        lv.blocks = ((params.n - 1) >> shift) + 1;
        lv.exact = lv.blocks <= width_;
        if (!lv.exact) ++hashed_levels;
        levels_.push_back(std::move(lv));
        if (levels_.back().blocks == 1) break;
        ++shift;
    }
    // the failure budget only pays for hashed levels; exact levels cannot err
    double queries = (double)(hashed_levels + 1) * 2.0 * (double)cap_;
    double delta = params.delta;
    if (delta <= 0 || delta > 1.0 / 20) delta = 1.0 / 20;
    depth_ = std::max(1, (int)std::ceil(std::log2(std::max(2.0, queries / delta))));
    for (size_t i = 0; i < levels_.size(); ++i) {
        Level& lv = levels_[i];
        if (lv.exact)
            lv.direct.assign((size_t)lv.blocks, 0);
        else
            lv.cm = CountMin(width_, depth_, derive_seed(params.seed, 0x100 + i));
    }
}

void HeavyHitterSketch::hh_update(const StreamUpdate& u) {
    if (u.item < 1 || u.item > params_.n)
        throw DomainViolation("update outside the sketch domain");
    if (ss_) {
        ss_->update(u.item, u.delta);
        return;
    }
    for (Level& lv : levels_) {
        int64_t block = (u.item - 1) >> lv.shift;
        if (lv.exact)
            lv.direct[(size_t)block] += u.delta;
        else
            lv.cm.update((uint64_t)block, u.delta);
    }
}

count_t HeavyHitterSketch::level_estimate(const Level& lv, int64_t block) const {
    return lv.exact ? lv.direct[(size_t)block] : lv.cm.estimate((uint64_t)block);
}

std::vector<std::pair<item_t, double>> HeavyHitterSketch::hh_query(double ell,
                                                                   count_t m) const {
    if (ell < 1.0) throw BadParams("heavy-hitter query needs ell >= 1");
    if (m <= 0) throw EmptyStream("heavy-hitter query on an empty stream");
    double thr = (double)m / ell;
    std::vector<std::pair<item_t, double>> out;
    if (ss_) {
        for (const auto& [item, count] : ss_->entries_by_count()) {
            double z = (double)count / (double)m;
            if (z + 1e-6 >= 1.0 / ell) out.emplace_back(item, std::min(1.0, z));
            if ((int64_t)out.size() >= cap_) break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    // walk the dyadic tree from the root, keeping blocks whose estimate
    // clears the threshold; estimates never underestimate, so every true
    // heavy block survives
    std::vector<int64_t> frontier{0};
    for (size_t li = levels_.size(); li-- > 0;) {
        const Level& lv = levels_[li];
        std::vector<std::pair<count_t, int64_t>> kept;
        for (int64_t block : frontier) {
            if (block >= lv.blocks) continue;
            count_t est = level_estimate(lv, block);
            if ((double)est + 1e-6 >= thr) kept.emplace_back(est, block);
        }
        if ((int64_t)kept.size() > cap_) {
            std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            kept.resize((size_t)cap_);
        }
        if (li == 0) {
            for (const auto& [est, block] : kept) {
                item_t item = block + 1;
                if (item > params_.n) continue;
                out.emplace_back(item, std::min(1.0, (double)est / (double)m));
            }
            break;
        }
        frontier.clear();
        for (const auto& [est, block] : kept) {
            frontier.push_back(block * 2);
            frontier.push_back(block * 2 + 1);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<item_t, count_t>> HeavyHitterSketch::monitored() const {
    if (!ss_) throw BadParams("monitored entries exist only in insertion-only mode");
    return ss_->entries_by_count();
}

void HeavyHitterSketch::merge(const HeavyHitterSketch& other) {
    if (ss_ || other.ss_)
        throw BadParams("merge is only supported in turnstile mode");
    if (params_.n != other.params_.n || params_.seed != other.params_.seed ||
        width_ != other.width_ || depth_ != other.depth_ ||
        levels_.size() != other.levels_.size())
        throw DomainMismatch("merge needs identically configured sketches");
    for (size_t i = 0; i < levels_.size(); ++i) {
        Level& a = levels_[i];
        const Level& b = other.levels_[i];
        if (a.exact)
            for (size_t j = 0; j < a.direct.size(); ++j) a.direct[j] += b.direct[j];
        else
            a.cm.merge(b.cm);
    }
}

int64_t HeavyHitterSketch::space_words() const {
    if (ss_) return ss_->capacity();
    int64_t total = 0;
    for (const Level& lv : levels_)
        total += lv.exact ? lv.blocks : lv.cm.words();
    return total;
}

}  // namespace histo
