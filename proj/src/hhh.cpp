#include "histo/hhh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "histo/errors.hpp"
#include "histo/hashing.hpp"

namespace histo {

namespace {

// subtract sorted disjoint sub-spans from [lo,hi], then split at mid and
// clip to [1..n]
void span_minus(item_t lo, item_t hi, item_t mid, item_t n,
                const std::vector<std::pair<item_t, item_t>>& holes, HHHNode* out) {
    std::vector<std::pair<item_t, item_t>> gaps;
    item_t cur = lo;
    for (const auto& [a, b] : holes) {
        if (a > cur) gaps.emplace_back(cur, a - 1);
        cur = std::max(cur, b + 1);
    }
    if (cur <= hi) gaps.emplace_back(cur, hi);
    for (auto [a, b] : gaps) {
        if (a > n) continue;
        b = std::min(b, n);
        if (mid && a <= mid && mid < b) {
            out->resid.emplace_back(a, mid);
            out->resid.emplace_back(mid + 1, b);
        } else {
            out->resid.emplace_back(a, b);
        }
    }
}

}  // namespace

HHHSet hhh_exact(const ExactDistribution& dist, double phi) {
    if (phi <= 0) throw BadParams("heaviness threshold must be positive");
    count_t m = dist.total();
    if (m <= 0) throw EmptyStream("hierarchical heavy hitters of an empty stream");
    HHHSet out;
    out.n = dist.domain_size();
    out.phi = phi;
    if (phi > 1.0) return out;
    double thr = phi * (double)m;

    // per-level state per occupied block: unabsorbed supported count plus the
    // spans of maximal marked descendants; the residual set of a node is its
    // span minus those holes
    struct BlockState {
        count_t resid = 0;
        std::vector<std::pair<item_t, item_t>> holes;
    };
    std::vector<std::pair<int64_t, BlockState>> cur;
    for (const auto& [item, c] : dist.counts())
        cur.push_back({item - 1, {c, {}}});
    uint64_t n2 = std::bit_ceil((uint64_t)out.n);
    int top = (int)std::countr_zero(n2);
    for (int level = 0; level <= top; ++level) {
        std::vector<std::pair<int64_t, BlockState>> next;
        for (auto& [block, st] : cur) {
            if ((double)st.resid + 1e-9 >= thr) {
                item_t lo = ((item_t)block << level) + 1;
                item_t hi = (item_t)(block + 1) << level;
                item_t mid = level >= 1 ? lo + (((item_t)1) << (level - 1)) - 1 : 0;
                HHHNode node;
                node.node = {level, block};
                node.resid_count = st.resid;
                node.resid_mass = (double)st.resid / (double)m;
                span_minus(lo, hi, mid, out.n, st.holes, &node);
                out.nodes.push_back(std::move(node));
                st.resid = 0;
                st.holes = {{lo, std::min(hi, out.n)}};
            }
            if (level == top) continue;
            if (!next.empty() && next.back().first == block / 2) {
                BlockState& dst = next.back().second;
                dst.resid += st.resid;
                dst.holes.insert(dst.holes.end(), st.holes.begin(), st.holes.end());
            } else {
                next.push_back({block / 2, std::move(st)});
            }
        }
        cur = std::move(next);
    }
    return out;
}

HHHStream::HHHStream(const HHHStreamConfig& cfg) : cfg_(cfg) {
    if (cfg.n <= 0) throw BadParams("hierarchical sketch needs a positive domain");
    if (cfg.phi <= 0) throw BadParams("heaviness threshold must be positive");
    if (cfg_.eps_hh <= 0) cfg_.eps_hh = cfg_.phi / 4.0;
    n2_ = (item_t)std::bit_ceil((uint64_t)cfg.n);
    int top = (int)std::countr_zero((uint64_t)n2_);

    int64_t ss_cap = cfg_.level_capacity > 0
                         ? cfg_.level_capacity
                         : (int64_t)std::ceil(1.0 / cfg_.eps_hh);
    int64_t cm_width = (int64_t)std::ceil(2.0 / cfg_.eps_hh);
    int64_t exact_limit = cfg_.mode == HHMode::InsertionOnly ? ss_cap : cm_width;

    int hashed = 0;
    for (int level = 0; level <= top; ++level) {
        Level lv;
        lv.shift = level;
        lv.blocks = n2_ >> level;
        lv.exact = lv.blocks <= exact_limit;
        if (!lv.exact) ++hashed;
        levels_.push_back(std::move(lv));
    }
    int64_t cand_cap = (int64_t)std::ceil(8.0 / cfg_.phi);
    double delta = cfg_.delta;
    if (delta <= 0 || delta > 1.0 / 20) delta = 1.0 / 20;
    double queries = (double)(hashed + 1) * 2.0 * (double)cand_cap;
    int depth = std::max(1, (int)std::ceil(std::log2(std::max(2.0, queries / delta))));
    for (size_t i = 0; i < levels_.size(); ++i) {
        Level& lv = levels_[i];
        if (lv.exact) {
            lv.direct.assign((size_t)lv.blocks, 0);
        } else if (cfg_.mode == HHMode::InsertionOnly) {
            lv.ss = std::make_unique<SpaceSaving>(ss_cap);
        } else {
            lv.cm = std::make_unique<CountMin>(cm_width, depth,
                                              derive_seed(cfg_.seed, 0x200 + i));
        }
    }
}

void HHHStream::update(const StreamUpdate& u) {
    if (u.item < 1 || u.item > cfg_.n)
        throw DomainViolation("update outside the sketch domain");
    for (Level& lv : levels_) {
        int64_t block = (u.item - 1) >> lv.shift;
        if (lv.exact)
            lv.direct[(size_t)block] += u.delta;
        else if (lv.ss)
            lv.ss->update(block, u.delta);
        else
            lv.cm->update((uint64_t)block, u.delta);
    }
}

count_t HHHStream::level_estimate(const Level& lv, int64_t block) const {
    if (lv.exact) return lv.direct[(size_t)block];
    // unmonitored blocks report 0: the space-saving floor would otherwise
    // promote every queried block once the summary fills up
    if (lv.ss) return lv.ss->contains(block) ? lv.ss->estimate(block).first : 0;
    return lv.cm->estimate((uint64_t)block);
}

HHHSet HHHStream::query(count_t m, double phi_override) const {
    double phi = phi_override > 0 ? phi_override : cfg_.phi;
    if (m <= 0) throw EmptyStream("hierarchical query on an empty stream");
    HHHSet out;
    out.n = cfg_.n;
    out.phi = phi;
    if (phi > 1.0) return out;
    double cand_thr = 0.5 * phi * (double)m;
    double mark_thr = phi * (double)m;
    int64_t cand_cap = (int64_t)std::ceil(8.0 / phi);

    // top-down: keep blocks whose estimate clears half the threshold
    size_t nlev = levels_.size();
    std::vector<std::vector<std::pair<int64_t, count_t>>> kept(nlev);
    std::vector<int64_t> frontier{0};
    for (size_t li = nlev; li-- > 0;) {
        const Level& lv = levels_[li];
        auto& row = kept[li];
        for (int64_t block : frontier) {
            if (block >= lv.blocks) continue;
            count_t est = level_estimate(lv, block);
            if ((double)est + 1e-6 >= cand_thr) row.emplace_back(block, est);
        }
        if ((int64_t)row.size() > cand_cap) {
            std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
            });
            row.resize((size_t)cand_cap);
        }
        std::sort(row.begin(), row.end());
        if (li == 0) break;
        frontier.clear();
        for (const auto& [block, est] : row) {
            frontier.push_back(block * 2);
            frontier.push_back(block * 2 + 1);
        }
    }

    // bottom-up: mark when the estimated residual (estimate minus the
    // estimates of maximal marked descendants) reaches the threshold
    struct Below {
        count_t est_sum = 0;
        std::vector<std::pair<item_t, item_t>> spans;
    };
    std::map<int64_t, Below> below;  // keyed by block at the processed level
    for (size_t li = 0; li < nlev; ++li) {
        std::map<int64_t, Below> up;
        for (const auto& [block, est] : kept[li]) {
            Below sub;
            auto it = below.find(block);
            if (it != below.end()) sub = std::move(it->second);
            double resid = (double)est - (double)sub.est_sum;
            if (resid + 1e-9 >= mark_thr) {
                int shift = levels_[li].shift;
                item_t lo = ((item_t)block << shift) + 1;
                item_t hi = (item_t)(block + 1) << shift;
                item_t mid = shift >= 1 ? lo + (((item_t)1) << (shift - 1)) - 1 : 0;
                HHHNode node;
                node.node = {shift, block};
                node.resid_mass = std::min(1.0, std::max(0.0, resid / (double)m));
                node.resid_count = (count_t)std::llround(resid);
                span_minus(lo, hi, mid, cfg_.n, sub.spans, &node);
                if (!node.resid.empty()) {
                    out.nodes.push_back(std::move(node));
                    Below b;
                    b.est_sum = est;
                    b.spans = {{lo, std::min(hi, cfg_.n)}};
                    up[block / 2].est_sum += b.est_sum;
                    auto& dst = up[block / 2].spans;
                    dst.insert(dst.end(), b.spans.begin(), b.spans.end());
                    continue;
                }
            }
            auto& parent = up[block / 2];
            parent.est_sum += sub.est_sum;
            parent.spans.insert(parent.spans.end(), sub.spans.begin(), sub.spans.end());
        }
        for (auto& [blk, b] : up) std::sort(b.spans.begin(), b.spans.end());
        below = std::move(up);
    }
    return out;
}

int64_t HHHStream::space_words() const {
    int64_t total = 0;
    for (const Level& lv : levels_) {
        if (lv.exact)
            total += lv.blocks;
        else if (lv.ss)
            total += lv.ss->capacity();
        else
            total += lv.cm->words();
    }
    return total;
}

HHHSet hhh_stream(StreamSource& source, double phi, double eps_hh, HHMode mode,
                  uint64_t seed) {
    HHHStreamConfig cfg;
    cfg.n = source.domain_size();
    cfg.phi = phi;
    cfg.eps_hh = eps_hh;
    cfg.mode = mode;
    cfg.seed = seed;
    HHHStream sk(cfg);
    count_t m = 0;
    StreamUpdate u;
    while (source.next(u)) {
        sk.update(u);
        m += u.delta;
    }
    if (m <= 0) throw EmptyStream("hierarchical heavy hitters of an empty stream");
    return sk.query(m);
}

IntervalPartition build_partition(const HHHSet& T, item_t n, int64_t k, double eps) {
    if (n <= 0 || k < 1 || eps <= 0) throw BadParams("partition needs n >= 1, k >= 1, eps > 0");
    IntervalPartition out;
    out.n = n;

    std::vector<std::pair<item_t, item_t>> all;
    for (const HHHNode& node : T.nodes)
        for (const auto& iv : node.resid) all.push_back(iv);
    std::sort(all.begin(), all.end());
    for (size_t i = 1; i < all.size(); ++i)
        if (all[i].first <= all[i - 1].second)
            throw InvalidHHHSet("residual sets of distinct nodes overlap");

    for (const HHHNode& node : T.nodes) {
        item_t width = 0;
        for (const auto& [a, b] : node.resid) width += b - a + 1;
        if (width == 1)
            out.H.push_back(node.resid[0].first);
        else
            for (const auto& iv : node.resid) out.L.push_back(iv);
    }

    // L': whatever the marked nodes left uncovered, as maximal intervals
    std::vector<std::pair<item_t, item_t>> covered;
    for (item_t h : out.H) covered.emplace_back(h, h);
    for (const auto& iv : out.L) covered.push_back(iv);
    std::sort(covered.begin(), covered.end());
    item_t cur = 1;
    for (const auto& [a, b] : covered) {
        if (a > cur) out.L.emplace_back(cur, a - 1);
        cur = std::max(cur, b + 1);
    }
    if (cur <= n) out.L.emplace_back(cur, n);

    std::sort(out.H.begin(), out.H.end());
    std::sort(out.L.begin(), out.L.end());
    return out;
}

}  // namespace histo
