#include "histo/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <json.hpp>

#include "histo/errors.hpp"

namespace histo {

double eval(const Histogram& f, item_t i) {
    if (i < 1 || i > f.n)
        throw DomainViolation("eval at " + std::to_string(i) + " outside [1," +
                              std::to_string(f.n) + "]");
    size_t j = std::lower_bound(f.breakpoints.begin(), f.breakpoints.end(), i) -
               f.breakpoints.begin();
    return f.values[j];
}

double support_error(const ExactDistribution& P, const Histogram& f) {
    if (P.total() == 0) throw EmptyStream("support_error on empty distribution");
    if (P.domain_size() != f.n) throw DomainMismatch("distribution and histogram domains differ");
    double err = 0.0;
    double m = (double)P.total();
    for (const auto& [i, c] : P.counts()) err += std::fabs((double)c / m - eval(f, i));
    return err;
}

double domain_error(const ExactDistribution& P, const Histogram& f) {
    if (P.total() == 0) throw EmptyStream("domain_error on empty distribution");
    if (P.domain_size() != f.n) throw DomainMismatch("distribution and histogram domains differ");
    double m = (double)P.total();
    double err = 0.0;
    const auto& counts = P.counts();
    auto it = counts.begin();
    item_t prev = 0;
    for (size_t j = 0; j < f.values.size(); ++j) {
        item_t hi = (j < f.breakpoints.size()) ? f.breakpoints[j] : f.n;
        if (hi <= prev) continue;
        double v = f.values[j];
        item_t supported = 0;
        while (it != counts.end() && it->first <= hi) {
            err += std::fabs((double)it->second / m - v);
            ++supported;
            ++it;
        }
        err += (double)(hi - prev - supported) * v;
        prev = hi;
    }
    return err;
}

std::pair<double, double> interval_cost(const WeightedPointSet& points) {
    if (points.empty()) throw EmptyPointSet("interval_cost on empty point set");
    std::vector<double> ms;
    ms.reserve(points.size());
    for (const auto& p : points) ms.push_back(p.mass);
    std::sort(ms.begin(), ms.end());
    double med = ms[(ms.size() - 1) / 2];
    double cost = 0.0;
    for (double x : ms) cost += std::fabs(x - med);
    return {med, cost};
}

namespace {

// incremental lower-median with L1 cost; insert-only two-heap scheme
template <class T>
class IncMedian {
public:
    void add(T x) {
        if (low_.empty() || x <= low_.top()) {
            low_.push(x);
            sum_low_ += x;
        } else {
            high_.push(x);
            sum_high_ += x;
        }
        // keep |low| = ceil(t/2) so low.top() is the lower median
        if (low_.size() > high_.size() + 1) {
            T v = low_.top();
            low_.pop();
            sum_low_ -= v;
            high_.push(v);
            sum_high_ += v;
        } else if (high_.size() > low_.size()) {
            T v = high_.top();
            high_.pop();
            sum_high_ -= v;
            low_.push(v);
            sum_low_ += v;
        }
    }
    T median() const { return low_.top(); }
    T cost() const {
        T med = low_.top();
        return (med * (T)low_.size() - sum_low_) + (sum_high_ - med * (T)high_.size());
    }

private:
    std::priority_queue<T> low_;  // max-heap of the lower half
    std::priority_queue<T, std::vector<T>, std::greater<T>> high_;
    T sum_low_ = 0;
    T sum_high_ = 0;
};

template <class T>
struct DpResult {
    std::vector<size_t> seg_last;  // last group index of each segment
    std::vector<T> seg_median;
    T cost = 0;
};

// partition `groups` (each a run of values sharing one domain index) into
// exactly k contiguous nonempty segments minimizing total L1-to-median cost;
// ties broken toward the lexicographically smallest breakpoint sequence
template <class T>
DpResult<T> dp_segment(const std::vector<std::vector<T>>& groups, int k) {
    const size_t d = groups.size();
    const size_t kk = std::min<size_t>((size_t)k, d);
    const T INF = std::numeric_limits<T>::max() / 4;

    auto seg_sweep_costs = [&](size_t a, size_t last, std::vector<T>& out) {
        // out[e - a] = cost of segment covering groups a..e, for e in [a, last]
        IncMedian<T> im;
        out.clear();
        for (size_t e = a; e <= last; ++e) {
            for (T v : groups[e]) im.add(v);
            out.push_back(im.cost());
        }
    };

    // suffix[j][i] = best cost covering groups i..d-1 with exactly j segments
    std::vector<std::vector<T>> suffix(kk + 1, std::vector<T>(d + 1, INF));
    suffix[0][d] = 0;
    {
        IncMedian<T> im;
        for (size_t i = d; i-- > 0;) {
            for (T v : groups[i]) im.add(v);
            suffix[1][i] = im.cost();
        }
    }
    std::vector<T> sweep;
    for (size_t j = 2; j <= kk; ++j) {
        // the top row is only ever read at i = 0
        size_t imax = (j == kk) ? 0 : d - j;
        for (size_t i = 0; i <= imax; ++i) {
            seg_sweep_costs(i, d - j, sweep);
            T best = INF;
            for (size_t e = i; e <= d - j; ++e) {
                T c = sweep[e - i] + suffix[j - 1][e + 1];
                if (c < best) best = c;
            }
            suffix[j][i] = best;
        }
    }

    DpResult<T> res;
    res.cost = suffix[kk][0];
    size_t i = 0;
    for (size_t j = kk; j >= 1; --j) {
        size_t chosen = d - j;  // j == 1 forces the full remaining segment
        if (j > 1) {
            seg_sweep_costs(i, d - j, sweep);
            for (size_t e = i; e <= d - j; ++e) {
                if (sweep[e - i] + suffix[j - 1][e + 1] == suffix[j][i]) {
                    chosen = e;
                    break;
                }
            }
        }
        IncMedian<T> im;
        for (size_t g = i; g <= chosen; ++g)
            for (T v : groups[g]) im.add(v);
        res.seg_last.push_back(chosen);
        res.seg_median.push_back(im.median());
        i = chosen + 1;
    }
    return res;
}

}  // namespace

OptResult optimal_histogram_exact(const ExactDistribution& P, int k) {
    if (P.total() == 0) throw EmptyStream("optimal_histogram_exact on empty distribution");
    if (k < 1) throw BadParams("k must be >= 1");

    std::vector<item_t> idx;
    std::vector<std::vector<count_t>> groups;
    for (const auto& [i, c] : P.counts()) {
        idx.push_back(i);
        groups.push_back({c});
    }
    DpResult<count_t> dp = dp_segment(groups, k);

    OptResult out;
    out.hist.n = P.domain_size();
    double m = (double)P.total();
    for (size_t j = 0; j < dp.seg_last.size(); ++j) {
        if (j + 1 < dp.seg_last.size()) out.hist.breakpoints.push_back(idx[dp.seg_last[j]]);
        out.hist.values.push_back((double)dp.seg_median[j] / m);
    }
    out.err = (double)dp.cost / m;
    return out;
}

Histogram optimal_histogram_samples(const WeightedPointSet& S, int k, item_t n) {
    if (k < 1) throw BadParams("k must be >= 1");
    Histogram h;
    h.n = n;
    if (S.empty()) {
        h.values.push_back(0.0);
        return h;
    }
    std::vector<item_t> idx;
    std::vector<std::vector<double>> groups;
    for (const auto& p : S) {
        if (idx.empty() || p.index != idx.back()) {
            idx.push_back(p.index);
            groups.push_back({});
        }
        groups.back().push_back(p.mass);
    }
    DpResult<double> dp = dp_segment(groups, k);
    for (size_t j = 0; j < dp.seg_last.size(); ++j) {
        if (j + 1 < dp.seg_last.size()) {
            // the piece holding this segment runs up to just before the next
            // segment's first sample
            h.breakpoints.push_back(idx[dp.seg_last[j] + 1] - 1);
        }
        h.values.push_back(std::clamp(dp.seg_median[j], 0.0, 1.0));
    }
    return h;
}

Histogram anchored_histogram_samples(const WeightedPointSet& S, int k, item_t n,
                                     double gap_value) {
    if (k < 1) throw BadParams("k must be >= 1");
    gap_value = std::clamp(gap_value, 0.0, 1.0);
    Histogram h;
    h.n = n;
    if (S.empty()) {
        h.values.push_back(gap_value);
        return h;
    }
    std::vector<item_t> idx;
    std::vector<std::vector<double>> groups;
    for (const auto& p : S) {
        if (idx.empty() || p.index != idx.back()) {
            idx.push_back(p.index);
            groups.push_back({});
        }
        groups.back().push_back(p.mass);
    }
    DpResult<double> dp = dp_segment(groups, k);

    std::vector<std::pair<item_t, double>> pieces;  // (end, value)
    size_t first = 0;
    for (size_t j = 0; j < dp.seg_last.size(); ++j) {
        item_t a = idx[first];
        item_t b = idx[dp.seg_last[j]];
        if (a > 1 && (pieces.empty() || pieces.back().first < a - 1))
            pieces.emplace_back(a - 1, gap_value);
        pieces.emplace_back(b, std::clamp(dp.seg_median[j], 0.0, 1.0));
        first = dp.seg_last[j] + 1;
    }
    if (pieces.back().first < n) pieces.emplace_back(n, gap_value);
    for (size_t j = 0; j < pieces.size(); ++j) {
        if (j + 1 < pieces.size()) h.breakpoints.push_back(pieces[j].first);
        h.values.push_back(pieces[j].second);
    }
    return h;
}

double est_error(const WeightedPointSet& S, item_t n, int64_t s, const Histogram& h, double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw BadParams("eps must be in (0,1)");
    if (s < 1) throw BadParams("s must be >= 1");
    double log1e = std::log1p(eps);
    int64_t zmax = (int64_t)std::ceil(std::log(std::sqrt((double)n) / (eps * eps)) / log1e);
    if (zmax < 0) zmax = 0;
    double total = 0.0;
    double scale = (double)n / (double)s;
    for (const auto& p : S) {
        if (p.mass <= 0.0) continue;  // unsupported samples belong to no bucket
        double t = std::log(1.0 / p.mass) / log1e;
        int64_t z = (int64_t)std::floor(t + 1e-9);
        if (z < 0) z = 0;
        if (z > zmax) z = zmax;  // below the smallest bucket floor: clamp
        double bucket = std::pow(1.0 / (1.0 + eps), (double)z);
        total += scale * std::fabs(eval(h, p.index) - bucket);
    }
    return total;
}

std::string histogram_to_json(const Histogram& f) {
    nlohmann::json j;
    j["n"] = f.n;
    j["breakpoints"] = f.breakpoints;
    j["values"] = f.values;
    return j.dump();
}

Histogram histogram_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Histogram f;
    f.n = j.at("n").get<item_t>();
    f.breakpoints = j.at("breakpoints").get<std::vector<item_t>>();
    f.values = j.at("values").get<std::vector<double>>();
    if (f.values.size() != f.breakpoints.size() + 1)
        throw ParseError("histogram json: values.length must be breakpoints.length + 1");
    for (size_t i = 0; i < f.breakpoints.size(); ++i) {
        if (f.breakpoints[i] < 1 || f.breakpoints[i] > f.n ||
            (i > 0 && f.breakpoints[i] < f.breakpoints[i - 1]))
            throw ParseError("histogram json: breakpoints must be sorted within [1..n]");
    }
    for (double v : f.values)
        if (v < 0.0 || v > 1.0) throw ParseError("histogram json: values must be in [0,1]");
    return f;
}

}  // namespace histo
