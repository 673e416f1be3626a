#ifndef HISTO_HISTOGRAM_HPP_
#define HISTO_HISTOGRAM_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "histo/stream.hpp"

namespace histo {

// piecewise-constant function on [1..n]; piece j covers (b_{j-1}, b_j],
// so an item equal to a breakpoint belongs to the left piece
struct Histogram {
    item_t n = 0;
    std::vector<item_t> breakpoints;  // sorted, within [1..n], size = values.size()-1
    std::vector<double> values;       // each in [0,1]
};

struct WeightedPoint {
    item_t index = 0;
    double mass = 0.0;
};

// sorted by index; duplicates allowed (multiset semantics)
using WeightedPointSet = std::vector<WeightedPoint>;

double eval(const Histogram& f, item_t i);

double support_error(const ExactDistribution& P, const Histogram& f);
double domain_error(const ExactDistribution& P, const Histogram& f);

// (best_value, cost): lower median of the masses and its L1 cost
std::pair<double, double> interval_cost(const WeightedPointSet& points);

struct OptResult {
    Histogram hist;
    double err = 0.0;
};

// offline oracle: best k-piece histogram under support_error, computed by
// dynamic programming over the sorted support in exact integer-count space
OptResult optimal_histogram_exact(const ExactDistribution& P, int k);

// same DP over a sample multiset; pieces anchored at sample indices and
// extended so the histogram is total on [1..n]
Histogram optimal_histogram_samples(const WeightedPointSet& S, int k, item_t n);

// experimental variant: segments only span their sampled indices and every
// gap between segments takes gap_value (the global sample-mass median)
Histogram anchored_histogram_samples(const WeightedPointSet& S, int k, item_t n,
                                     double gap_value);

// sample-based error estimate with exponential mass buckets
double est_error(const WeightedPointSet& S, item_t n, int64_t s, const Histogram& h, double eps);

std::string histogram_to_json(const Histogram& f);
Histogram histogram_from_json(const std::string& text);

}  // namespace histo

#endif  // HISTO_HISTOGRAM_HPP_
