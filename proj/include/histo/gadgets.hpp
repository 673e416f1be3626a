#ifndef HISTO_GADGETS_HPP_
#define HISTO_GADGETS_HPP_

#include <memory>
#include <vector>

#include "histo/stream.hpp"

namespace histo {

// communication-game stream constructions used as adversarial fixtures
struct GadgetSpec {
    enum class Family { Disjointness, Proper, Bicriteria };
    Family family = Family::Disjointness;
    item_t n = 0;                    // base size; proper streams live on [1..3n]
    std::vector<int> a_bits;         // Alice's bit vector
    std::vector<int> b_bits;         // Bob's bits (disjointness only)
    int64_t j = 1;                   // Bob's 1-based index (proper / bicriteria)
    double gamma = 0.25;             // proper: elephant fraction of the j-th block
    double ca = 0.5, cb = 0.125, cc = 0.1, pf = 0.025;  // bicriteria constants
};

void validate_gadget(const GadgetSpec& spec);
std::unique_ptr<VectorSource> gadget_stream(const GadgetSpec& spec);

}  // namespace histo

#endif  // HISTO_GADGETS_HPP_
