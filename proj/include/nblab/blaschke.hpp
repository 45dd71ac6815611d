#pragma once

#include <string>
#include <vector>

#include "nblab/numeric.hpp"

namespace nblab {

// Hypothetical zeta zero right of the critical line (no such zero is known;
// these are user-supplied inputs for exercising the formulas).
struct OffLineZero {
    Complex rho;
    int multiplicity = 1;
};

// Multiset of off-line zeros; entries with equal rho are merged on insert.
class ZeroMultiset {
public:
    ZeroMultiset() = default;

    void insert(Complex rho, int multiplicity = 1);

    const std::vector<OffLineZero>& zeros() const { return zeros_; }
    bool empty() const { return zeros_.empty(); }
    long total_multiplicity() const;

    // True if the multiset is closed under complex conjugation.
    bool conjugation_closed() const;

    // JSON array of {re, im, multiplicity} objects.
    static ZeroMultiset parse_json(const std::string& text);
    // Inline tokens like "0.75:1" or "0.6+0.3i:2", comma/space separated.
    static ZeroMultiset parse_inline(const std::string& text);

private:
    std::vector<OffLineZero> zeros_;
};

// One Blaschke factor raised to the zero's multiplicity:
//   [(s - rho)/(s - (1 - conj rho)) * (1 - conj rho)/rho * |rho/(1 - rho)|]^mult
Complex blaschke_factor(const OffLineZero& zero, Complex s);

// Product over the multiset; 1 for the empty multiset.  Evaluated in
// log-space once the total multiplicity exceeds 32.
Complex blaschke_product(const ZeroMultiset& ms, Complex s);

// B(1) = prod |(1 - rho)/rho|^mult, a real number in [0, 1].
double b_at_one(const ZeroMultiset& ms);

// sum mult * log|rho/(1 - rho)| = -log B(1), nonnegative.
double bsy_sum(const ZeroMultiset& ms);

} // namespace nblab
