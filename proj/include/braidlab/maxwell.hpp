#ifndef BRAIDLAB_MAXWELL_HPP
#define BRAIDLAB_MAXWELL_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "braidlab/graph.hpp"

namespace braidlab {

/// Affine expression of a flow's value over guessed flows:
/// value = K - sum_i terms[f_i] * phi(f_i). Coefficients are exact integers.
struct GuessExpr {
    std::map<i64, i64> terms;
    i64 K = 0;

    /// Counter-side composition: the outgoing list is the union of the
    /// incoming lists with coefficient sums negated, and K is the counter
    /// value minus the sum of incoming Ks.
    static GuessExpr from_counter(i64 counter_value, const std::vector<const GuessExpr*>& incoming);
    i64 eval(const std::map<i64, i64>& assignment) const;
};

enum class FlowLabel : std::uint8_t {
    Unknown,    // value not determined and not expressible yet
    Known,      // exact value established by the value-passing component
    Guessed,    // promoted to a free variable
    Expressed,  // affine in the guessed variables
};

enum class MaxwellStatus { Unique, Multiple, Inconsistent };

/// A counter equation with known flows folded into the right-hand side:
/// sum coeff[f] * phi(f) = rhs over non-known flows.
struct LinearEq {
    std::map<i64, i64> coeff;
    i64 rhs = 0;
};

struct MaxwellResult {
    MaxwellStatus status = MaxwellStatus::Unique;
    std::vector<i64> estimates;          // full vector when status == Unique
    std::vector<FlowLabel> labels;
    std::vector<i64> guess_order;
    std::vector<GuessExpr> exprs;        // per flow; meaningful for Guessed/Expressed
    std::vector<LinearEq> equations;     // nontrivial counter equations over guesses
    int solutions_found = 0;             // capped at 2
    std::uint64_t search_nodes = 0;
};

/// Message-passing decoder with guesses. Messages are (value, tag) pairs:
/// the value component follows the plain BP rules, the tag component follows
/// the known/unknown/guessed propagation rules, and g-tagged messages carry a
/// GuessExpr. When no unknown flow remains, the accumulated integer linear
/// system is solved exhaustively over [f_min, capacity] per guessed variable
/// with constraint propagation.
MaxwellResult maxwell_decode(const CbGraph& g, const std::vector<i64>& counters, i64 f_min,
                             std::uint64_t seed, std::uint64_t node_cap = 50'000'000);

}  // namespace braidlab

#endif
