#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "cspadv/csp.hpp"
#include "cspadv/report.hpp"
#include "cspadv/rng.hpp"

namespace cspadv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::rational<BigInt>;

// Exact pmf on the half-integer grid: P[value = (min_h + i)/2] = num[i]/2^exp2.
// Derivatives of predicates take values in {-1/2, 0, 1/2}, so sums of
// independent ones live on this grid with power-of-two denominators.
struct HalfIntPmf {
    int min_h = 0;
    std::vector<BigInt> num;
    int exp2 = 0;

    BigInt denominator() const { return BigInt(1) << exp2; }
    BigRat prob_gt(int h) const;  // P[value > h/2]
    BigRat prob_eq(int h) const;
    BigRat mean_half_units() const;      // E[2*value]
    BigRat second_moment_half_units() const;
    BigRat abs_moment_about(int h) const;  // E|2*value - h| in half units
};

// pmf of the derivative of `pred` in coordinate `pos` over uniform inputs,
// in half units: support {-1, 0, +1} over 2^(arity-1) rows.
HalfIntPmf derivative_pmf(const Predicate& pred, uint32_t pos);

HalfIntPmf convolve(const HalfIntPmf& a, const HalfIntPmf& b);

// Exact median threshold with a randomized sign at ties, making the greedy
// bit exactly unbiased: P[sum > theta] + p_plus * P[sum = theta] = 1/2.
struct ThresholdRule {
    int theta_h = 0;       // theta in half units
    BigInt tie_num = 0;    // p_plus_at_tie = tie_num / tie_den, in [0,1)
    BigInt tie_den = 1;
    HalfIntPmf dist;

    double p_plus() const {
        return tie_den == 0 ? 0.0
                            : boost::rational_cast<double>(BigRat(tie_num, tie_den));
    }
};

ThresholdRule threshold_rule(const std::vector<HalfIntPmf>& terms);

struct ActiveVar {
    uint32_t j = 0;                    // greedy variable
    std::vector<size_t> constraints;   // N_j: active constraint ids
    std::vector<uint32_t> pos;         // position of j in each scope
    std::vector<uint32_t> a_set;       // A_j: union of active scopes minus j
};

struct PartitionPlan {
    std::vector<uint8_t> in_greedy;    // size n; 1 = Greedy side
    std::vector<ActiveVar> active;     // greedy vars with N_j nonempty
};

// Uniform Fixed/Greedy split plus the active-constraint bookkeeping.
// Checks triangle-freeness unless assume_valid; always asserts that the
// A_j of active variables are pairwise disjoint.
PartitionPlan plan_partition(const Instance& inst, Rng& rng, bool assume_valid = false);

// Deterministic core of plan_partition, exposed for exhaustive tests.
PartitionPlan plan_from_sides(const Instance& inst, const std::vector<uint8_t>& in_greedy,
                              bool assume_valid = false);

// Q_l = d/dx_j of P_l for each l in N_j, as polynomials over instance
// variables (each mentions only A_j).
std::vector<MultilinearPoly> derivative_terms(const Instance& inst, const PartitionPlan& plan,
                                              uint32_t j);

ThresholdRule rule_for(const Instance& inst, const ActiveVar& av);

// Fills the Greedy entries of x given fixed values on F:
// x_j = sgn(sum_l Q_l - theta_j), ties +1 with the rule's exact coin.
// Tie coins are drawn from rng.child(j) so each bit depends only on x_{A_j}
// and private randomness.
void greedy_assign(const Instance& inst, const PartitionPlan& plan,
                   const std::vector<ThresholdRule>& rules, Assignment& x, Rng& rng);

// Exact Bernoulli(num/den) from random bits.
bool bernoulli_exact(Rng& rng, const BigInt& num, const BigInt& den);

struct TrifreeParams {
    int reps = 0;  // 0 -> 8 * ceil(e^k)
};

std::pair<Assignment, SolveReport> solve_triangle_free(const Instance& inst, uint64_t seed,
                                                       const TrifreeParams& params = {});

}  // namespace cspadv
