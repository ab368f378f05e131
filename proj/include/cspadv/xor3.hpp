#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cspadv/csp.hpp"
#include "cspadv/report.hpp"
#include "cspadv/rng.hpp"

namespace cspadv {

// Decoupled view of a 3XOR instance: P~(y,z) = sum_i y_i G_i(z) with
// a_{ijk} = P^({i,j,k})/6 symmetric and G_i(z) = sum_{j,k} a_{ijk} z_j z_k.
// Stored compactly as, per variable i, the pairs {j,k} of its constraints;
// every pair carries weight sign/(6m) twice (ordered (j,k) and (k,j)).
struct DecoupledForm {
    struct PairTerm {
        uint32_t j, k;
        int8_t sign;
    };

    uint32_t n = 0;
    size_t m = 0;
    double unit = 0;  // 1/(6m)
    std::vector<std::vector<PairTerm>> per_var;

    double g_value(uint32_t i, const Assignment& z) const {
        double acc = 0;
        for (const auto& t : per_var[i]) acc += t.sign * int(z[t.j]) * int(z[t.k]);
        return acc * unit;
    }

    double sum_abs(const Assignment& z) const;

    // P~(y,z) = sum_i y_i G_i(z)
    double tilde_value(const Assignment& y, const Assignment& z) const;

    // tensor entry a_{ijk} (any ordering of three distinct indices)
    double tensor(uint32_t i, uint32_t j, uint32_t k) const;

    // G_i as an explicit polynomial over z (for identities and tests).
    MultilinearPoly g_poly(uint32_t i) const;
};

DecoupledForm decouple(const Instance& inst);  // throws unless 3XOR

struct GreedyZResult {
    bool success = false;
    Assignment z, y;       // best seen even on failure; y_i = sgn(G_i(z))
    double achieved = 0;   // sum_i |G_i(z)|
    int trials = 0;
};

// Uniform z trials until sum_i |G_i(z)| >= target.
GreedyZResult greedy_z_trials(const DecoupledForm& df, double target, int max_trials, Rng& rng);

// One draw of the three-scheme randomized rounding:
//   w.p. 4/9 mix y/z, w.p. 4/9 mix y/-z, w.p. 1/9 take -y.
Assignment round_to_x(const Assignment& y, const Assignment& z, Rng& rng);

// Exactly 4-wise independent +-1 sample space of size 2*q^2 (q = smallest
// power of two >= n): seeds (a,b,c), coordinate i = parity of
// <a,p_i> + <b,p_i^3> + c over GF(2^h).
struct FourwiseSpace {
    uint32_t n = 0;
    uint32_t h = 0;
    uint32_t field_poly = 0;
    uint64_t size = 0;

    Assignment sample(uint64_t idx) const;
};

FourwiseSpace fourwise_space(uint32_t n);

struct Xor3Params {
    double target_divisor = 0;  // 0 -> constants::kXor3TargetDivisor
    int max_trials = 0;         // 0 -> ceil(64*sqrt(D)*ln(n+1))
    int rounding_draws = 0;     // 0 -> 8*ceil(sqrt(D))
    int max_halvings = 8;
};

std::pair<Assignment, SolveReport> solve_3xor(const Instance& inst, uint64_t seed,
                                              const Xor3Params& params = {});

// Deterministic variant: z from the 4-wise independent space, rounding by
// conditional expectations.
std::pair<Assignment, SolveReport> solve_3xor_derandomized(const Instance& inst,
                                                           const Xor3Params& params = {});

}  // namespace cspadv
