#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cspadv/csp.hpp"
#include "cspadv/report.hpp"
#include "cspadv/rng.hpp"

namespace cspadv {

// g = (p - p^(emptyset)) / stddev(p); p = expectation + scale * g.
struct NormalizeResult {
    MultilinearPoly g;
    double scale = 0;
};
NormalizeResult normalize(const MultilinearPoly& p);

// Scale s in [1, ceil(log2 k)] whose Fourier band holds mass at least
// 1/(ceil(log2 k)+1); band s covers levels (2^{s-1}, 2^s], band 1 also
// covers level 1. Smallest qualifying s, else the argmax-mass s.
uint32_t choose_scale(const MultilinearPoly& g, uint32_t k);

struct Restriction {
    std::vector<uint32_t> u;  // live coordinates, sorted
    PartialAssignment y;      // random values outside u
    MultilinearPoly g_y;      // restriction of g by y
};

// Each coordinate joins U independently with probability 2^-s; the rest get
// uniform random values.
Restriction random_restriction(const MultilinearPoly& g, uint32_t s, Rng& rng);

// x*_j = sgn(g_y^({j})) for j in u (sgn(0) := +1); other entries +1.
Assignment greedy_signs(const MultilinearPoly& g_y, const std::vector<uint32_t>& u);

// The k+1 extrema of the degree-k Chebyshev polynomial: cos(j*pi/k), j=0..k.
std::vector<double> chebyshev_extrema(uint32_t k);

// Flips every coordinate independently with probability (1-eta)/2, so that
// E[g(flipped x)] = g evaluated at the point eta*x.
Assignment noise_flip(const Assignment& x, double eta, Rng& rng);

struct AdvRandParams {
    double t = 1.0;    // target deviation, >= 1 in normalized units
    int max_reps = 0;  // 0 -> ceil(64 * e^{2k})
    uint32_t k = 3;    // degree bound
};

struct AdvRandResult {
    bool success = false;
    Assignment x;         // |g(x)| >= t when success
    double g_value = 0;   // g(x) for the returned x
    Assignment best_x;    // best seen across reps regardless of success
    double best_abs = 0;
    int reps = 0;
};

// The constructive low-influence deviation algorithm: random restriction,
// greedy signs on the linear part, Chebyshev-extremum noise.
AdvRandResult adv_rand(const MultilinearPoly& g, const AdvRandParams& params, Rng& rng);

struct KXorParams {
    double t_scale = 0;  // 0 -> constants::kxor_t_scale(k)
    int max_reps = 0;
    int max_halvings = 6;
};

// Max-kXOR wrapper: normalizes the advantage polynomial, targets
// t = c_k * sqrt(m/D) (floored at 1, capped by the influence hypothesis),
// and maps |g(x)| >= t back to |val - 1/2| >= t/(2 sqrt(m)). For odd k the
// better of x and -x is returned, so val >= 1/2 always.
std::pair<Assignment, SolveReport> solve_kxor(const Instance& inst, uint64_t seed,
                                              const KXorParams& params = {});

}  // namespace cspadv
