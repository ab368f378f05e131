#pragma once

#include <cstdint>

#include "cspadv/csp.hpp"
#include "cspadv/rng.hpp"

namespace cspadv {

// Random kXOR with max variable degree <= d, scopes distinct as sets, signs
// uniform. Targets m = floor(n*d/k); may fall short when the rejection cap
// is hit (density_met reports it). Throws if nothing can be placed.
Instance random_kxor(uint32_t n, uint32_t k, uint32_t d, uint64_t seed,
                     bool* density_met = nullptr);

// Random triangle-free instance with a mixed predicate pool
// (XOR3+-, NAE3, OR2, AND2 capped at arity k_max), degree <= d. Greedy
// randomized packing; the output always passes check_triangle_free.
Instance triangle_free_random(uint32_t n, uint32_t k_max, uint32_t d, uint64_t seed,
                              bool* density_met = nullptr);

// Max-Cut on the complete n-vertex graph: all C(n,2) constraints x_i != x_j.
Instance complete_graph_maxcut(uint32_t n);

// D x D grid: x OR y for row pairs, (NOT x) OR (NOT y) for column pairs.
Instance grid_2sat(uint32_t d);

// The 8-clause NAE/AE system on 6 variables that every assignment satisfies
// exactly half of.
Instance nae_ae_gadget();

// Complete graph 2XOR with uniform random signs (the concentration example).
Instance random_sign_complete(uint32_t n, uint64_t seed);

}  // namespace cspadv
