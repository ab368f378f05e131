#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cspadv/csp.hpp"

namespace cspadv {

struct BruteForceResult {
    long long best_count = 0;
    Assignment argmax;
    Ratio value() const { return Ratio{best_count, m}; }
    long long m = 0;
};

// Exact maximum over all 2^n assignments (n <= 26). Gray-code order with
// incremental constraint re-evaluation.
BruteForceResult brute_force_opt(const Instance& inst);

// Exact histogram over satisfied-count: result[c] = #assignments with c
// satisfied constraints (n <= 22).
std::vector<long long> value_distribution(const Instance& inst);

// Exact average of f over all 2^bits bit patterns (bits <= 24). The pattern
// is handed to f as a word; this is the enumeration oracle behind the
// randomized-procedure certifications.
template <class F>
double exhaustive_average(uint32_t bits, F&& f) {
    if (bits > 24) throw std::invalid_argument("exhaustive_average: bits > 24");
    const uint64_t total = uint64_t{1} << bits;
    double acc = 0;
    for (uint64_t p = 0; p < total; ++p) acc += f(p);
    return acc / static_cast<double>(total);
}

// Integer-valued variant returning the exact (sum, 2^bits) pair.
template <class F>
std::pair<long long, long long> exhaustive_sum(uint32_t bits, F&& f) {
    if (bits > 24) throw std::invalid_argument("exhaustive_sum: bits > 24");
    const uint64_t total = uint64_t{1} << bits;
    long long acc = 0;
    for (uint64_t p = 0; p < total; ++p) acc += f(p);
    return {acc, static_cast<long long>(total)};
}

}  // namespace cspadv
