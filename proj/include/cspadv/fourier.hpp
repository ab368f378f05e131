#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cspadv/constants.hpp"

namespace cspadv {

// Boolean assignment over {-1,+1}^n.
using Assignment = std::vector<int8_t>;

// Sorted list of distinct variable indices; canonical key for a monomial.
using VarSet = std::vector<uint32_t>;

struct VarSetHash {
    size_t operator()(const VarSet& s) const noexcept {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint32_t v : s) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

// A partial assignment: values fixed on a subset of the variables.
struct PartialAssignment {
    std::unordered_map<uint32_t, int8_t> fixed;  // index -> value in {-1,+1}

    void set(uint32_t i, int8_t v) { fixed[i] = v; }
    bool has(uint32_t i) const { return fixed.count(i) != 0; }
};

// Sparse real multilinear polynomial over {-1,+1}^n, kept in Fourier form:
//   p(x) = sum_S coeff(S) * prod_{i in S} x_i.
// Coefficients with |c| < kCoeffZeroTol are dropped eagerly so that the term
// map is canonical. Immutable in spirit: all operations return new values.
class MultilinearPoly {
public:
    using TermMap = std::unordered_map<VarSet, double, VarSetHash>;

    explicit MultilinearPoly(uint32_t n = 0) : n_(n) {}

    // Unique multilinear extension of a 0/1 truth table on `arity` inputs.
    // Row convention: bit t of the row index is 1 iff input t equals +1.
    static MultilinearPoly from_truth_table(uint32_t arity, const std::vector<uint8_t>& table);

    static MultilinearPoly monomial(uint32_t n, VarSet s, double c) {
        MultilinearPoly p(n);
        p.add_term(std::move(s), c);
        return p;
    }

    uint32_t var_count() const { return n_; }
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    int degree() const {
        size_t d = 0;
        for (const auto& [s, c] : terms_) d = std::max(d, s.size());
        return static_cast<int>(d);
    }

    double coeff(const VarSet& s) const {
        auto it = terms_.find(s);
        return it == terms_.end() ? 0.0 : it->second;
    }

    // Accumulates c onto the monomial x^s. `s` must be sorted and within range.
    void add_term(VarSet s, double c);

    void scale(double a);

    double evaluate(const Assignment& x) const;

    // p at a real point mu in [-1,1]^n; equals E[p(X)] for independent X_i
    // with E[X_i] = mu_i.
    double evaluate_at_biases(const std::vector<double>& mu) const;

    double expectation() const { return coeff({}); }

    double variance() const {
        double v = 0;
        for (const auto& [s, c] : terms_)
            if (!s.empty()) v += c * c;
        return v;
    }

    double influence(uint32_t i) const;
    std::vector<double> influences() const;

    MultilinearPoly derivative(uint32_t i) const;

    // Substitutes the fixed values; result mentions only unfixed variables.
    MultilinearPoly restricted(const PartialAssignment& pa) const;

    // Sum of squared coefficients over levels lo <= |S| <= hi.
    double level_mass(size_t lo, size_t hi) const;

private:
    uint32_t n_;
    TermMap terms_;
};

inline int8_t sign_of(double v) { return v < 0 ? int8_t{-1} : int8_t{1}; }  // sgn(0) := +1

}  // namespace cspadv
