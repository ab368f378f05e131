#include "cspadv/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace cspadv {

MultilinearPoly MultilinearPoly::from_truth_table(uint32_t arity, const std::vector<uint8_t>& table) {
    if (arity > 20 || table.size() != (size_t{1} << arity))
        throw std::invalid_argument("from_truth_table: table length must be 2^arity, arity <= 20");

    // In-place Walsh-Hadamard transform with halving, so a[mask] ends up as
    // the coefficient of the monomial over the variables in `mask`.
    std::vector<double> a(table.begin(), table.end());
    for (uint32_t t = 0; t < arity; ++t) {
        const size_t bit = size_t{1} << t;
        for (size_t b = 0; b < a.size(); ++b) {
            if (b & bit) continue;
            const double lo = a[b];        // input t = -1
            const double hi = a[b | bit];  // input t = +1
            a[b] = (hi + lo) / 2;
            a[b | bit] = (hi - lo) / 2;
        }
    }

    MultilinearPoly p(arity);
    for (size_t mask = 0; mask < a.size(); ++mask) {
        if (std::abs(a[mask]) < constants::kCoeffZeroTol) continue;
        VarSet s;
        for (uint32_t t = 0; t < arity; ++t)
            if (mask & (size_t{1} << t)) s.push_back(t);
        p.terms_.emplace(std::move(s), a[mask]);
    }
    return p;
}

void MultilinearPoly::add_term(VarSet s, double c) {
    if (!s.empty() && s.back() >= n_)
        throw std::out_of_range("add_term: variable index out of range");
    auto it = terms_.find(s);
    if (it == terms_.end()) {
        if (std::abs(c) >= constants::kCoeffZeroTol) terms_.emplace(std::move(s), c);
        return;
    }
    it->second += c;
    if (std::abs(it->second) < constants::kCoeffZeroTol) terms_.erase(it);
}

void MultilinearPoly::scale(double a) {
    if (a == 0.0) {
        terms_.clear();
        return;
    }
    for (auto& [s, c] : terms_) c *= a;
}

double MultilinearPoly::evaluate(const Assignment& x) const {
    if (x.size() != n_)
        throw std::invalid_argument("evaluate: assignment length mismatch");
    double acc = 0;
    for (const auto& [s, c] : terms_) {
        int sign = 1;
        for (uint32_t i : s)
            if (x[i] < 0) sign = -sign;
        acc += sign * c;
    }
    return acc;
}

double MultilinearPoly::evaluate_at_biases(const std::vector<double>& mu) const {
    if (mu.size() != n_)
        throw std::invalid_argument("evaluate_at_biases: bias length mismatch");
    for (double b : mu)
        if (std::abs(b) > 1.0 + 1e-15)
            throw std::invalid_argument("evaluate_at_biases: bias out of [-1,1]");
    double acc = 0;
    for (const auto& [s, c] : terms_) {
        double prod = c;
        for (uint32_t i : s) prod *= mu[i];
        acc += prod;
    }
    return acc;
}

double MultilinearPoly::influence(uint32_t i) const {
    if (i >= n_) throw std::out_of_range("influence: index out of range");
    double acc = 0;
    for (const auto& [s, c] : terms_)
        if (std::binary_search(s.begin(), s.end(), i)) acc += c * c;
    return acc;
}

std::vector<double> MultilinearPoly::influences() const {
    std::vector<double> inf(n_, 0.0);
    for (const auto& [s, c] : terms_)
        for (uint32_t i : s) inf[i] += c * c;
    return inf;
}

MultilinearPoly MultilinearPoly::derivative(uint32_t i) const {
    if (i >= n_) throw std::out_of_range("derivative: index out of range");
    MultilinearPoly out(n_);
    for (const auto& [s, c] : terms_) {
        auto it = std::lower_bound(s.begin(), s.end(), i);
        if (it == s.end() || *it != i) continue;
        VarSet rest;
        rest.reserve(s.size() - 1);
        rest.insert(rest.end(), s.begin(), it);
        rest.insert(rest.end(), it + 1, s.end());
        out.terms_.emplace(std::move(rest), c);
    }
    return out;
}

MultilinearPoly MultilinearPoly::restricted(const PartialAssignment& pa) const {
    for (const auto& [i, v] : pa.fixed) {
        if (i >= n_) throw std::out_of_range("restricted: fixed index out of range");
        if (v != 1 && v != -1) throw std::invalid_argument("restricted: fixed value not +-1");
    }
    MultilinearPoly out(n_);
    VarSet rest;
    for (const auto& [s, c] : terms_) {
        double c2 = c;
        rest.clear();
        for (uint32_t i : s) {
            auto it = pa.fixed.find(i);
            if (it == pa.fixed.end())
                rest.push_back(i);
            else if (it->second < 0)
                c2 = -c2;
        }
        out.add_term(rest, c2);
    }
    return out;
}

double MultilinearPoly::level_mass(size_t lo, size_t hi) const {
    double acc = 0;
    for (const auto& [s, c] : terms_)
        if (s.size() >= lo && s.size() <= hi) acc += c * c;
    return acc;
}

}  // namespace cspadv
