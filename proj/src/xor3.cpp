#include "cspadv/xor3.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "cspadv/constants.hpp"

namespace cspadv {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

Assignment random_assignment(uint32_t n, Rng& rng) {
    Assignment x(n);
    for (auto& v : x) v = rng.pm1();
    return x;
}

}  // namespace

double DecoupledForm::sum_abs(const Assignment& z) const {
    double acc = 0;
    for (uint32_t i = 0; i < n; ++i) acc += std::abs(g_value(i, z));
    return acc;
}

double DecoupledForm::tilde_value(const Assignment& y, const Assignment& z) const {
    double acc = 0;
    for (uint32_t i = 0; i < n; ++i) acc += int(y[i]) * g_value(i, z);
    return acc;
}

double DecoupledForm::tensor(uint32_t i, uint32_t j, uint32_t k) const {
    if (i == j || j == k || i == k) return 0;
    for (const auto& t : per_var[i])
        if ((t.j == j && t.k == k) || (t.j == k && t.k == j)) return t.sign * unit / 2;
    return 0;
}

MultilinearPoly DecoupledForm::g_poly(uint32_t i) const {
    MultilinearPoly p(n);
    for (const auto& t : per_var[i]) {
        VarSet s{t.j, t.k};
        if (s[0] > s[1]) std::swap(s[0], s[1]);
        p.add_term(std::move(s), t.sign * unit);
    }
    return p;
}

DecoupledForm decouple(const Instance& inst) {
    uint32_t k = 0;
    if (!is_kxor(inst, &k) || k != 3)
        throw PreconditionError("decouple: instance is not 3XOR");
    DecoupledForm df;
    df.n = inst.n;
    df.m = inst.m();
    df.unit = 1.0 / (6.0 * static_cast<double>(df.m));
    df.per_var.resize(df.n);
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& sc = inst.constraints[l].scope;
        int8_t b = static_cast<int8_t>(inst.xor_sign_of(l));
        // G_u picks up b/(6m) * z_v z_w from both orderings of {v,w}
        df.per_var[sc[0]].push_back({sc[1], sc[2], b});
        df.per_var[sc[1]].push_back({sc[0], sc[2], b});
        df.per_var[sc[2]].push_back({sc[0], sc[1], b});
    }
    return df;
}

GreedyZResult greedy_z_trials(const DecoupledForm& df, double target, int max_trials, Rng& rng) {
    if (target <= 0) throw std::invalid_argument("greedy_z_trials: target must be positive");
    GreedyZResult res;
    res.achieved = -1;
    for (int t = 0; t < max_trials; ++t) {
        Rng trial_rng = rng.child(t);
        Assignment z = random_assignment(df.n, trial_rng);
        double v = df.sum_abs(z);
        res.trials = t + 1;
        if (v > res.achieved) {
            res.achieved = v;
            res.z = std::move(z);
        }
        if (res.achieved >= target) {
            res.success = true;
            break;
        }
    }
    res.y.resize(df.n);
    for (uint32_t i = 0; i < df.n; ++i) res.y[i] = sign_of(df.g_value(i, res.z));
    return res;
}

Assignment round_to_x(const Assignment& y, const Assignment& z, Rng& rng) {
    if (y.size() != z.size()) throw std::invalid_argument("round_to_x: length mismatch");
    const uint32_t n = static_cast<uint32_t>(y.size());
    Assignment x(n);
    double u = rng.unit();
    if (u < 4.0 / 9.0) {
        for (uint32_t i = 0; i < n; ++i) x[i] = rng.bit() ? y[i] : z[i];
    } else if (u < 8.0 / 9.0) {
        for (uint32_t i = 0; i < n; ++i) x[i] = rng.bit() ? y[i] : int8_t(-z[i]);
    } else {
        for (uint32_t i = 0; i < n; ++i) x[i] = -y[i];
    }
    return x;
}

// --- 4-wise independent sample space ---------------------------------------

namespace {

// irreducible polynomials over GF(2), bit h..0
constexpr uint32_t kFieldPoly[13] = {0,    0x3,   0x7,   0xb,   0x13,  0x25, 0x43,
                                     0x83, 0x11b, 0x211, 0x409, 0x805, 0x1053};

uint32_t gf_mul(uint32_t a, uint32_t b, uint32_t h, uint32_t poly) {
    uint32_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1u << h)) a ^= poly;
    }
    return r;
}

int parity(uint32_t x) { return std::popcount(x) & 1; }

}  // namespace

FourwiseSpace fourwise_space(uint32_t n) {
    if (n < 1) throw std::invalid_argument("fourwise_space: need n >= 1");
    uint32_t h = 1;
    while ((uint32_t{1} << h) < n) ++h;
    if (h > 12)
        throw std::invalid_argument("fourwise_space: n too large to enumerate (max 4096)");
    FourwiseSpace sp;
    sp.n = n;
    sp.h = h;
    sp.field_poly = kFieldPoly[h];
    sp.size = uint64_t{2} << (2 * h);
    return sp;
}

Assignment FourwiseSpace::sample(uint64_t idx) const {
    const uint32_t mask = (uint32_t{1} << h) - 1;
    const uint32_t a = static_cast<uint32_t>(idx) & mask;
    const uint32_t b = static_cast<uint32_t>(idx >> h) & mask;
    const uint32_t c = static_cast<uint32_t>(idx >> (2 * h)) & 1;
    Assignment x(n);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t p = i;
        uint32_t p3 = gf_mul(p, gf_mul(p, p, h, field_poly), h, field_poly);
        int bit = parity(a & p) ^ parity(b & p3) ^ static_cast<int>(c);
        x[i] = bit ? -1 : 1;
    }
    return x;
}

// --- solvers ----------------------------------------------------------------

namespace {

void fill_report_common(SolveReport& rep, const Instance& inst, const Assignment& x) {
    rep.n = inst.n;
    rep.m = inst.m();
    rep.max_deg = max_degree(inst);
    rep.mu = mu(inst);
    rep.satisfied = satisfied_count(inst, x);
    rep.value = static_cast<double>(rep.satisfied) / static_cast<double>(inst.m());
    rep.advantage = rep.value - rep.mu;
    rep.sum_sqrt_deg_over_m = sum_sqrt_deg_over_m(inst);
}

double default_target(const Instance& inst, double divisor) {
    double s = 0;
    for (uint32_t d : degrees(inst)) s += std::sqrt(static_cast<double>(d));
    return s / (divisor * static_cast<double>(inst.m()));
}

// Greedy conditional-expectation rounding of a product distribution with
// marginals mu (entries in [-1,1]); fixes coordinates in index order, never
// decreasing E[P(x)]. Exact for the degree-3 multilinear objective.
Assignment derandomize_rounding(const Instance& inst, std::vector<double> mu_vec) {
    std::vector<std::vector<std::pair<size_t, uint32_t>>> by_var(inst.n);
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& sc = inst.constraints[l].scope;
        for (uint32_t t = 0; t < 3; ++t) by_var[sc[t]].push_back({l, t});
    }
    Assignment x(inst.n);
    for (uint32_t i = 0; i < inst.n; ++i) {
        double slope = 0;  // d/dmu_i of E[P] = sum over constraints of sign * prod(other mus)
        for (auto [l, pos] : by_var[i]) {
            const auto& sc = inst.constraints[l].scope;
            double prod = inst.xor_sign_of(l);
            for (uint32_t t = 0; t < 3; ++t)
                if (t != pos) prod *= mu_vec[sc[t]];
            slope += prod;
        }
        x[i] = sign_of(slope);
        mu_vec[i] = x[i];
    }
    return x;
}

}  // namespace

std::pair<Assignment, SolveReport> solve_3xor(const Instance& inst, uint64_t seed,
                                              const Xor3Params& params) {
    auto t0 = std::chrono::steady_clock::now();
    DecoupledForm df = decouple(inst);
    const uint32_t d = max_degree(inst);

    SolveReport rep;
    rep.alg = "xor3";
    rep.seed = seed;

    const double divisor =
        params.target_divisor > 0 ? params.target_divisor : constants::kXor3TargetDivisor;
    double target = default_target(inst, divisor);
    const int max_trials =
        params.max_trials > 0
            ? params.max_trials
            : static_cast<int>(std::ceil(64.0 * std::sqrt(double(d)) * std::log(inst.n + 1.0)));

    Rng rng(seed);
    Rng trial_rng = rng.child(1);
    GreedyZResult gz;
    for (int halving = 0; halving <= params.max_halvings; ++halving) {
        Rng attempt_rng = trial_rng.child(halving);
        gz = greedy_z_trials(df, target, max_trials, attempt_rng);
        rep.trials += gz.trials;
        if (gz.success) break;
        target /= 2;
        rep.notes.push_back("greedy z target halved to " + std::to_string(target));
    }
    if (!gz.success) {
        rep.success = false;
        rep.notes.push_back("greedy z target unmet; using best z seen");
    }

    const int draws =
        params.rounding_draws > 0
            ? params.rounding_draws
            : 8 * static_cast<int>(std::ceil(std::sqrt(double(d))));
    Rng round_rng = rng.child(2);
    long long best_count = -1;
    Assignment best;
    for (int r = 0; r < draws; ++r) {
        Rng draw_rng = round_rng.child(r);
        Assignment x = round_to_x(gz.y, gz.z, draw_rng);
        long long c = satisfied_count(inst, x);
        // negation trick: the advantage polynomial is odd, so val(-x) = 1 - val(x)
        long long cn = static_cast<long long>(inst.m()) - c;
        if (c > best_count) {
            best_count = c;
            best = x;
        }
        if (cn > best_count) {
            best_count = cn;
            for (auto& v : x) v = -v;
            best = std::move(x);
        }
    }

    fill_report_common(rep, inst, best);
    rep.millis = elapsed_ms(t0);
    return {std::move(best), std::move(rep)};
}

std::pair<Assignment, SolveReport> solve_3xor_derandomized(const Instance& inst,
                                                           const Xor3Params&) {
    auto t0 = std::chrono::steady_clock::now();
    DecoupledForm df = decouple(inst);
    FourwiseSpace sp = fourwise_space(inst.n);

    SolveReport rep;
    rep.alg = "xor3-derand";
    rep.trials = static_cast<int>(sp.size);

    Assignment best_z;
    double best_sum = -1;
    for (uint64_t idx = 0; idx < sp.size; ++idx) {
        Assignment z = sp.sample(idx);
        double v = df.sum_abs(z);
        if (v > best_sum) {
            best_sum = v;
            best_z = std::move(z);
        }
    }
    Assignment y(inst.n);
    for (uint32_t i = 0; i < inst.n; ++i) y[i] = sign_of(df.g_value(i, best_z));

    // three schemes as product distributions, each rounded by conditional
    // expectations, plus the negations
    std::vector<double> mu_a(inst.n), mu_b(inst.n), mu_c(inst.n);
    for (uint32_t i = 0; i < inst.n; ++i) {
        mu_a[i] = (y[i] + best_z[i]) / 2.0;
        mu_b[i] = (y[i] - best_z[i]) / 2.0;
        mu_c[i] = -y[i];
    }
    long long best_count = -1;
    Assignment best;
    for (const auto& mu_vec : {mu_a, mu_b, mu_c}) {
        Assignment x = derandomize_rounding(inst, mu_vec);
        long long c = satisfied_count(inst, x);
        long long cn = static_cast<long long>(inst.m()) - c;
        if (c > best_count) {
            best_count = c;
            best = x;
        }
        if (cn > best_count) {
            best_count = cn;
            for (auto& v : x) v = -v;
            best = std::move(x);
        }
    }

    rep.notes.push_back("best sum |G_i(z)| over space = " + std::to_string(best_sum));
    fill_report_common(rep, inst, best);
    rep.millis = elapsed_ms(t0);
    return {std::move(best), std::move(rep)};
}

}  // namespace cspadv
