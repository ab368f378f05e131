#include "cspadv/advrand.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cspadv/constants.hpp"

namespace cspadv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

NormalizeResult normalize(const MultilinearPoly& p) {
    double var = p.variance();
    if (var <= 0) throw std::invalid_argument("normalize: zero-variance polynomial");
    double sd = std::sqrt(var);
    MultilinearPoly g = p;
    g.add_term({}, -g.expectation());
    g.scale(1.0 / sd);
    return {std::move(g), sd};
}

uint32_t choose_scale(const MultilinearPoly& g, uint32_t k) {
    if (k < 2) throw std::invalid_argument("choose_scale: need k >= 2 (degree-1 bypasses)");
    const uint32_t bands = static_cast<uint32_t>(std::ceil(std::log2(double(k))));
    const double threshold = 1.0 / (bands + 1.0);
    uint32_t best_s = 1;
    double best_mass = -1;
    for (uint32_t s = 1; s <= bands; ++s) {
        size_t lo = s == 1 ? 1 : (size_t{1} << (s - 1)) + 1;
        size_t hi = size_t{1} << s;
        double mass = g.level_mass(lo, hi);
        if (mass >= threshold) return s;
        if (mass > best_mass) {
            best_mass = mass;
            best_s = s;
        }
    }
    return best_s;
}

Restriction random_restriction(const MultilinearPoly& g, uint32_t s, Rng& rng) {
    if (s < 1) throw std::invalid_argument("random_restriction: need s >= 1");
    Restriction r;
    const uint64_t keep_mask = (uint64_t{1} << s) - 1;  // prob 2^-s: s bits all zero
    for (uint32_t i = 0; i < g.var_count(); ++i) {
        if ((rng.next() & keep_mask) == 0)
            r.u.push_back(i);
        else
            r.y.set(i, rng.pm1());
    }
    r.g_y = g.restricted(r.y);
    return r;
}

Assignment greedy_signs(const MultilinearPoly& g_y, const std::vector<uint32_t>& u) {
    Assignment x(g_y.var_count(), 1);
    VarSet single(1);
    for (uint32_t j : u) {
        single[0] = j;
        x[j] = sign_of(g_y.coeff(single));
    }
    return x;
}

std::vector<double> chebyshev_extrema(uint32_t k) {
    if (k < 1) throw std::invalid_argument("chebyshev_extrema: need k >= 1");
    std::vector<double> eta(k + 1);
    for (uint32_t j = 0; j <= k; ++j) eta[j] = std::cos(j * kPi / k);
    return eta;
}

Assignment noise_flip(const Assignment& x, double eta, Rng& rng) {
    if (std::abs(eta) > 1.0) throw std::invalid_argument("noise_flip: |eta| > 1");
    const double p_flip = (1.0 - eta) / 2.0;
    Assignment out = x;
    for (auto& v : out)
        if (rng.coin(p_flip)) v = -v;
    return out;
}

AdvRandResult adv_rand(const MultilinearPoly& g, const AdvRandParams& params, Rng& rng) {
    AdvRandResult res;
    const uint32_t k = params.k;
    const double t = params.t;

    // degree <= 1: the linear part is exactly maximizable, no restriction needed
    if (g.degree() <= 1) {
        std::vector<uint32_t> all(g.var_count());
        for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
        Assignment x = greedy_signs(g, all);
        double v = g.evaluate(x);
        res.best_x = x;
        res.best_abs = std::abs(v);
        res.reps = 1;
        if (std::abs(v) >= t) {
            res.success = true;
            res.x = std::move(x);
            res.g_value = v;
        }
        return res;
    }

    const uint32_t s = choose_scale(g, k);
    const uint32_t k_eff = (k % 2 == 1) ? k : k + 1;  // even k: treat as degree k+1
    const std::vector<double> etas = chebyshev_extrema(k_eff);

    int max_reps = params.max_reps > 0
                       ? params.max_reps
                       : static_cast<int>(std::ceil(constants::kAdvRandRepScale *
                                                    std::exp(2.0 * k)));
    for (int rep = 0; rep < max_reps; ++rep) {
        res.reps = rep + 1;
        Rng rrng = rng.child(rep);
        Restriction restr = random_restriction(g, s, rrng);
        if (restr.u.empty() || restr.g_y.degree() < 1) continue;  // degenerate draw, re-draw

        Assignment x = greedy_signs(restr.g_y, restr.u);
        double eta = etas[rrng.below(k_eff + 1)] / 2.0;
        const double p_flip = (1.0 - eta) / 2.0;
        for (uint32_t j : restr.u)
            if (rrng.coin(p_flip)) x[j] = -x[j];

        for (const auto& [i, val] : restr.y.fixed) x[i] = val;
        // g_y mentions only U, so this equals g at the merged assignment
        double v = restr.g_y.evaluate(x);
        if (std::abs(v) > res.best_abs) {
            res.best_abs = std::abs(v);
            res.best_x = x;
        }
        if (std::abs(v) >= t) {
            res.success = true;
            res.g_value = v;
            res.x = std::move(x);
            return res;
        }
    }
    return res;
}

std::pair<Assignment, SolveReport> solve_kxor(const Instance& inst, uint64_t seed,
                                              const KXorParams& params) {
    auto t0 = std::chrono::steady_clock::now();
    uint32_t k = 0;
    if (!is_kxor(inst, &k) || k < 2 || k > kMaxArity)
        throw PreconditionError("solve_kxor: instance is not kXOR with 2 <= k <= 8");

    SolveReport rep;
    rep.alg = "advrand";
    rep.seed = seed;

    MultilinearPoly poly = associated_polynomial(inst);
    NormalizeResult norm = normalize(poly);
    const double m = static_cast<double>(inst.m());
    const uint32_t d = max_degree(inst);

    const double c_k = params.t_scale > 0 ? params.t_scale : constants::kxor_t_scale(k);
    double t = c_k * std::sqrt(m / double(d));

    // influence hypothesis Inf_i[g] <= C^-k t^-2; lower t to meet it
    double max_inf = 0;
    for (double v : norm.g.influences()) max_inf = std::max(max_inf, v);
    const double t_cap = 1.0 / std::sqrt(std::pow(constants::kInfluenceC, double(k)) * max_inf);
    if (t > t_cap) {
        t = t_cap;
        rep.notes.push_back("t lowered to " + std::to_string(t) + " by influence hypothesis");
    }
    if (t < 1.0) {
        t = 1.0;
        rep.notes.push_back("t floored at 1 (influence hypothesis unmet at this scale)");
    }

    Rng rng(seed);
    AdvRandResult res;
    for (int halving = 0; halving <= params.max_halvings; ++halving) {
        AdvRandParams ap{t, params.max_reps, k};
        Rng attempt_rng = rng.child(halving);
        res = adv_rand(norm.g, ap, attempt_rng);
        rep.reps += res.reps;
        if (res.success) break;
        if (t <= 1.0) break;
        t = std::max(1.0, t / 2.0);
        rep.notes.push_back("t halved to " + std::to_string(t));
    }
    rep.success = res.success;
    Assignment x = res.success ? res.x : res.best_x;
    if (!res.success) rep.notes.push_back("rep budget exhausted; returning best-seen assignment");

    if (k % 2 == 1) {
        // odd k: the advantage polynomial is odd, take the better of x and -x
        long long c = satisfied_count(inst, x);
        if (2 * c < static_cast<long long>(inst.m()))
            for (auto& v : x) v = -v;
    } else {
        long long c = satisfied_count(inst, x);
        rep.notes.push_back(std::string("even k: deviation sign ") +
                            (2 * c >= static_cast<long long>(inst.m()) ? "+1" : "-1"));
    }

    rep.n = inst.n;
    rep.m = inst.m();
    rep.max_deg = d;
    rep.mu = mu(inst);
    rep.satisfied = satisfied_count(inst, x);
    rep.value = static_cast<double>(rep.satisfied) / m;
    rep.advantage = rep.value - rep.mu;
    rep.sum_sqrt_deg_over_m = sum_sqrt_deg_over_m(inst);
    rep.notes.push_back("t target = " + std::to_string(t) + ", achieved |g| = " +
                        std::to_string(res.success ? std::abs(res.g_value) : res.best_abs));
    rep.millis = elapsed_ms(t0);
    return {std::move(x), std::move(rep)};
}

}  // namespace cspadv
