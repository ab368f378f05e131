#include "cspadv/trifree.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cspadv/constants.hpp"

namespace cspadv {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

BigRat HalfIntPmf::prob_gt(int h) const {
    BigInt acc = 0;
    for (size_t i = 0; i < num.size(); ++i)
        if (min_h + static_cast<int>(i) > h) acc += num[i];
    return BigRat(acc, denominator());
}

BigRat HalfIntPmf::prob_eq(int h) const {
    int i = h - min_h;
    if (i < 0 || i >= static_cast<int>(num.size())) return BigRat(0);
    return BigRat(num[i], denominator());
}

BigRat HalfIntPmf::mean_half_units() const {
    BigInt acc = 0;
    for (size_t i = 0; i < num.size(); ++i) acc += num[i] * (min_h + static_cast<int>(i));
    return BigRat(acc, denominator());
}

BigRat HalfIntPmf::second_moment_half_units() const {
    BigInt acc = 0;
    for (size_t i = 0; i < num.size(); ++i) {
        BigInt v = min_h + static_cast<int>(i);
        acc += num[i] * v * v;
    }
    return BigRat(acc, denominator());
}

BigRat HalfIntPmf::abs_moment_about(int h) const {
    BigInt acc = 0;
    for (size_t i = 0; i < num.size(); ++i) {
        int v = min_h + static_cast<int>(i) - h;
        acc += num[i] * (v < 0 ? -v : v);
    }
    return BigRat(acc, denominator());
}

HalfIntPmf derivative_pmf(const Predicate& pred, uint32_t pos) {
    // 2*Q = P(row with pos=1) - P(row with pos=0) in {-1,0,1}
    HalfIntPmf pmf;
    pmf.min_h = -1;
    pmf.num.assign(3, 0);
    pmf.exp2 = static_cast<int>(pred.arity) - 1;
    const uint32_t bit = 1u << pos;
    for (uint32_t row = 0; row < pred.table.size(); ++row) {
        if (row & bit) continue;
        int d = static_cast<int>(pred.table[row | bit]) - static_cast<int>(pred.table[row]);
        ++pmf.num[d + 1];
    }
    return pmf;
}

HalfIntPmf convolve(const HalfIntPmf& a, const HalfIntPmf& b) {
    HalfIntPmf out;
    out.min_h = a.min_h + b.min_h;
    out.exp2 = a.exp2 + b.exp2;
    out.num.assign(a.num.size() + b.num.size() - 1, 0);
    for (size_t i = 0; i < a.num.size(); ++i) {
        if (a.num[i] == 0) continue;
        for (size_t j = 0; j < b.num.size(); ++j) out.num[i + j] += a.num[i] * b.num[j];
    }
    return out;
}

ThresholdRule threshold_rule(const std::vector<HalfIntPmf>& terms) {
    ThresholdRule rule;
    if (terms.empty()) {
        // no active constraints: theta = 0 and a fair coin
        rule.theta_h = 0;
        rule.tie_num = 1;
        rule.tie_den = 2;
        rule.dist.min_h = 0;
        rule.dist.num = {BigInt(1)};
        rule.dist.exp2 = 0;
        return rule;
    }
    HalfIntPmf pmf = terms[0];
    for (size_t i = 1; i < terms.size(); ++i) pmf = convolve(pmf, terms[i]);

    // theta: least support point with CDF >= 1/2
    const BigInt den = pmf.denominator();
    BigInt cum = 0;
    int theta = pmf.min_h;
    for (size_t i = 0; i < pmf.num.size(); ++i) {
        cum += pmf.num[i];
        if (2 * cum >= den) {
            theta = pmf.min_h + static_cast<int>(i);
            break;
        }
    }
    // unbiasedness: P[sum > theta] + p * P[sum = theta] = 1/2 exactly
    BigInt gt = 0, eq = 0;
    for (size_t i = 0; i < pmf.num.size(); ++i) {
        int h = pmf.min_h + static_cast<int>(i);
        if (h > theta) gt += pmf.num[i];
        if (h == theta) eq += pmf.num[i];
    }
    rule.theta_h = theta;
    rule.tie_num = den / 2 - gt;
    rule.tie_den = eq;
    rule.dist = std::move(pmf);
    if (rule.tie_num < 0 || rule.tie_num >= rule.tie_den)
        throw std::logic_error("threshold_rule: tie probability out of [0,1)");
    return rule;
}

PartitionPlan plan_from_sides(const Instance& inst, const std::vector<uint8_t>& in_greedy,
                              bool assume_valid) {
    if (!assume_valid) {
        TriangleFreeReport tf = check_triangle_free(inst);
        if (!tf.ok()) throw PreconditionError("plan_partition: " + tf.describe());
        for (size_t l = 0; l < inst.m(); ++l)
            if (inst.pred_of(l).arity < 2)
                throw PreconditionError("plan_partition: constraint " + std::to_string(l) +
                                        " has arity < 2");
    }
    PartitionPlan plan;
    plan.in_greedy = in_greedy;

    std::vector<int> active_idx(inst.n, -1);
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& sc = inst.constraints[l].scope;
        uint32_t greedy_var = 0, greedy_pos = 0, cnt = 0;
        for (uint32_t t = 0; t < sc.size(); ++t) {
            if (in_greedy[sc[t]]) {
                greedy_var = sc[t];
                greedy_pos = t;
                ++cnt;
            }
        }
        if (cnt != 1) continue;  // active = exactly one greedy coordinate
        if (active_idx[greedy_var] < 0) {
            active_idx[greedy_var] = static_cast<int>(plan.active.size());
            plan.active.push_back(ActiveVar{greedy_var, {}, {}, {}});
        }
        ActiveVar& av = plan.active[active_idx[greedy_var]];
        av.constraints.push_back(l);
        av.pos.push_back(greedy_pos);
        for (uint32_t t = 0; t < sc.size(); ++t)
            if (t != greedy_pos) av.a_set.push_back(sc[t]);
    }
    for (auto& av : plan.active) std::sort(av.a_set.begin(), av.a_set.end());

    // Structural invariant behind the independence claim: whenever two greedy
    // variables j, j' share a constraint, their A-sets are disjoint (a common
    // element would close a hyper-triangle with that constraint), and for an
    // inactive constraint no A_j reaches back into the scope (that would be an
    // overlap). Globally the A_j may intersect; that is fine because any
    // constraint seeing both correlated bits would itself be forbidden.
    auto disjoint_sorted = [](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return false;
            a[i] < b[j] ? ++i : ++j;
        }
        return true;
    };
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& sc = inst.constraints[l].scope;
        std::vector<const ActiveVar*> here;
        uint32_t greedy_cnt = 0;
        for (uint32_t v : sc) {
            greedy_cnt += in_greedy[v];
            if (active_idx[v] >= 0) here.push_back(&plan.active[active_idx[v]]);
        }
        const bool is_active_constraint = greedy_cnt == 1;
        for (size_t a = 0; a < here.size(); ++a) {
            for (size_t b = a + 1; b < here.size(); ++b)
                if (!disjoint_sorted(here[a]->a_set, here[b]->a_set))
                    throw std::logic_error(
                        "plan_partition: A-sets of greedy variables sharing constraint " +
                        std::to_string(l) + " overlap (instance not triangle-free?)");
            if (!is_active_constraint) {
                for (uint32_t v : sc)
                    if (v != here[a]->j &&
                        std::binary_search(here[a]->a_set.begin(), here[a]->a_set.end(), v))
                        throw std::logic_error(
                            "plan_partition: A-set of greedy variable reaches inactive scope " +
                            std::to_string(l) + " (instance not triangle-free?)");
            }
        }
    }
    return plan;
}

PartitionPlan plan_partition(const Instance& inst, Rng& rng, bool assume_valid) {
    std::vector<uint8_t> side(inst.n);
    for (auto& s : side) s = rng.bit() ? 1 : 0;
    return plan_from_sides(inst, side, assume_valid);
}

std::vector<MultilinearPoly> derivative_terms(const Instance& inst, const PartitionPlan& plan,
                                              uint32_t j) {
    const ActiveVar* av = nullptr;
    for (const auto& a : plan.active)
        if (a.j == j) av = &a;
    if (!av) return {};
    std::vector<MultilinearPoly> out;
    for (size_t idx = 0; idx < av->constraints.size(); ++idx) {
        size_t l = av->constraints[idx];
        const Predicate& p = inst.pred_of(l);
        MultilinearPoly local =
            MultilinearPoly::from_truth_table(p.arity, p.table).derivative(av->pos[idx]);
        // relabel local scope positions to instance variables
        MultilinearPoly global(inst.n);
        const auto& sc = inst.constraints[l].scope;
        for (const auto& [s, c] : local.terms()) {
            VarSet mapped;
            for (uint32_t t : s) mapped.push_back(sc[t]);
            std::sort(mapped.begin(), mapped.end());
            global.add_term(std::move(mapped), c);
        }
        out.push_back(std::move(global));
    }
    return out;
}

ThresholdRule rule_for(const Instance& inst, const ActiveVar& av) {
    std::vector<HalfIntPmf> pmfs;
    pmfs.reserve(av.constraints.size());
    for (size_t idx = 0; idx < av.constraints.size(); ++idx)
        pmfs.push_back(derivative_pmf(inst.pred_of(av.constraints[idx]), av.pos[idx]));
    return threshold_rule(pmfs);
}

bool bernoulli_exact(Rng& rng, const BigInt& num, const BigInt& den) {
    if (num <= 0) return false;
    if (num >= den) return true;
    // uniform integer in [0, den) by rejection on the bit length
    const size_t bits = boost::multiprecision::msb(den) + 1;
    for (;;) {
        BigInt draw = 0;
        size_t left = bits;
        while (left >= 64) {
            draw = (draw << 64) | rng.next();
            left -= 64;
        }
        if (left > 0) draw = (draw << left) | (rng.next() >> (64 - left));
        if (draw < den) return draw < num;
    }
}

void greedy_assign(const Instance& inst, const PartitionPlan& plan,
                   const std::vector<ThresholdRule>& rules, Assignment& x, Rng& rng) {
    // inactive greedy variables: fair coins
    std::vector<uint8_t> has_rule(inst.n, 0);
    for (const auto& av : plan.active) has_rule[av.j] = 1;
    for (uint32_t i = 0; i < inst.n; ++i)
        if (plan.in_greedy[i] && !has_rule[i]) x[i] = rng.child(i).pm1();

    for (size_t a = 0; a < plan.active.size(); ++a) {
        const ActiveVar& av = plan.active[a];
        const ThresholdRule& rule = rules[a];
        // h = sum_l 2*Q_l(x_{A_j}), evaluated exactly from the truth tables
        long long h = 0;
        for (size_t idx = 0; idx < av.constraints.size(); ++idx) {
            size_t l = av.constraints[idx];
            const auto& sc = inst.constraints[l].scope;
            const Predicate& p = inst.pred_of(l);
            uint32_t row = 0;
            for (uint32_t t = 0; t < sc.size(); ++t)
                if (t != av.pos[idx] && x[sc[t]] > 0) row |= 1u << t;
            const uint32_t bit = 1u << av.pos[idx];
            h += static_cast<int>(p.table[row | bit]) - static_cast<int>(p.table[row]);
        }
        if (h > rule.theta_h) {
            x[av.j] = 1;
        } else if (h < rule.theta_h) {
            x[av.j] = -1;
        } else {
            Rng coin = rng.child(av.j);
            x[av.j] = bernoulli_exact(coin, rule.tie_num, rule.tie_den) ? 1 : -1;
        }
    }
}

std::pair<Assignment, SolveReport> solve_triangle_free(const Instance& inst, uint64_t seed,
                                                       const TrifreeParams& params) {
    auto t0 = std::chrono::steady_clock::now();
    TriangleFreeReport tf = check_triangle_free(inst);
    if (!tf.ok()) throw PreconditionError("solve_triangle_free: " + tf.describe());
    uint32_t k = 0;
    for (size_t l = 0; l < inst.m(); ++l) {
        uint32_t r = inst.pred_of(l).arity;
        if (r < 2)
            throw PreconditionError("solve_triangle_free: constraint " + std::to_string(l) +
                                    " has arity < 2");
        k = std::max(k, r);
    }
    if (inst.m() == 0) throw PreconditionError("solve_triangle_free: empty instance");

    const int reps = params.reps > 0
                         ? params.reps
                         : constants::kTrifreeRepScale *
                               static_cast<int>(std::ceil(std::exp(double(k))));

    SolveReport rep;
    rep.alg = "trifree";
    rep.seed = seed;
    rep.reps = reps;

    Rng master(seed);
    long long best_count = -1;
    Assignment best;
    double sum_adv = 0;
    const double mu_val = mu(inst);
    for (int r = 0; r < reps; ++r) {
        Rng rep_rng = master.child(r);
        PartitionPlan plan = plan_partition(inst, rep_rng, true);
        std::vector<ThresholdRule> rules;
        rules.reserve(plan.active.size());
        for (const auto& av : plan.active) rules.push_back(rule_for(inst, av));

        Assignment x(inst.n);
        Rng draw = rep_rng.child(0x46495845ULL);  // fixed-side bits
        for (uint32_t i = 0; i < inst.n; ++i) x[i] = plan.in_greedy[i] ? 1 : draw.pm1();
        Rng coins = rep_rng.child(0x434f494eULL);  // greedy-side coins
        greedy_assign(inst, plan, rules, x, coins);

        long long c = satisfied_count(inst, x);
        sum_adv += static_cast<double>(c) / static_cast<double>(inst.m()) - mu_val;
        if (c > best_count) {
            best_count = c;
            best = std::move(x);
        }
    }

    rep.n = inst.n;
    rep.m = inst.m();
    rep.max_deg = max_degree(inst);
    rep.mu = mu_val;
    rep.satisfied = best_count;
    rep.value = static_cast<double>(best_count) / static_cast<double>(inst.m());
    rep.advantage = rep.value - rep.mu;
    rep.sum_sqrt_deg_over_m = sum_sqrt_deg_over_m(inst);
    rep.notes.push_back("mean per-rep advantage = " + std::to_string(sum_adv / reps));
    rep.millis = elapsed_ms(t0);
    return {std::move(best), std::move(rep)};
}

}  // namespace cspadv
