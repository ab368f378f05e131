#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cspadv/gen.hpp"
#include "cspadv/trifree.hpp"

using namespace cspadv;

namespace {

// Planted instance for the independence claim: one inactive XOR3 whose three
// variables are all Greedy, each hanging on its own active constraint.
//   C0 = XOR3(0,1,2)  inactive (3 greedy vars)
//   C1 = XOR3(0,3,4), C2 = OR2(1,5), C3 = AND2(2,6)  active
Instance planted() {
    Instance inst;
    inst.n = 7;
    inst.add_xor_constraint({0, 1, 2}, 1);
    inst.add_xor_constraint({0, 3, 4}, 1);
    inst.add_constraint(inst.add_predicate(or_predicate(2)), {1, 5});
    inst.add_constraint(inst.add_predicate(and_predicate(2)), {2, 6});
    return inst;
}

std::vector<uint8_t> planted_sides() { return {1, 1, 1, 0, 0, 0, 0}; }

// 2Q sum for greedy variable av at a fixed assignment (independent oracle,
// same table arithmetic as greedy_assign but reimplemented here).
long long h_sum(const Instance& inst, const ActiveVar& av, const Assignment& x) {
    long long h = 0;
    for (size_t idx = 0; idx < av.constraints.size(); ++idx) {
        size_t l = av.constraints[idx];
        const auto& sc = inst.constraints[l].scope;
        const Predicate& p = inst.pred_of(l);
        uint32_t row = 0;
        for (uint32_t t = 0; t < sc.size(); ++t)
            if (t != av.pos[idx] && x[sc[t]] > 0) row |= 1u << t;
        h += int(p.table[row | (1u << av.pos[idx])]) - int(p.table[row]);
    }
    return h;
}

// P[x_j = +1 | fixed side] as an exact rational.
BigRat prob_plus(const Instance& inst, const ActiveVar& av, const ThresholdRule& rule,
                 const Assignment& x) {
    long long h = h_sum(inst, av, x);
    if (h > rule.theta_h) return BigRat(1);
    if (h < rule.theta_h) return BigRat(0);
    return BigRat(rule.tie_num, rule.tie_den);
}

}  // namespace

TEST_CASE("plan_from_sides basics") {
    Instance inst;
    inst.n = 5;
    inst.add_xor_constraint({0, 1, 2}, 1);

    PartitionPlan plan = plan_from_sides(inst, {1, 0, 0, 0, 0});
    REQUIRE(plan.active.size() == 1);
    CHECK(plan.active[0].j == 0);
    CHECK(plan.active[0].constraints == std::vector<size_t>{0});
    CHECK(plan.active[0].a_set == std::vector<uint32_t>{1, 2});

    // all variables Fixed: no active constraints, plan still valid
    PartitionPlan none = plan_from_sides(inst, {0, 0, 0, 0, 0});
    CHECK(none.active.empty());

    // two greedy vars in the scope: constraint is inactive
    PartitionPlan two = plan_from_sides(inst, {1, 1, 0, 0, 0});
    CHECK(two.active.empty());

    Instance overlap;
    overlap.n = 4;
    overlap.add_xor_constraint({0, 1, 2}, 1);
    overlap.add_xor_constraint({1, 2, 3}, 1);
    Rng rng(1);
    CHECK_THROWS_AS(plan_partition(overlap, rng), PreconditionError);

    Instance unary;
    unary.n = 2;
    unary.add_constraint(unary.add_predicate(Predicate{1, {0, 1}}), {0});
    Rng rng2(2);
    CHECK_THROWS_AS(plan_partition(unary, rng2), PreconditionError);
}

TEST_CASE("activation probability over all partitions is 2^-k") {
    Instance inst;
    inst.n = 9;
    inst.add_xor_constraint({2, 5, 7}, 1);
    const uint32_t k = 3;
    long long active_with_j[3] = {0, 0, 0};
    for (uint32_t mask = 0; mask < (1u << inst.n); ++mask) {
        std::vector<uint8_t> sides(inst.n);
        for (uint32_t i = 0; i < inst.n; ++i) sides[i] = mask >> i & 1;
        PartitionPlan plan = plan_from_sides(inst, sides, true);
        if (plan.active.size() == 1) {
            uint32_t j = plan.active[0].j;
            if (j == 2) ++active_with_j[0];
            if (j == 5) ++active_with_j[1];
            if (j == 7) ++active_with_j[2];
        }
    }
    for (int t = 0; t < 3; ++t)
        CHECK(active_with_j[t] == (1 << (inst.n - k)));  // probability 2^-k exactly
}

TEST_CASE("derivative_terms") {
    Instance inst;
    inst.n = 6;
    inst.add_xor_constraint({0, 1, 2}, -1);                              // b = -1
    inst.add_constraint(inst.add_predicate(and_predicate(2)), {0, 3});   // AND2(j, u)
    inst.add_constraint(inst.add_predicate(or_predicate(2)), {0, 4});    // OR2(j, u)
    PartitionPlan plan = plan_from_sides(inst, {1, 0, 0, 0, 0, 0});
    REQUIRE(plan.active.size() == 1);
    auto terms = derivative_terms(inst, plan, 0);
    REQUIRE(terms.size() == 3);
    // XOR3 with b: Q = (b/2) x_u x_v
    CHECK(terms[0].coeff({1, 2}) == doctest::Approx(-0.5));
    CHECK(terms[0].term_count() == 1);
    // AND2: Q = 1/4 + x_u/4
    CHECK(terms[1].coeff({}) == doctest::Approx(0.25));
    CHECK(terms[1].coeff({3}) == doctest::Approx(0.25));
    // OR2: Q = 1/4 - x_u/4
    CHECK(terms[2].coeff({}) == doctest::Approx(0.25));
    CHECK(terms[2].coeff({4}) == doctest::Approx(-0.25));

    CHECK(derivative_terms(inst, plan, 5).empty());
}

TEST_CASE("threshold_rule") {
    // one XOR term: pmf {-1/2: 1/2, +1/2: 1/2}; theta = -1/2; p_tie = 0
    HalfIntPmf xor_pmf = derivative_pmf(xor_predicate(3, 1), 0);
    CHECK(xor_pmf.exp2 == 2);
    CHECK(xor_pmf.num[0] == 2);  // -1 in half units
    CHECK(xor_pmf.num[1] == 0);
    CHECK(xor_pmf.num[2] == 2);
    ThresholdRule one = threshold_rule({xor_pmf});
    CHECK(one.theta_h == -1);
    CHECK(one.tie_num == 0);

    // two independent XOR terms: {-1: 1/4, 0: 1/2, 1: 1/4}; theta = 0; p = 1/2
    ThresholdRule two = threshold_rule({xor_pmf, xor_pmf});
    CHECK(two.theta_h == 0);
    CHECK(BigRat(two.tie_num, two.tie_den) == BigRat(1, 2));

    // empty: fair coin
    ThresholdRule coin = threshold_rule({});
    CHECK(coin.theta_h == 0);
    CHECK(BigRat(coin.tie_num, coin.tie_den) == BigRat(1, 2));

    // unbiasedness equation holds on the rule's own pmf
    for (const ThresholdRule& r : {one, two}) {
        BigRat p(r.tie_num, r.tie_den);
        CHECK(r.dist.prob_gt(r.theta_h) + p * r.dist.prob_eq(r.theta_h) == BigRat(1, 2));
    }
}

TEST_CASE("greedy rule application on a single active constraint") {
    Instance inst;
    inst.n = 3;
    inst.add_xor_constraint({0, 1, 2}, 1);
    PartitionPlan plan = plan_from_sides(inst, {1, 0, 0});
    ThresholdRule rule = rule_for(inst, plan.active[0]);
    std::vector<ThresholdRule> rules{rule};

    Assignment x{0, 1, 1};  // x_u = x_v = +1
    Rng rng(1);
    greedy_assign(inst, plan, rules, x, rng);
    CHECK(x[0] == 1);  // Q = +1/2 > theta = -1/2

    Assignment x2{0, 1, -1};  // Q = -1/2 = theta: tie with p = 0 -> -1
    Rng rng2(2);
    greedy_assign(inst, plan, rules, x2, rng2);
    CHECK(x2[0] == -1);
}

TEST_CASE("bernoulli_exact") {
    Rng rng(99);
    CHECK_FALSE(bernoulli_exact(rng, BigInt(0), BigInt(7)));
    CHECK(bernoulli_exact(rng, BigInt(7), BigInt(7)));
    long long hits = 0;
    const int draws = 30000;
    for (int i = 0; i < draws; ++i)
        if (bernoulli_exact(rng, BigInt(1), BigInt(3))) ++hits;
    CHECK(std::abs(hits / double(draws) - 1.0 / 3) < 0.02);
}

TEST_CASE("exact unbiasedness of every greedy bit (enumeration oracle)") {
    int checked = 0;
    for (uint64_t seed = 0; checked < 60 && seed < 40; ++seed) {
        Instance inst = triangle_free_random(36, 3, 3, 1000 + seed);
        if (inst.m() == 0) continue;
        Rng rng(seed);
        PartitionPlan plan = plan_partition(inst, rng, true);
        for (const auto& av : plan.active) {
            ThresholdRule rule = rule_for(inst, av);
            const size_t a = av.a_set.size();
            REQUIRE(a <= 16);
            BigInt cnt_gt = 0, cnt_eq = 0, cnt_lt = 0;
            Assignment x(inst.n, 1);
            for (uint64_t pat = 0; pat < (uint64_t{1} << a); ++pat) {
                for (size_t t = 0; t < a; ++t) x[av.a_set[t]] = pat >> t & 1 ? 1 : -1;
                long long h = h_sum(inst, av, x);
                if (h > rule.theta_h)
                    ++cnt_gt;
                else if (h == rule.theta_h)
                    ++cnt_eq;
                else
                    ++cnt_lt;
            }
            // E[x_j] = (gt - lt + eq(2p - 1)) / 2^a must vanish exactly
            BigRat p(rule.tie_num, rule.tie_den);
            BigRat e = (BigRat(cnt_gt) - BigRat(cnt_lt) +
                        BigRat(cnt_eq) * (BigRat(2) * p - BigRat(1))) /
                       BigRat(BigInt(1) << a);
            CHECK(e == BigRat(0));
            ++checked;
        }
    }
    CHECK(checked >= 60);
}

TEST_CASE("inactive scopes get uniform independent bits (planted, exhaustive)") {
    Instance inst = planted();
    REQUIRE(check_triangle_free(inst).ok());
    PartitionPlan plan = plan_from_sides(inst, planted_sides());
    REQUIRE(plan.active.size() == 3);

    std::vector<ThresholdRule> rules;
    for (const auto& av : plan.active) rules.push_back(rule_for(inst, av));

    // joint distribution of (x_0, x_1, x_2) over uniform fixed bits and tie
    // coins, exactly; the inactive XOR3 scope must be uniform on {+-1}^3
    const uint32_t f_bits = 4;  // variables 3,4,5,6
    std::vector<BigRat> joint(8, BigRat(0));
    Assignment x(inst.n, 1);
    for (uint32_t pat = 0; pat < (1u << f_bits); ++pat) {
        for (uint32_t t = 0; t < f_bits; ++t) x[3 + t] = pat >> t & 1 ? 1 : -1;
        BigRat pr[3];
        for (size_t a = 0; a < plan.active.size(); ++a) {
            uint32_t j = plan.active[a].j;
            REQUIRE(j <= 2);
            pr[j] = prob_plus(inst, plan.active[a], rules[a], x);
        }
        for (uint32_t combo = 0; combo < 8; ++combo) {
            BigRat w(1);
            for (uint32_t j = 0; j < 3; ++j)
                w *= (combo >> j & 1) ? pr[j] : BigRat(1) - pr[j];
            joint[combo] += w;
        }
    }
    for (uint32_t combo = 0; combo < 8; ++combo)
        CHECK(joint[combo] == BigRat(BigInt(1) << f_bits, 8));
}

TEST_CASE("active advantage: E[x_j Q] = E|Q - theta| >= anticoncentration bound") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        Instance inst = triangle_free_random(40, 3, 4, 300 + seed);
        if (inst.m() == 0) continue;
        uint32_t k = 0;
        for (size_t l = 0; l < inst.m(); ++l) k = std::max(k, inst.pred_of(l).arity);
        Rng rng(seed);
        PartitionPlan plan = plan_partition(inst, rng, true);
        for (const auto& av : plan.active) {
            ThresholdRule rule = rule_for(inst, av);
            // from the pmf, in value units (half units / 2)
            double e_abs =
                boost::rational_cast<double>(rule.dist.abs_moment_about(rule.theta_h)) / 2;
            BigRat mean_h = rule.dist.mean_half_units();
            BigRat var_h = rule.dist.second_moment_half_units() - mean_h * mean_h;
            double sd = std::sqrt(boost::rational_cast<double>(var_h)) / 2;
            CHECK(e_abs >= 0.25 * std::exp(-2.0 * (k - 1)) * sd - 1e-12);

            // cross-check E|Q - theta| against the enumeration oracle
            const size_t a = av.a_set.size();
            if (a <= 14) {
                Assignment x(inst.n, 1);
                long long acc = 0;
                for (uint64_t pat = 0; pat < (uint64_t{1} << a); ++pat) {
                    for (size_t t = 0; t < a; ++t) x[av.a_set[t]] = pat >> t & 1 ? 1 : -1;
                    acc += std::abs(h_sum(inst, av, x) - rule.theta_h);
                }
                double brute = double(acc) / double(uint64_t{1} << a) / 2;
                CHECK(e_abs == doctest::Approx(brute).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("per-rep expected value is at least mu (planted, exhaustive)") {
    Instance inst = planted();
    PartitionPlan plan = plan_from_sides(inst, planted_sides());
    std::vector<ThresholdRule> rules;
    for (const auto& av : plan.active) rules.push_back(rule_for(inst, av));

    const uint32_t f_bits = 4;
    BigRat total(0);
    Assignment x(inst.n, 1);
    for (uint32_t pat = 0; pat < (1u << f_bits); ++pat) {
        for (uint32_t t = 0; t < f_bits; ++t) x[3 + t] = pat >> t & 1 ? 1 : -1;
        BigRat pr[3];
        for (size_t a = 0; a < plan.active.size(); ++a)
            pr[plan.active[a].j] = prob_plus(inst, plan.active[a], rules[a], x);
        // satisfaction probability of each constraint given the fixed side
        for (size_t l = 0; l < inst.m(); ++l) {
            const auto& sc = inst.constraints[l].scope;
            const Predicate& p = inst.pred_of(l);
            std::vector<uint32_t> greedy_pos;
            uint32_t base_row = 0;
            for (uint32_t t = 0; t < sc.size(); ++t) {
                if (sc[t] <= 2)
                    greedy_pos.push_back(t);
                else if (x[sc[t]] > 0)
                    base_row |= 1u << t;
            }
            for (uint32_t combo = 0; combo < (1u << greedy_pos.size()); ++combo) {
                BigRat w(1);
                uint32_t row = base_row;
                for (size_t gi = 0; gi < greedy_pos.size(); ++gi) {
                    uint32_t j = sc[greedy_pos[gi]];
                    if (combo >> gi & 1) {
                        w *= pr[j];
                        row |= 1u << greedy_pos[gi];
                    } else {
                        w *= BigRat(1) - pr[j];
                    }
                }
                if (p.sat(row)) total += w;
            }
        }
    }
    BigRat e_value = total / BigRat(BigInt(1) << f_bits) / BigRat(BigInt(inst.m()));
    Ratio mu_r = mu_exact(inst);
    CHECK(e_value >= BigRat(BigInt(mu_r.num), BigInt(mu_r.den)));
}

TEST_CASE("solve_triangle_free") {
    // vertex-disjoint constraints: positive advantage in nearly every seed
    int positive = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Instance inst = triangle_free_random(60, 3, 1, 2000 + seed);
        auto [x, rep] = solve_triangle_free(inst, seed);
        CHECK(rep.value >= rep.mu);  // best rep is never below random
        if (rep.advantage > 0) ++positive;
    }
    CHECK(positive >= 19);

    // deterministic given the seed
    Instance inst = triangle_free_random(80, 3, 4, 77);
    auto [xa, ra] = solve_triangle_free(inst, 5);
    auto [xb, rb] = solve_triangle_free(inst, 5);
    CHECK(xa == xb);
    CHECK(ra.satisfied == rb.satisfied);

    // precondition failures carry witnesses
    Instance overlap;
    overlap.n = 4;
    overlap.add_xor_constraint({0, 1, 2}, 1);
    overlap.add_xor_constraint({1, 2, 3}, 1);
    CHECK_THROWS_WITH_AS(solve_triangle_free(overlap, 1),
                         doctest::Contains("overlapping constraints 0 and 1"),
                         PreconditionError);
}
