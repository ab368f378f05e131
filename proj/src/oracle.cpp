#include "cspadv/oracle.hpp"

#include <bit>

namespace cspadv {

namespace {

// Walks all 2^n assignments in Gray-code order, flipping one variable per
// step and updating only the constraints that mention it. visit(count, code)
// gets the satisfied count and the Gray code word (bit i set <=> x_i = +1).
template <class Visit>
void gray_walk(const Instance& inst, uint32_t max_n, Visit&& visit) {
    if (inst.n > max_n)
        throw std::invalid_argument("oracle: instance too large for exhaustive enumeration");
    std::vector<std::vector<std::pair<size_t, uint32_t>>> by_var(inst.n);  // (constraint, pos)
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& sc = inst.constraints[l].scope;
        for (uint32_t t = 0; t < sc.size(); ++t) by_var[sc[t]].push_back({l, t});
    }
    std::vector<uint32_t> row(inst.m(), 0);  // all variables start at -1
    long long count = 0;
    for (size_t l = 0; l < inst.m(); ++l)
        if (inst.pred_of(l).sat(0)) ++count;

    const uint64_t total = uint64_t{1} << inst.n;
    visit(count, uint64_t{0});
    for (uint64_t t = 1; t < total; ++t) {
        uint32_t i = static_cast<uint32_t>(std::countr_zero(t));
        for (auto [l, pos] : by_var[i]) {
            const Predicate& p = inst.pred_of(l);
            count -= p.sat(row[l]);
            row[l] ^= 1u << pos;
            count += p.sat(row[l]);
        }
        visit(count, t ^ (t >> 1));
    }
}

Assignment from_code(uint32_t n, uint64_t code) {
    Assignment x(n);
    for (uint32_t i = 0; i < n; ++i) x[i] = (code >> i) & 1 ? 1 : -1;
    return x;
}

}  // namespace

BruteForceResult brute_force_opt(const Instance& inst) {
    long long best = -1;
    uint64_t best_code = 0;
    gray_walk(inst, 26, [&](long long count, uint64_t code) {
        if (count > best) {
            best = count;
            best_code = code;
        }
    });
    BruteForceResult r;
    r.best_count = best;
    r.m = static_cast<long long>(inst.m());
    r.argmax = from_code(inst.n, best_code);
    return r;
}

std::vector<long long> value_distribution(const Instance& inst) {
    std::vector<long long> hist(inst.m() + 1, 0);
    gray_walk(inst, 22, [&](long long count, uint64_t) { ++hist[count]; });
    return hist;
}

}  // namespace cspadv
