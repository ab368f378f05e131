#include "cspadv/gen.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace cspadv {

namespace {

std::string scope_key(std::vector<uint32_t> scope) {
    std::sort(scope.begin(), scope.end());
    return std::string(reinterpret_cast<const char*>(scope.data()),
                       scope.size() * sizeof(uint32_t));
}

// Samples k distinct entries from pool (uniform); returns false if the pool
// is too small.
bool sample_distinct(const std::vector<uint32_t>& pool, uint32_t k, Rng& rng,
                     std::vector<uint32_t>& out) {
    if (pool.size() < k) return false;
    out.clear();
    while (out.size() < k) {
        uint32_t v = pool[rng.below(pool.size())];
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return true;
}

}  // namespace

Instance random_kxor(uint32_t n, uint32_t k, uint32_t d, uint64_t seed, bool* density_met) {
    if (k < 1 || k > kMaxArity || n < k || d < 1)
        throw std::invalid_argument("random_kxor: need 1 <= k <= 8, n >= k, d >= 1");
    const size_t target_m = static_cast<size_t>(n) * d / k;
    if (target_m == 0) throw std::invalid_argument("random_kxor: n*d/k < 1, no constraints fit");

    Instance inst;
    inst.n = n;
    inst.kind = InstanceKind::kxor;
    inst.xor_k = k;
    Rng rng(seed);

    std::vector<uint32_t> deg(n, 0);
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; ++i) pool[i] = i;
    std::unordered_set<std::string> used;
    std::vector<uint32_t> scope;

    size_t attempts = 0;
    const size_t cap = 50 * target_m;
    while (inst.m() < target_m && attempts < cap) {
        ++attempts;
        if (!sample_distinct(pool, k, rng, scope)) break;
        std::string key = scope_key(scope);
        if (!used.insert(key).second) continue;
        inst.add_xor_constraint(scope, rng.pm1());
        for (uint32_t v : scope) {
            if (++deg[v] == d) pool.erase(std::find(pool.begin(), pool.end(), v));
        }
    }
    if (inst.m() == 0) throw std::invalid_argument("random_kxor: could not place any constraint");
    if (density_met) *density_met = inst.m() == target_m;
    return inst;
}

Instance triangle_free_random(uint32_t n, uint32_t k_max, uint32_t d, uint64_t seed,
                              bool* density_met) {
    if (k_max < 2 || k_max > kMaxArity || n < k_max || d < 1)
        throw std::invalid_argument("triangle_free_random: need 2 <= k <= 8, n >= k, d >= 1");

    Instance inst;
    inst.n = n;
    Rng rng(seed);

    // predicate mix: uniform over the available kinds at this arity cap
    std::vector<uint32_t> preds;
    if (k_max >= 3) {
        preds = {inst.add_predicate(xor_predicate(3, 1)), inst.add_predicate(xor_predicate(3, -1)),
                 inst.add_predicate(nae_predicate(3)), inst.add_predicate(or_predicate(2)),
                 inst.add_predicate(and_predicate(2))};
    } else {
        preds = {inst.add_predicate(xor_predicate(2, 1)), inst.add_predicate(xor_predicate(2, -1)),
                 inst.add_predicate(or_predicate(2)), inst.add_predicate(and_predicate(2))};
    }

    const size_t target_m = static_cast<size_t>(n) * d / k_max;
    std::vector<uint32_t> deg(n, 0);
    std::vector<std::vector<size_t>> by_var(n);
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<uint32_t> scope;
    std::vector<size_t> touching;

    auto intersects = [&](size_t a, size_t b) {
        for (uint32_t v : inst.constraints[a].scope)
            for (uint32_t w : inst.constraints[b].scope)
                if (v == w) return true;
        return false;
    };

    size_t attempts = 0;
    const size_t cap = 50 * std::max<size_t>(target_m, 1);
    while (inst.m() < target_m && attempts < cap) {
        ++attempts;
        uint32_t pid = preds[rng.below(preds.size())];
        uint32_t r = inst.predicates[pid].arity;
        if (!sample_distinct(pool, r, rng, scope)) break;

        // no overlapping constraints: a new scope may meet each existing one
        // in at most one variable; no hyper-triangles: two touched constraints
        // that intersect each other must meet the new scope at their own
        // shared variable (a star), otherwise the three close a triangle.
        touching.clear();
        bool ok = true;
        for (uint32_t v : scope) {
            for (size_t l : by_var[v]) {
                int sharedv = 0;
                for (uint32_t w : inst.constraints[l].scope)
                    sharedv += std::find(scope.begin(), scope.end(), w) != scope.end();
                if (sharedv >= 2) {
                    ok = false;
                    break;
                }
                touching.push_back(l);
            }
            if (!ok) break;
        }
        if (ok) {
            std::sort(touching.begin(), touching.end());
            touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
            auto common_with_scope = [&](size_t a, size_t b) {
                for (uint32_t v : scope) {
                    const auto& sa = inst.constraints[a].scope;
                    const auto& sb = inst.constraints[b].scope;
                    if (std::find(sa.begin(), sa.end(), v) != sa.end() &&
                        std::find(sb.begin(), sb.end(), v) != sb.end())
                        return true;
                }
                return false;
            };
            for (size_t a = 0; a < touching.size() && ok; ++a)
                for (size_t b = a + 1; b < touching.size() && ok; ++b)
                    if (intersects(touching[a], touching[b]) &&
                        !common_with_scope(touching[a], touching[b]))
                        ok = false;
        }
        if (!ok) continue;

        size_t id = inst.m();
        inst.add_constraint(pid, scope);
        for (uint32_t v : scope) {
            by_var[v].push_back(id);
            if (++deg[v] == d) pool.erase(std::find(pool.begin(), pool.end(), v));
        }
    }
    if (density_met) *density_met = inst.m() == target_m;
    return inst;
}

Instance complete_graph_maxcut(uint32_t n) {
    if (n < 2) throw std::invalid_argument("complete_graph_maxcut: need n >= 2");
    Instance inst;
    inst.n = n;
    inst.kind = InstanceKind::kxor;
    inst.xor_k = 2;
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j) inst.add_xor_constraint({i, j}, -1);
    return inst;
}

Instance grid_2sat(uint32_t d) {
    if (d < 2) throw std::invalid_argument("grid_2sat: need d >= 2");
    Instance inst;
    inst.n = d * d;
    uint32_t orp = inst.add_predicate(or_predicate(2));
    uint32_t nandp = inst.add_predicate(nand_predicate(2));
    for (uint32_t r = 0; r < d; ++r)
        for (uint32_t c1 = 0; c1 < d; ++c1)
            for (uint32_t c2 = c1 + 1; c2 < d; ++c2)
                inst.add_constraint(orp, {r * d + c1, r * d + c2});
    for (uint32_t c = 0; c < d; ++c)
        for (uint32_t r1 = 0; r1 < d; ++r1)
            for (uint32_t r2 = r1 + 1; r2 < d; ++r2)
                inst.add_constraint(nandp, {r1 * d + c, r2 * d + c});
    return inst;
}

Instance nae_ae_gadget() {
    // variables: x1,x2,x3 -> 0,1,2  y1,y2,y3 -> 3,4,5
    Instance inst;
    inst.n = 6;
    uint32_t nae = inst.add_predicate(nae_predicate(3));
    uint32_t ae = inst.add_predicate(ae_predicate(3));
    inst.add_constraint(nae, {0, 1, 2});
    inst.add_constraint(ae, {3, 1, 2});
    inst.add_constraint(ae, {0, 4, 2});
    inst.add_constraint(ae, {0, 1, 5});
    inst.add_constraint(nae, {0, 4, 5});
    inst.add_constraint(nae, {3, 1, 5});
    inst.add_constraint(nae, {3, 4, 2});
    inst.add_constraint(ae, {3, 4, 5});
    return inst;
}

Instance random_sign_complete(uint32_t n, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_sign_complete: need n >= 2");
    Instance inst;
    inst.n = n;
    inst.kind = InstanceKind::kxor;
    inst.xor_k = 2;
    Rng rng(seed);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j) inst.add_xor_constraint({i, j}, rng.pm1());
    return inst;
}

}  // namespace cspadv
