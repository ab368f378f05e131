#include "cspadv/csp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cspadv {

uint32_t Predicate::sat_rows() const {
    uint32_t c = 0;
    for (uint8_t b : table) c += b;
    return c;
}

bool Predicate::depends_on(uint32_t t) const {
    const uint32_t bit = 1u << t;
    for (uint32_t row = 0; row < table.size(); ++row)
        if (!(row & bit) && table[row] != table[row | bit]) return true;
    return false;
}

bool Predicate::depends_on_all() const {
    for (uint32_t t = 0; t < arity; ++t)
        if (!depends_on(t)) return false;
    return true;
}

int Predicate::xor_sign() const {
    if (arity == 0) return 0;
    for (int sign : {1, -1}) {
        bool match = true;
        for (uint32_t row = 0; row < table.size() && match; ++row) {
            // product of entries: -1 per coordinate set to -1, i.e. per zero bit
            int prod = ((arity - std::popcount(row)) % 2 == 0) ? 1 : -1;
            uint8_t want = (prod == sign) ? 1 : 0;
            match = table[row] == want;
        }
        if (match) return sign;
    }
    return 0;
}

Predicate xor_predicate(uint32_t k, int sign) {
    Predicate p{k, std::vector<uint8_t>(size_t{1} << k, 0)};
    for (uint32_t row = 0; row < p.table.size(); ++row) {
        int prod = ((k - std::popcount(row)) % 2 == 0) ? 1 : -1;
        p.table[row] = (prod == sign) ? 1 : 0;
    }
    return p;
}

Predicate nae_predicate(uint32_t r) {
    Predicate p{r, std::vector<uint8_t>(size_t{1} << r, 1)};
    p.table.front() = 0;
    p.table.back() = 0;
    return p;
}

Predicate ae_predicate(uint32_t r) {
    Predicate p{r, std::vector<uint8_t>(size_t{1} << r, 0)};
    p.table.front() = 1;
    p.table.back() = 1;
    return p;
}

Predicate or_predicate(uint32_t r) {
    Predicate p{r, std::vector<uint8_t>(size_t{1} << r, 1)};
    p.table.front() = 0;  // only the all-(-1) row falsifies
    return p;
}

Predicate and_predicate(uint32_t r) {
    Predicate p{r, std::vector<uint8_t>(size_t{1} << r, 0)};
    p.table.back() = 1;
    return p;
}

Predicate nand_predicate(uint32_t r) {
    Predicate p{r, std::vector<uint8_t>(size_t{1} << r, 1)};
    p.table.back() = 0;  // only the all-(+1) row falsifies
    return p;
}

uint32_t Instance::add_predicate(Predicate p) {
    for (uint32_t i = 0; i < predicates.size(); ++i)
        if (predicates[i] == p) return i;
    predicates.push_back(std::move(p));
    return static_cast<uint32_t>(predicates.size() - 1);
}

void Instance::add_constraint(uint32_t pred, std::vector<uint32_t> scope) {
    constraints.push_back(Constraint{pred, std::move(scope)});
}

void Instance::add_xor_constraint(std::vector<uint32_t> scope, int sign) {
    uint32_t k = static_cast<uint32_t>(scope.size());
    uint32_t id = add_predicate(xor_predicate(k, sign));
    add_constraint(id, std::move(scope));
}

long long satisfied_count(const Instance& inst, const Assignment& x) {
    if (x.size() != inst.n)
        throw std::invalid_argument("satisfied_count: assignment length mismatch");
    long long c = 0;
    for (size_t l = 0; l < inst.m(); ++l)
        if (inst.sat(l, x)) ++c;
    return c;
}

Ratio value_fraction(const Instance& inst, const Assignment& x) {
    return Ratio{satisfied_count(inst, x), static_cast<long long>(inst.m())};
}

Ratio mu_exact(const Instance& inst) {
    uint32_t rmax = 0;
    for (const auto& p : inst.predicates) rmax = std::max(rmax, p.arity);
    long long num = 0;
    for (size_t l = 0; l < inst.m(); ++l) {
        const Predicate& p = inst.pred_of(l);
        num += static_cast<long long>(p.sat_rows()) << (rmax - p.arity);
    }
    return Ratio{num, static_cast<long long>(inst.m()) << rmax};
}

double mu(const Instance& inst) { return mu_exact(inst).to_double(); }

MultilinearPoly associated_polynomial(const Instance& inst) {
    const double inv_m = 1.0 / static_cast<double>(inst.m());
    // centered predicate polynomials, one per pool entry
    std::vector<MultilinearPoly> centered;
    centered.reserve(inst.predicates.size());
    for (const auto& p : inst.predicates) {
        MultilinearPoly q = MultilinearPoly::from_truth_table(p.arity, p.table);
        q.add_term({}, -q.expectation());
        centered.push_back(std::move(q));
    }
    MultilinearPoly acc(inst.n);
    VarSet mapped;
    for (const auto& c : inst.constraints) {
        for (const auto& [s, coef] : centered[c.pred].terms()) {
            mapped.clear();
            for (uint32_t t : s) mapped.push_back(c.scope[t]);
            std::sort(mapped.begin(), mapped.end());
            acc.add_term(mapped, coef * inv_m);
        }
    }
    return acc;
}

std::vector<uint32_t> degrees(const Instance& inst) {
    std::vector<uint32_t> deg(inst.n, 0);
    for (const auto& c : inst.constraints)
        for (uint32_t v : c.scope) ++deg[v];
    return deg;
}

uint32_t degree(const Instance& inst, uint32_t i) {
    if (i >= inst.n) return 0;
    uint32_t d = 0;
    for (const auto& c : inst.constraints)
        d += std::count(c.scope.begin(), c.scope.end(), i) ? 1 : 0;
    return d;
}

uint32_t max_degree(const Instance& inst) {
    uint32_t best = 0;
    for (uint32_t d : degrees(inst)) best = std::max(best, d);
    return best;
}

double sum_sqrt_deg_over_m(const Instance& inst) {
    double s = 0;
    for (uint32_t d : degrees(inst)) s += std::sqrt(static_cast<double>(d));
    return s / static_cast<double>(inst.m());
}

bool is_kxor(const Instance& inst, uint32_t* k_out) {
    if (inst.m() == 0) return false;
    uint32_t k = inst.pred_of(0).arity;
    for (size_t l = 0; l < inst.m(); ++l) {
        const Predicate& p = inst.pred_of(l);
        if (p.arity != k || p.xor_sign() == 0) return false;
    }
    if (k_out) *k_out = k;
    return true;
}

std::string TriangleFreeReport::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::ok:
            os << "triangle-free";
            break;
        case Kind::overlap:
            os << "overlapping constraints " << c1 << " and " << c2
               << " (scopes share >= 2 variables)";
            break;
        case Kind::hyper_triangle:
            os << "hyper-triangle on constraints " << c1 << ", " << c2 << ", " << c3;
            break;
    }
    return os.str();
}

TriangleFreeReport check_triangle_free(const Instance& inst) {
    std::vector<std::vector<size_t>> by_var(inst.n);
    for (size_t l = 0; l < inst.m(); ++l)
        for (uint32_t v : inst.constraints[l].scope) by_var[v].push_back(l);

    // neighbors of each constraint (constraints sharing >= 1 variable)
    std::vector<std::vector<size_t>> nb(inst.m());
    std::unordered_map<size_t, int> shared;
    for (size_t l = 0; l < inst.m(); ++l) {
        shared.clear();
        for (uint32_t v : inst.constraints[l].scope)
            for (size_t l2 : by_var[v])
                if (l2 != l) ++shared[l2];
        for (const auto& [l2, cnt] : shared) {
            if (cnt >= 2)
                return TriangleFreeReport{TriangleFreeReport::Kind::overlap,
                                          std::min(l, l2), std::max(l, l2), 0};
            nb[l].push_back(l2);
        }
        std::sort(nb[l].begin(), nb[l].end());
    }
    // Three pairwise-intersecting constraints sharing one common variable form
    // a star, which is allowed (that is what degree > 2 looks like); the
    // forbidden hyper-triangle is pairwise intersection with no common
    // variable. Given no overlaps, those are the only two possibilities.
    auto common_var = [&](size_t a, size_t b, size_t c) {
        for (uint32_t v : inst.constraints[a].scope) {
            const auto& sb = inst.constraints[b].scope;
            const auto& sc = inst.constraints[c].scope;
            if (std::find(sb.begin(), sb.end(), v) != sb.end() &&
                std::find(sc.begin(), sc.end(), v) != sc.end())
                return true;
        }
        return false;
    };
    for (size_t l = 0; l < inst.m(); ++l) {
        for (size_t a = 0; a < nb[l].size(); ++a) {
            for (size_t b = a + 1; b < nb[l].size(); ++b) {
                size_t u = nb[l][a], v = nb[l][b];
                if (std::binary_search(nb[u].begin(), nb[u].end(), v) && !common_var(l, u, v))
                    return TriangleFreeReport{TriangleFreeReport::Kind::hyper_triangle, u, v, l};
            }
        }
    }
    return TriangleFreeReport{};
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v << "\n";
    return os.str();
}

ValidationReport validate(const Instance& inst) {
    ValidationReport rep;
    auto note = [&](size_t l, const std::string& what) {
        rep.violations.push_back("constraint " + std::to_string(l) + ": " + what);
    };
    for (uint32_t p = 0; p < inst.predicates.size(); ++p) {
        const Predicate& pr = inst.predicates[p];
        if (pr.arity < 1 || pr.arity > kMaxArity)
            rep.violations.push_back("predicate " + std::to_string(p) + ": arity out of [1,8]");
        else if (pr.table.size() != size_t{1} << pr.arity)
            rep.violations.push_back("predicate " + std::to_string(p) + ": bad table size");
        else
            for (uint32_t t = 0; t < pr.arity; ++t)
                if (!pr.depends_on(t))
                    rep.violations.push_back("predicate " + std::to_string(p) +
                                             ": insensitive coordinate " + std::to_string(t));
    }
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& c = inst.constraints[l];
        if (c.pred >= inst.predicates.size()) {
            note(l, "bad predicate id");
            continue;
        }
        if (c.scope.size() != inst.pred_of(l).arity) note(l, "scope/arity mismatch");
        for (uint32_t v : c.scope)
            if (v >= inst.n) note(l, "variable index out of range");
        auto sorted = c.scope;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            note(l, "repeated coordinate in scope");
    }
    uint32_t k = 0;
    if (rep.ok() && is_kxor(inst, &k)) {
        // scopes must be distinct as sets (covers a constraint plus its negation)
        std::unordered_set<std::string> seen;
        for (size_t l = 0; l < inst.m(); ++l) {
            auto sorted = inst.constraints[l].scope;
            std::sort(sorted.begin(), sorted.end());
            std::string key(reinterpret_cast<const char*>(sorted.data()),
                            sorted.size() * sizeof(uint32_t));
            if (!seen.insert(key).second)
                note(l, "kXOR scope duplicates an earlier scope as a set");
        }
    }
    return rep;
}

// --- text format -----------------------------------------------------------

static std::string table_to_hex(const std::vector<uint8_t>& table) {
    size_t digits = std::max<size_t>(1, table.size() / 4);
    std::string out;
    out.reserve(digits);
    for (size_t d = digits; d-- > 0;) {
        int v = 0;
        for (int b = 0; b < 4; ++b) {
            size_t row = d * 4 + b;
            if (row < table.size() && table[row]) v |= 1 << b;
        }
        out.push_back("0123456789abcdef"[v]);
    }
    return out;
}

static std::vector<uint8_t> hex_to_table(const std::string& hex, uint32_t arity) {
    size_t rows = size_t{1} << arity;
    std::vector<uint8_t> table(rows, 0);
    for (size_t i = 0; i < hex.size(); ++i) {
        char c = hex[hex.size() - 1 - i];
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw std::runtime_error("bad hex digit in truth table");
        for (int b = 0; b < 4; ++b) {
            size_t row = i * 4 + b;
            if (row < rows && (v & (1 << b))) table[row] = 1;
        }
    }
    return table;
}

void write_instance(std::ostream& os, const Instance& inst,
                    const std::vector<std::string>& header_comments) {
    for (const auto& c : header_comments) os << "# " << c << "\n";
    os << "p csp " << inst.n << " " << inst.m() << "\n";
    for (size_t l = 0; l < inst.m(); ++l) {
        const auto& c = inst.constraints[l];
        const Predicate& p = inst.pred_of(l);
        int sign = p.xor_sign();
        if (sign != 0) {  // canonical form: parities always as x lines
            os << "x " << p.arity;
            for (uint32_t v : c.scope) os << " " << v;
            os << " " << (sign > 0 ? "+1" : "-1") << "\n";
        } else {
            os << "c " << p.arity;
            for (uint32_t v : c.scope) os << " " << v;
            os << " " << table_to_hex(p.table) << "\n";
        }
    }
}

Instance read_instance(std::istream& is) {
    Instance inst;
    std::string line;
    size_t lineno = 0;
    bool have_header = false;
    size_t declared_m = 0;
    bool all_xor = true;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("instance parse error (line " + std::to_string(lineno) +
                                 "): " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string fmt;
            if (!(ls >> fmt >> inst.n >> declared_m) || fmt != "csp") fail("bad problem line");
            have_header = true;
        } else if (tag == "c" || tag == "x") {
            if (!have_header) fail("constraint before problem line");
            uint32_t r;
            if (!(ls >> r) || r < 1 || r > kMaxArity) fail("bad arity");
            std::vector<uint32_t> scope(r);
            for (auto& v : scope)
                if (!(ls >> v)) fail("short scope");
            if (tag == "x") {
                std::string sgn;
                if (!(ls >> sgn) || (sgn != "+1" && sgn != "-1")) fail("bad sign");
                inst.add_xor_constraint(std::move(scope), sgn == "+1" ? 1 : -1);
            } else {
                std::string hex;
                if (!(ls >> hex)) fail("missing truth table");
                Predicate p{r, hex_to_table(hex, r)};
                inst.add_constraint(inst.add_predicate(std::move(p)), std::move(scope));
                all_xor = false;
            }
        } else {
            fail("unknown line tag '" + tag + "'");
        }
    }
    if (!have_header) throw std::runtime_error("instance parse error: missing problem line");
    if (inst.m() != declared_m)
        throw std::runtime_error("instance parse error: constraint count " +
                                 std::to_string(inst.m()) + " != declared " +
                                 std::to_string(declared_m));
    uint32_t k = 0;
    if (all_xor && is_kxor(inst, &k)) {
        inst.kind = InstanceKind::kxor;
        inst.xor_k = k;
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open instance file: " + path);
    return read_instance(f);
}

void save_instance(const std::string& path, const Instance& inst,
                   const std::vector<std::string>& header_comments) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write instance file: " + path);
    write_instance(f, inst, header_comments);
}

bool same_instance(const Instance& a, const Instance& b) {
    if (a.n != b.n || a.m() != b.m()) return false;
    for (size_t l = 0; l < a.m(); ++l) {
        if (a.constraints[l].scope != b.constraints[l].scope) return false;
        if (!(a.pred_of(l) == b.pred_of(l))) return false;
    }
    return true;
}

}  // namespace cspadv
