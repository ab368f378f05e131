#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cspadv/fourier.hpp"

namespace cspadv {

// Thrown when an algorithm's precondition fails (wrong instance class, bad
// arity, not triangle-free, ...). Carries a human-readable witness.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr uint32_t kMaxArity = 8;

// Arity-r Boolean predicate as a 2^r truth table.
// Row convention (shared with the text format): bit t of the row index is 1
// iff the t-th scope variable equals +1; table entry 1 means satisfied.
struct Predicate {
    uint32_t arity = 0;
    std::vector<uint8_t> table;  // 2^arity entries in {0,1}

    bool sat(uint32_t row) const { return table[row] != 0; }
    uint32_t sat_rows() const;
    bool depends_on(uint32_t t) const;
    bool depends_on_all() const;
    // +1/-1 if this is the predicate [prod x_i = sign] on all coordinates, else 0.
    int xor_sign() const;
    bool operator==(const Predicate&) const = default;
};

Predicate xor_predicate(uint32_t k, int sign);
Predicate nae_predicate(uint32_t r);  // not-all-equal
Predicate ae_predicate(uint32_t r);   // all-equal
Predicate or_predicate(uint32_t r);
Predicate and_predicate(uint32_t r);
Predicate nand_predicate(uint32_t r);  // "not all true": the OR of negations

struct Constraint {
    uint32_t pred;                // index into Instance::predicates
    std::vector<uint32_t> scope;  // ordered, distinct
};

enum class InstanceKind { generic, kxor };

// n Boolean variables plus m (predicate, scope) constraints. The predicate
// pool is deduplicated by table bytes; constraints refer by id.
struct Instance {
    uint32_t n = 0;
    std::vector<Predicate> predicates;
    std::vector<Constraint> constraints;
    InstanceKind kind = InstanceKind::generic;
    uint32_t xor_k = 0;  // set when kind == kxor

    size_t m() const { return constraints.size(); }

    uint32_t add_predicate(Predicate p);
    void add_constraint(uint32_t pred, std::vector<uint32_t> scope);
    void add_xor_constraint(std::vector<uint32_t> scope, int sign);

    const Predicate& pred_of(size_t l) const { return predicates[constraints[l].pred]; }

    // Truth-table row selected by x on constraint l's scope.
    uint32_t row_of(size_t l, const Assignment& x) const {
        const auto& sc = constraints[l].scope;
        uint32_t row = 0;
        for (uint32_t t = 0; t < sc.size(); ++t)
            if (x[sc[t]] > 0) row |= 1u << t;
        return row;
    }

    bool sat(size_t l, const Assignment& x) const { return pred_of(l).sat(row_of(l, x)); }

    // XOR sign of constraint l; only meaningful on parity predicates.
    int xor_sign_of(size_t l) const { return pred_of(l).xor_sign(); }
};

// Exact fraction num/den; not auto-reduced (value fractions keep den = m).
struct Ratio {
    long long num = 0;
    long long den = 1;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio& o) const { return num * o.den == o.num * den; }
};

long long satisfied_count(const Instance& inst, const Assignment& x);
Ratio value_fraction(const Instance& inst, const Assignment& x);

// Expected fraction of constraints satisfied by a uniformly random assignment.
double mu(const Instance& inst);
Ratio mu_exact(const Instance& inst);

// Degree-<=k advantage polynomial: value_fraction(x) = mu + P(x).
MultilinearPoly associated_polynomial(const Instance& inst);

uint32_t degree(const Instance& inst, uint32_t i);
std::vector<uint32_t> degrees(const Instance& inst);
uint32_t max_degree(const Instance& inst);
double sum_sqrt_deg_over_m(const Instance& inst);

// True if every constraint is a +-parity of exactly the same arity k >= 1.
bool is_kxor(const Instance& inst, uint32_t* k_out = nullptr);

struct TriangleFreeReport {
    enum class Kind { ok, overlap, hyper_triangle };
    Kind kind = Kind::ok;
    size_t c1 = 0, c2 = 0, c3 = 0;  // witness constraint ids
    bool ok() const { return kind == Kind::ok; }
    std::string describe() const;
};

// Checks both forbidden configurations: two scopes sharing >= 2 variables,
// and three distinct constraints whose scopes pairwise intersect.
TriangleFreeReport check_triangle_free(const Instance& inst);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

ValidationReport validate(const Instance& inst);

// --- text format ---------------------------------------------------------
// line 1:            p csp <n> <m>
// generic constraint: c <r> <v1> ... <vr> <hex table, row 0 least significant>
// kXOR shortcut:      x <k> <v1> ... <vk> <+1|-1>
// comments:           lines starting '#'; variables 0-based.

void write_instance(std::ostream& os, const Instance& inst,
                    const std::vector<std::string>& header_comments = {});
Instance read_instance(std::istream& is);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst,
                   const std::vector<std::string>& header_comments = {});

// Structural equality: same n, kind, and per-constraint (scope, table).
bool same_instance(const Instance& a, const Instance& b);

}  // namespace cspadv
