#include "cspadv/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cspadv/advrand.hpp"
#include "cspadv/gen.hpp"
#include "cspadv/oracle.hpp"
#include "cspadv/trifree.hpp"
#include "cspadv/xor3.hpp"

namespace cspadv {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitAssert = 4;

int default_jobs() {
    if (const char* env = std::getenv("CSPADV_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

struct GenArgs {
    std::string kind, out;
    uint32_t n = 100, k = 3, d = 6;
    uint64_t seed = 1;
};

int run_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst;
    bool density_met = true;
    if (a.kind == "kxor") {
        inst = random_kxor(a.n, a.k, a.d, a.seed, &density_met);
    } else if (a.kind == "triangle-free") {
        inst = triangle_free_random(a.n, a.k, a.d, a.seed, &density_met);
    } else if (a.kind == "complete-cut") {
        inst = complete_graph_maxcut(a.n);
    } else if (a.kind == "grid-2sat") {
        inst = grid_2sat(a.d);
    } else if (a.kind == "nae-ae") {
        inst = nae_ae_gadget();
    } else if (a.kind == "random-sign") {
        inst = random_sign_complete(a.n, a.seed);
    } else {
        err << "unknown --kind '" << a.kind << "'\n";
        return kExitSpec;
    }
    std::ostringstream spec;
    spec << "cspadv gen --kind " << a.kind << " --n " << a.n << " --k " << a.k << " --d " << a.d
         << " --seed " << a.seed;
    std::vector<std::string> comments{spec.str()};
    if (!density_met) comments.push_back("warning: target density not met (rejection cap hit)");
    if (a.out.empty()) {
        write_instance(out, inst, comments);
    } else {
        save_instance(a.out, inst, comments);
        out << "wrote " << a.out << " (n=" << inst.n << ", m=" << inst.m() << ")\n";
    }
    return kExitOk;
}

struct SolveArgs {
    std::string alg, in;
    uint64_t seed = 1;
    int trials = 0, reps = 0;
    double t_scale = 0;
    bool derand = false, json = false;
};

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.in);
    ValidationReport vr = validate(inst);
    if (!vr.ok()) {
        err << "invalid instance:\n" << vr.describe();
        return kExitPrecondition;
    }
    SolveReport rep;
    Assignment x;
    if (a.alg == "xor3") {
        Xor3Params p;
        p.max_trials = a.trials;
        if (a.derand) {
            std::tie(x, rep) = solve_3xor_derandomized(inst, p);
        } else {
            std::tie(x, rep) = solve_3xor(inst, a.seed, p);
        }
    } else if (a.alg == "advrand") {
        KXorParams p;
        p.t_scale = a.t_scale;
        p.max_reps = a.reps;
        std::tie(x, rep) = solve_kxor(inst, a.seed, p);
    } else if (a.alg == "trifree") {
        TrifreeParams p;
        p.reps = a.reps;
        std::tie(x, rep) = solve_triangle_free(inst, a.seed, p);
    } else if (a.alg == "brute") {
        BruteForceResult bf = brute_force_opt(inst);
        rep.alg = "brute";
        rep.n = inst.n;
        rep.m = inst.m();
        rep.max_deg = max_degree(inst);
        rep.mu = mu(inst);
        rep.satisfied = bf.best_count;
        rep.value = bf.value().to_double();
        rep.advantage = rep.value - rep.mu;
        rep.sum_sqrt_deg_over_m = sum_sqrt_deg_over_m(inst);
        x = bf.argmax;
    } else {
        err << "unknown --alg '" << a.alg << "'\n";
        return kExitSpec;
    }
    if (a.json) {
        out << rep.to_json().dump(2) << "\n";
    } else {
        out << rep.alg << ": value " << rep.satisfied << "/" << rep.m << " = " << std::setprecision(6)
            << rep.value << ", advantage " << rep.advantage << " (mu " << rep.mu << ", D "
            << rep.max_deg << ")\n";
    }
    return kExitOk;
}

struct CheckArgs {
    std::string in;
    bool triangle_free = false, distribution = false, do_validate = false;
};

int run_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.in);
    int rc = kExitOk;
    if (a.do_validate) {
        ValidationReport vr = validate(inst);
        if (vr.ok()) {
            out << "valid (n=" << inst.n << ", m=" << inst.m() << ")\n";
        } else {
            out << vr.describe();
            rc = kExitPrecondition;
        }
    }
    if (a.triangle_free) {
        TriangleFreeReport tf = check_triangle_free(inst);
        out << tf.describe() << "\n";
        if (!tf.ok()) rc = kExitPrecondition;
    }
    if (a.distribution) {
        if (inst.n > 22) {
            err << "--distribution needs n <= 22\n";
            return kExitSpec;
        }
        auto hist = value_distribution(inst);
        out << "satisfied,assignments\n";
        for (size_t c = 0; c < hist.size(); ++c)
            if (hist[c]) out << c << "," << hist[c] << "\n";
    }
    return rc;
}

struct BenchArgs {
    std::string alg = "xor3";
    uint32_t n = 2000, k = 3;
    std::string d_list = "4,16,64";
    int seeds = 20;
    uint64_t seed = 1;
    int jobs = default_jobs();
    bool do_assert = false;
};

struct BenchRow {
    uint32_t d = 0;
    int seed_idx = 0;
    SolveReport rep;
};

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<uint32_t> ds;
    {
        std::istringstream ss(a.d_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) ds.push_back(static_cast<uint32_t>(std::stoul(tok)));
    }
    if (ds.empty() || a.seeds < 1) {
        err << "bench: need at least one D and one seed\n";
        return kExitSpec;
    }

    std::vector<BenchRow> rows;
    for (uint32_t d : ds)
        for (int s = 0; s < a.seeds; ++s) rows.push_back(BenchRow{d, s, {}});

    auto solve_row = [&](BenchRow& row) {
        uint64_t gen_seed = mix_seed(a.seed, (uint64_t{row.d} << 20) | uint64_t(row.seed_idx));
        uint64_t solve_seed = mix_seed(gen_seed, 0x534f4c56ULL);
        if (a.alg == "trifree") {
            Instance inst = triangle_free_random(a.n, a.k, row.d, gen_seed);
            row.rep = solve_triangle_free(inst, solve_seed).second;
        } else {
            Instance inst = random_kxor(a.n, a.k, row.d, gen_seed);
            if (a.alg == "xor3") {
                row.rep = solve_3xor(inst, solve_seed).second;
            } else if (a.alg == "xor3-derand") {
                row.rep = solve_3xor_derandomized(inst).second;
            } else {
                row.rep = solve_kxor(inst, solve_seed).second;
            }
        }
    };

    if (a.jobs <= 1) {
        for (auto& row : rows) solve_row(row);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < a.jobs; ++w)
            workers.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= rows.size()) return;
                    solve_row(rows[i]);
                }
            });
        for (auto& w : workers) w.join();
    }

    out << "alg,n,k,d,seed,m,max_degree,mu,value,advantage,inv_sqrt_d,sum_sqrt_deg_over_m,millis\n";
    for (const auto& row : rows) {
        const SolveReport& r = row.rep;
        out << a.alg << "," << a.n << "," << a.k << "," << row.d << "," << row.seed_idx << ","
            << r.m << "," << r.max_deg << "," << r.mu << "," << r.value << "," << r.advantage
            << "," << 1.0 / std::sqrt(double(row.d)) << "," << r.sum_sqrt_deg_over_m << ","
            << r.millis << "\n";
    }

    bool ok = true;
    std::vector<double> mean_adv(ds.size(), 0);
    for (size_t di = 0; di < ds.size(); ++di) {
        double acc = 0, yard = 0;
        for (const auto& row : rows)
            if (row.d == ds[di]) {
                acc += row.rep.advantage;
                yard += row.rep.sum_sqrt_deg_over_m;
            }
        mean_adv[di] = acc / a.seeds;
        yard /= a.seeds;
        double threshold = a.alg == "trifree" ? 0.02 * yard : 0.01 / std::sqrt(double(ds[di]));
        bool pass = mean_adv[di] >= threshold;
        ok = ok && pass;
        out << "summary," << a.alg << ",d=" << ds[di] << ",mean_advantage=" << mean_adv[di]
            << ",threshold=" << threshold << "," << (pass ? "pass" : "FAIL") << "\n";
    }
    if (a.alg != "trifree" && ds.size() >= 2) {
        size_t lo = 0, hi = 0;
        for (size_t i = 1; i < ds.size(); ++i) {
            if (ds[i] < ds[lo]) lo = i;
            if (ds[i] > ds[hi]) hi = i;
        }
        double ratio = mean_adv[lo] / mean_adv[hi];
        double expect = std::sqrt(double(ds[hi]) / double(ds[lo]));
        bool pass = ratio >= expect / 2 && ratio <= 2 * expect;
        ok = ok && pass;
        out << "summary," << a.alg << ",ratio_d" << ds[lo] << "_d" << ds[hi] << "=" << ratio
            << ",window=[" << expect / 2 << "," << 2 * expect << "]," << (pass ? "pass" : "FAIL")
            << "\n";
    }
    if (a.do_assert && !ok) return kExitAssert;
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bounded-degree CSP advantage toolkit"};
    app.require_subcommand(1);

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    gen->add_option("--kind", ga.kind,
                    "kxor | triangle-free | complete-cut | grid-2sat | nae-ae | random-sign")
        ->required();
    gen->add_option("--n", ga.n);
    gen->add_option("--k", ga.k);
    gen->add_option("--d", ga.d);
    gen->add_option("--seed", ga.seed);
    gen->add_option("--out", ga.out, "output path (stdout if omitted)");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "run a solver");
    solve->add_option("--alg", sa.alg, "xor3 | advrand | trifree | brute")->required();
    solve->add_option("--in", sa.in)->required();
    solve->add_option("--seed", sa.seed);
    solve->add_option("--trials", sa.trials);
    solve->add_option("--reps", sa.reps);
    solve->add_option("--t-scale", sa.t_scale);
    solve->add_flag("--derand", sa.derand, "deterministic xor3 variant");
    solve->add_flag("--json", sa.json);

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "property checks");
    check->add_option("--in", ca.in)->required();
    check->add_flag("--triangle-free", ca.triangle_free);
    check->add_flag("--distribution", ca.distribution);
    check->add_flag("--validate", ca.do_validate);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "advantage-scaling harness (CSV)");
    bench->add_option("--alg", ba.alg, "xor3 | xor3-derand | advrand | trifree");
    bench->add_option("--n", ba.n);
    bench->add_option("--k", ba.k);
    bench->add_option("--d", ba.d_list, "comma-separated degree bounds");
    bench->add_option("--seeds", ba.seeds);
    bench->add_option("--seed", ba.seed, "master seed");
    bench->add_option("--jobs", ba.jobs, "parallel workers (env CSPADV_JOBS)");
    bench->add_flag("--assert", ba.do_assert, "exit 4 if scaling thresholds fail");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << e.what() << "\n";
        return kExitSpec;
    }

    try {
        if (*gen) return run_gen(ga, out, err);
        if (*solve) return run_solve(sa, out, err);
        if (*check) return run_check(ca, out, err);
        if (*bench) return run_bench(ba, out, err);
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitSpec;
    }
    return kExitSpec;
}

}  // namespace cspadv
