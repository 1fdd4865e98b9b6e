// lassopath command line: path, table1, mnist, bounds, oracle-check.
// Exit status: 0 success, 1 failed check, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lassopath/bounds.hpp"
#include "lassopath/harness.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/oracle.hpp"
#include "lassopath/parallel.hpp"
#include "lassopath/records.hpp"
#include "lassopath/rng.hpp"

using namespace lassopath;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string precision = "extended";
    std::uint64_t seed = 0;
    std::size_t trials = 0;  // 0: subcommand default
    std::string out;
    std::string format = "csv";
    unsigned workers = 0;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_precision) {
    c.precision = default_precision;
    cmd->add_option("--precision", c.precision, "Arithmetic for the path solver")
        ->check(CLI::IsMember({"standard", "extended"}))
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "Base seed for all random draws")->capture_default_str();
    cmd->add_option("--trials", c.trials, "Trials per configuration");
    cmd->add_option("--out", c.out, "Directory for result files (default: $LASSOPATH_OUT; nothing is written when neither is set)");
    cmd->add_option("--format", c.format, "Format printed to standard output")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads (0: one per hardware thread)")->capture_default_str();
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("bad list entry: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

// Instance source shared by `path` and `bounds`.
struct InstanceArgs {
    std::string input;
    std::string generator = "adversarial";
    std::size_t d = 4;
    std::size_t n = 0;  // gaussian only; 0 means 2d
    double sigma = 0.0;
    std::string variance_mode = "per-entry";
    std::uint32_t trial = 0;
};

void add_instance_args(CLI::App* cmd, InstanceArgs& a) {
    cmd->add_option("--input", a.input, "Instance record (JSON) to load instead of generating")
        ->check(CLI::ExistingFile);
    cmd->add_option("--generator", a.generator, "Instance generator")
        ->check(CLI::IsMember({"adversarial", "gaussian"}))
        ->capture_default_str();
    cmd->add_option("--d", a.d, "Number of features")->capture_default_str();
    cmd->add_option("--n", a.n, "Number of samples for the gaussian generator (default 2d)");
    cmd->add_option("--sigma", a.sigma, "Gaussian smoothing level applied to X (0: none)")->capture_default_str();
    cmd->add_option("--variance-mode", a.variance_mode, "Smoothing variance convention")
        ->check(CLI::IsMember({"per-entry", "scaled"}))
        ->capture_default_str();
    cmd->add_option("--trial", a.trial, "Trial index for the smoothing draw")->capture_default_str();
}

ProblemInstance load_instance(const InstanceArgs& a, const Common& c) {
    ProblemInstance inst;
    if (!a.input.empty()) {
        inst = instance_from_json(read_json_file(a.input));
    } else if (a.generator == "adversarial") {
        if (a.d < 1 || a.d > 12) throw UsageError("--d must lie in 1..12 for the adversarial generator");
        inst = gen_adversarial(a.d, PrecisionMode::Extended);
    } else {
        const std::size_t n = a.n == 0 ? 2 * a.d : a.n;
        if (a.d < 1 || n < a.d) throw UsageError("gaussian generator needs 1 <= d <= n");
        inst = gen_gaussian(n, a.d, c.seed);
    }
    if (a.sigma < 0.0) throw UsageError("--sigma must be nonnegative");
    if (a.sigma > 0.0) {
        SmoothingSpec spec;
        spec.sigma = a.sigma;
        spec.variance_mode = parse_variance_mode(a.variance_mode);
        spec.seed = c.seed;
        spec.trial_index = a.trial;
        inst = smooth(inst, spec);
    }
    return inst;
}

// Files are written when --out is given or $LASSOPATH_OUT is set.
bool writes_files(const Common& c) {
    const char* env = std::getenv("LASSOPATH_OUT");
    return !c.out.empty() || (env && *env);
}

std::filesystem::path out_dir(const Common& c) {
    return c.out.empty() ? default_output_dir() : std::filesystem::path(c.out);
}

std::string signs_string(const std::vector<int>& signs) {
    std::string s;
    for (int v : signs) s += v > 0 ? '+' : v < 0 ? '-' : '0';
    return s;
}

// ---------------------------------------------------------------- path

int cmd_path(const Common& c, const InstanceArgs& a, double pivot_factor) {
    const ProblemInstance inst = load_instance(a, c);
    PathOptions opts;
    opts.precision = parse_precision(c.precision);
    opts.pivot_factor = pivot_factor;
    const RegularizationPath path = solve_path(inst, opts);

    if (c.format == "json") {
        std::cout << path_to_json(path).dump(2) << "\n";
    } else {
        std::cout << "segment,lambda_hi,lambda_lo,active,signs\n";
        for (std::size_t i = 0; i < path.segments.size(); ++i) {
            const auto& s = path.segments[i];
            std::cout << i << "," << quad_to_string(s.lambda_hi, 17) << "," << quad_to_string(s.lambda_lo, 17) << ","
                      << s.active.size() << "," << signs_string(s.signs) << "\n";
        }
    }
    std::cerr << "segments: " << path.count() << "  max KKT violation: " << path.diagnostics.max_kkt_violation
              << " (tol " << path.diagnostics.kkt_tol << ")\n";
    if (writes_files(c)) {
        write_json_file(out_dir(c) / "instance.json", instance_to_json(inst));
        write_json_file(out_dir(c) / "path.json", path_to_json(path));
    }
    return path.diagnostics.kkt_ok ? exit_ok : exit_failed;
}

// ---------------------------------------------------------------- table1

int cmd_table1(const Common& c, const std::string& dims, const std::string& sigmas) {
    Table1Options opts;
    opts.dims = parse_size_list(dims);
    try {
        opts.neg_log10_sigmas = parse_sigma_list(sigmas);
    } catch (const FormatError& e) {
        throw UsageError(e.what());
    }
    opts.trials = c.trials == 0 ? 100 : c.trials;
    opts.seed = c.seed;
    opts.precision = parse_precision(c.precision);
    opts.workers = c.workers;
    const Table1Result result = run_table1(opts);

    const std::string csv = table1_csv(result);
    const nlohmann::json json = table1_json(result);
    std::cout << (c.format == "json" ? json.dump(2) + "\n" : csv);
    if (writes_files(c)) {
        const auto dir = out_dir(c);
        write_text_file(dir / "table1.csv", csv);
        write_text_file(dir / "table1_cells.csv", table1_cells_csv(result));
        write_json_file(dir / "table1.json", json);
        write_text_file(dir / "plot_table1.py", table1_plot_script());
    }
    for (const auto& cell : result.cells) {
        if (cell.failed > 0) {
            std::cerr << "d=" << cell.d << " k=" << (cell.neg_log10_sigma ? std::to_string(*cell.neg_log10_sigma) : "inf")
                      << ": " << cell.failed << "/" << cell.trials << " trials failed (" << cell.error << ")\n";
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- mnist

std::string default_idx_path() {
    if (const char* env = std::getenv("LASSOPATH_IDX"); env && *env) return env;
    return "data/mnist5k-images-idx3-ubyte";
}

int cmd_mnist(const Common& c, const std::string& idx, std::size_t n, const std::string& patches) {
    MnistOptions opts;
    opts.n = n;
    opts.patch_sizes = parse_size_list(patches);
    opts.trials = c.trials == 0 ? 20 : c.trials;
    opts.seed = c.seed;
    opts.precision = parse_precision(c.precision);
    opts.workers = c.workers;
    for (std::size_t p : opts.patch_sizes) {
        if (p < 3 || p % 2 == 0) throw UsageError("patch sizes must be odd and at least 3");
        if (p * p - 1 > n) throw UsageError("patch size " + std::to_string(p) + " has more features than --n");
    }
    const ImageDataset images = load_idx_images(idx);
    if (n > images.count) throw UsageError("--n exceeds the number of images in " + idx);
    const MnistResult result = run_mnist(images, opts);

    const std::string csv = mnist_csv(result);
    const nlohmann::json json = mnist_json(result);
    std::cout << (c.format == "json" ? json.dump(2) + "\n" : csv);
    std::cerr << "log-log slope vs feature dimension: " << result.slope_vs_dim
              << "  vs patch size: " << result.slope_vs_patch << "\n";
    if (writes_files(c)) {
        const auto dir = out_dir(c);
        write_text_file(dir / "mnist.csv", csv);
        write_json_file(dir / "mnist.json", json);
        write_text_file(dir / "plot_mnist.py", mnist_plot_script());
    }
    return exit_ok;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const Common& c, const InstanceArgs& a, double delta, const std::string& s_list) {
    const ProblemInstance inst = load_instance(a, c);
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
    std::vector<std::size_t> s = parse_size_list(s_list);
    for (std::size_t v : s) {
        if (v < 1 || v > inst.d()) throw UsageError("--s entries must lie in 1..d");
    }
    BoundOptions opts;
    opts.path.precision = parse_precision(c.precision);
    opts.seed = c.seed;
    if (c.trials != 0) opts.gamma_trials = c.trials;
    const BoundReport report = instance_bound_report(inst, delta, s, opts);
    const nlohmann::json json = bound_report_to_json(report);

    if (c.format == "json") {
        std::cout << json.dump(2) << "\n";
    } else {
        std::cout << "quantity,value\n";
        for (const char* key : {"n", "d", "sigma", "delta", "alpha", "beta", "lipschitz_w", "lw_limit", "lipschitz_u",
                                "lu_limit", "measured_count", "thm1_value", "thm1_ratio", "alpha_ratio"}) {
            std::cout << key << "," << json[key].dump() << "\n";
        }
        for (const auto& sub : json["subsets"]) {
            const std::string tag = "s=" + sub["s"].dump();
            std::cout << "gamma_s[" << tag << "]," << sub["gamma_s"].dump() << "\n";
            std::cout << "gamma_ratio[" << tag << "]," << sub["gamma_ratio"].dump() << "\n";
            std::cout << "thm2_value[" << tag << "]," << sub["thm2_value"].dump() << "\n";
        }
    }
    if (writes_files(c)) write_json_file(out_dir(c) / "bounds.json", json);
    if (!report.deterministic_bounds_hold()) {
        std::cerr << "deterministic Lipschitz bound violated\n";
        return exit_failed;
    }
    return exit_ok;
}

// ---------------------------------------------------------------- oracle-check

int cmd_oracle_check(const Common& c, std::size_t d, std::size_t n) {
    if (d < 1 || d > 10) throw UsageError("--d must lie in 1..10 for the enumeration oracle");
    if (n == 0) n = d + 3;
    if (n < d) throw UsageError("--n must be at least --d");
    const std::size_t trials = c.trials == 0 ? 100 : c.trials;
    const PrecisionMode precision = parse_precision(c.precision);

    struct Outcome {
        std::size_t homotopy = 0;
        std::size_t oracle = 0;
        double rel_diff = 0.0;
        bool ok = false;
        std::string error;
    };
    std::vector<Outcome> outcomes(trials);
    parallel_for(trials, c.workers, [&](std::size_t t) {
        Outcome& o = outcomes[t];
        try {
            const ProblemInstance inst = gen_gaussian(n, d, mix_seed(c.seed, t));
            PathOptions opts;
            opts.precision = precision;
            const RegularizationPath a = solve_path(inst, opts);
            OracleOptions oopts;
            oopts.workers = 1;
            const RegularizationPath b = enumerate_sign_patterns(inst, oopts);
            const PathComparison cmp = compare_paths(a, b);
            o.homotopy = cmp.count_a;
            o.oracle = cmp.count_b;
            o.rel_diff = cmp.max_breakpoint_rel_diff;
            o.ok = cmp.matches(1e-9) && a.diagnostics.kkt_ok;
            if (!a.diagnostics.kkt_ok) o.error = "KKT check failed";
        } catch (const LassoError& e) {
            o.error = e.what();
        }
    });

    std::size_t passed = 0;
    if (c.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& o = outcomes[t];
            rows.push_back({{"trial", t},
                            {"homotopy_segments", o.homotopy},
                            {"oracle_segments", o.oracle},
                            {"max_breakpoint_rel_diff", o.rel_diff},
                            {"ok", o.ok},
                            {"error", o.error}});
            passed += o.ok;
        }
        std::cout << nlohmann::json{{"d", d}, {"n", n}, {"seed", c.seed}, {"trials", rows}}.dump(2) << "\n";
    } else {
        std::cout << "trial,homotopy_segments,oracle_segments,max_breakpoint_rel_diff,ok\n";
        char buf[160];
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& o = outcomes[t];
            std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.3e,%d\n", t, o.homotopy, o.oracle, o.rel_diff, o.ok ? 1 : 0);
            std::cout << buf;
            passed += o.ok;
        }
    }
    for (std::size_t t = 0; t < trials; ++t) {
        if (!outcomes[t].error.empty()) std::cerr << "trial " << t << ": " << outcomes[t].error << "\n";
    }
    std::cerr << passed << "/" << trials << " paths agree\n";
    return passed == trials ? exit_ok : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Lasso regularization paths: segment enumeration, worst-case and smoothed experiments"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common path_c, table1_c, mnist_c, bounds_c, oracle_c;
    InstanceArgs inst_args;

    auto* path = app.add_subcommand("path", "Trace the path of one instance and print its segments");
    add_common(path, path_c, "extended");
    add_instance_args(path, inst_args);
    double pivot_factor = 1e6;
    path->add_option("--pivot-factor", pivot_factor, "Active-set pivot tolerance in units of eps * max diag(X^T X)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* table1 = app.add_subcommand("table1", "Segment counts of the smoothed worst-case construction");
    add_common(table1, table1_c, "extended");
    std::string dims = "4,5,6,7,8,9,10";
    std::string sigmas = "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,inf";
    table1->add_option("--dims", dims, "Comma-separated dimensions (1..10)")->capture_default_str();
    table1->add_option("--sigmas", sigmas, "Comma-separated -log10(sigma) values; inf = unsmoothed")
        ->capture_default_str();

    auto* mnist = app.add_subcommand("mnist", "Centre-pixel regression on image patches");
    add_common(mnist, mnist_c, "standard");
    std::string idx = default_idx_path();
    std::size_t mnist_n = 1000;
    std::string patches = "3,5,7,9";
    mnist->add_option("--idx", idx, "IDX3 image file (default: $LASSOPATH_IDX or the bundled subset)")
        ->check(CLI::ExistingFile)
        ->capture_default_str();
    mnist->add_option("--n", mnist_n, "Images (samples) per trial")->capture_default_str();
    mnist->add_option("--patches", patches, "Comma-separated odd patch sizes")->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Measure the quantities entering the complexity bounds");
    add_common(bounds, bounds_c, "extended");
    add_instance_args(bounds, inst_args);
    double delta = 0.1;
    std::string s_list = "2";
    bounds->add_option("--delta", delta, "Failure probability used in the formulas")->capture_default_str();
    bounds->add_option("--s", s_list, "Comma-separated subset sizes for gamma_s")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle-check", "Compare homotopy paths with brute-force sign enumeration");
    add_common(oracle, oracle_c, "extended");
    std::size_t oracle_d = 4;
    std::size_t oracle_n = 0;
    oracle->add_option("--d", oracle_d, "Number of features")->capture_default_str();
    oracle->add_option("--n", oracle_n, "Number of samples (default d + 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*path) return cmd_path(path_c, inst_args, pivot_factor);
        if (*table1) return cmd_table1(table1_c, dims, sigmas);
        if (*mnist) return cmd_mnist(mnist_c, idx, mnist_n, patches);
        if (*bounds) return cmd_bounds(bounds_c, inst_args, delta, s_list);
        if (*oracle) return cmd_oracle_check(oracle_c, oracle_d, oracle_n);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failed;
    }
    return exit_usage;
}
