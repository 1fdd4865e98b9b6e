#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "lassopath/errors.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/linalg.hpp"
#include "lassopath/oracle.hpp"
#include "oracles.hpp"

using namespace lassopath;

namespace {

ProblemInstance diag_instance(std::vector<double> diag, std::vector<double> y) {
    Matrix<double> x(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) x(i, i) = diag[i];
    return ProblemInstance::from_double(x, y);
}

double l1(const Vector<Real>& w) {
    double s = 0.0;
    for (const auto& v : w) s += std::fabs(to_double(v));
    return s;
}

// Every checked property at one λ of a computed path.
void check_point(const ProblemInstance& inst, const RegularizationPath& path, Real lambda, double tol) {
    const Vector<Real> w = eval_path(path, lambda);
    const KktReport rep = kkt_check(inst, lambda, w, Real(tol));
    REQUIRE(rep.pass);
    // ‖u‖∞ ≤ λ (up to the tolerance) and the residual never exceeds ‖y‖.
    REQUIRE(to_double(norm_inf<Real>(rep.u)) <= to_double(lambda) + tol);
    const Vector<Real> xw = multiply<Real>(inst.x, w);
    Vector<Real> r(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) r[i] = xw[i] - inst.y[i];
    REQUIRE(to_double(norm2<Real>(r)) <= to_double(norm2<Real>(inst.y)) * (1 + 1e-12));
}

void check_structure(const RegularizationPath& path) {
    REQUIRE(!path.segments.empty());
    CHECK(isinf(path.segments.front().lambda_hi));
    CHECK(std::all_of(path.segments.front().signs.begin(), path.segments.front().signs.end(),
                      [](int s) { return s == 0; }));
    CHECK(path.segments.front().lambda_lo == path.lambda_max);
    CHECK(path.count() == path.breakpoints().size() + 1);
    std::set<std::vector<int>> seen;
    for (std::size_t k = 0; k < path.segments.size(); ++k) {
        const auto& s = path.segments[k];
        REQUIRE(s.lambda_hi > s.lambda_lo);
        if (k > 0) REQUIRE(s.lambda_hi == path.segments[k - 1].lambda_lo);
        REQUIRE(seen.insert(s.signs).second);
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < s.signs.size(); ++i)
            if (s.signs[i] != 0) active.push_back(i);
        REQUIRE(active == s.active);
        if (k > 0 && path.diagnostics.tie_events == 0) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < s.signs.size(); ++i) changed += s.signs[i] != path.segments[k - 1].signs[i];
            REQUIRE(changed == 1);
        }
    }
}

}  // namespace

TEST_CASE("lambda_max is the sup-norm of X^T y") {
    CHECK(lambda_max(diag_instance({1, 1}, {1, 0.5})) == Real(1));
    CHECK(lambda_max(diag_instance({1, 2}, {1, 1})) == Real(2));
}

TEST_CASE("orthonormal design reproduces soft thresholding") {
    const ProblemInstance inst = diag_instance({1, 1, 1}, {0.9, 0.5, 0.1});
    const RegularizationPath path = solve_path(inst);
    REQUIRE(path.count() == 4);
    const auto bps = path.breakpoints();
    REQUIRE(bps.size() == 3);
    CHECK(to_double(bps[0]) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(to_double(bps[1]) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(to_double(bps[2]) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(path.segments.back().lambda_lo == Real(0));
    check_structure(path);
    for (double lambda : {0.95, 0.7, 0.3, 0.05, 1e-6}) {
        const auto w = eval_path(path, Real(lambda));
        for (std::size_t i = 0; i < 3; ++i) {
            const double ref = oracle::soft_threshold(to_double(inst.y[i]), lambda);
            CHECK(to_double(w[i]) == doctest::Approx(ref).epsilon(1e-15));
        }
    }
}

TEST_CASE("eval_path examples") {
    const ProblemInstance inst = diag_instance({1, 1}, {1, 0.5});
    const RegularizationPath path = solve_path(inst);
    const auto w = eval_path(path, Real(0.25));
    CHECK(to_double(w[0]) == doctest::Approx(0.75));
    CHECK(to_double(w[1]) == doctest::Approx(0.25));
    for (const auto& v : eval_path(path, 2 * path.lambda_max)) CHECK(v == Real(0));
    CHECK_THROWS_AS(eval_path(path, Real(0)), OutOfRange);
    CHECK_THROWS_AS(eval_path(path, Real(-1)), OutOfRange);
}

TEST_CASE("truncated path refuses lambdas below its range") {
    const ProblemInstance inst = diag_instance({1, 1, 1}, {0.9, 0.5, 0.1});
    PathOptions opts;
    opts.lambda_min = Real(0.3);
    const RegularizationPath path = solve_path(inst, opts);
    CHECK(path.count() == 3);
    CHECK(path.segments.back().lambda_lo == Real(0.3));
    CHECK_NOTHROW(eval_path(path, Real(0.31)));
    CHECK_THROWS_AS(eval_path(path, Real(0.2)), OutOfRange);
}

TEST_CASE("segment budget exceeded carries the partial path") {
    const ProblemInstance inst = diag_instance({1, 1, 1}, {0.9, 0.5, 0.1});
    PathOptions opts;
    opts.max_segments = 2;
    try {
        (void)solve_path(inst, opts);
        FAIL("expected SegmentBudgetExceeded");
    } catch (const SegmentBudgetExceeded& e) {
        CHECK(e.partial().count() == 2);
    }
}

TEST_CASE("kkt_check examples") {
    const ProblemInstance inst = diag_instance({1, 2}, {1, 1});
    const Real lmax = lambda_max(inst);
    const Vector<Real> zero(2, Real(0));
    const KktReport at_max = kkt_check(inst, lmax, zero, Real(1e-12));
    CHECK(at_max.pass);
    CHECK(at_max.max_violation == Real(0));
    const KktReport half = kkt_check(inst, lmax / 2, zero, Real(1e-12));
    CHECK_FALSE(half.pass);
    CHECK(to_double(half.max_violation) == doctest::Approx(to_double(lmax / 2)));
    CHECK_THROWS_AS(kkt_check(inst, Real(0), zero, Real(1e-12)), DomainError);
}

TEST_CASE("random paths satisfy the optimality conditions and invariants") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const std::size_t d = 2 + seed % 7;
        const ProblemInstance inst = gen_gaussian(d + 1 + seed % 5, d, seed);
        for (PrecisionMode mode : {PrecisionMode::Extended, PrecisionMode::Standard}) {
            PathOptions opts;
            opts.precision = mode;
            const RegularizationPath path = solve_path(inst, opts);
            REQUIRE(path.diagnostics.kkt_ok);
            REQUIRE(path.diagnostics.max_kkt_violation <= default_kkt_tol(mode));
            check_structure(path);
            double prev_l1 = -1.0;
            for (std::size_t k = path.segments.size(); k-- > 0;) {
                const Real lambda = path.segments[k].probe_lambda();
                check_point(inst, path, lambda, 1e-8);
                // ‖w‖₁ nonincreasing in λ: walking segments from small λ to large.
                const double cur = l1(eval_path(path, lambda));
                if (prev_l1 >= 0.0) REQUIRE(cur <= prev_l1 * (1 + 1e-12) + 1e-15);
                prev_l1 = cur;
            }
        }
    }
}

TEST_CASE("final segment ends at the least squares solution") {
    const ProblemInstance inst = gen_gaussian(9, 4, 3);
    const RegularizationPath path = solve_path(inst);
    REQUIRE(path.segments.back().active.size() == 4);
    CHECK(path.segments.back().lambda_lo == Real(0));
    const Vector<Real> w0 = path.segments.back().evaluate(Real(0), 4);
    const Matrix<double> xd = inst.x.cast<double>();
    Vector<quad> xty(4, 0);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 9; ++i) xty[j] += inst.x(i, j) * inst.y[i];
    const auto ols = oracle::mat_vec(oracle::inverse(oracle::gram(xd)), xty);
    for (std::size_t j = 0; j < 4; ++j) CHECK(to_double(w0[j]) == doctest::Approx(to_double(ols[j])).epsilon(1e-12));
}

TEST_CASE("segment slopes equal -(X_A^T X_A)^{-1} s_A and match finite differences") {
    const ProblemInstance inst = gen_gaussian(12, 6, 21);
    const RegularizationPath path = solve_path(inst);
    const PathSlopes slopes = path_slopes(inst, path);
    REQUIRE(slopes.dw.size() == path.count());
    const Matrix<double> xd = inst.x.cast<double>();
    for (std::size_t k = 1; k < path.segments.size(); ++k) {
        const auto& s = path.segments[k];
        // Closed form on the active set.
        const Matrix<double> xa = xd.select_cols(s.active);
        std::vector<quad> sa;
        for (std::size_t i : s.active) sa.push_back(-s.signs[i]);
        const auto b = oracle::mat_vec(oracle::inverse(oracle::gram(xa)), sa);
        for (std::size_t a = 0; a < s.active.size(); ++a) {
            CHECK(to_double(s.slope[a]) == doctest::Approx(static_cast<double>(b[a])).epsilon(1e-10));
        }
        // Central finite difference of eval_path inside the segment.
        const Real mid = s.probe_lambda();
        const Real h = (s.lambda_hi - s.lambda_lo) * Real(1e-3);
        const auto wp = eval_path(path, mid + h);
        const auto wm = eval_path(path, mid - h);
        for (std::size_t i = 0; i < inst.d(); ++i) {
            const double fd = to_double((wp[i] - wm[i]) / (2 * h));
            CHECK(std::fabs(fd - to_double(slopes.dw[k][i])) <= 1e-6 * std::max(1.0, std::fabs(fd)));
        }
    }
    double lw = 0.0, lu = 0.0;
    for (std::size_t k = 0; k < path.count(); ++k) {
        for (const auto& v : slopes.dw[k]) lw = std::max(lw, std::fabs(to_double(v)));
        for (const auto& v : slopes.du[k]) lu = std::max(lu, std::fabs(to_double(v)));
    }
    CHECK(lw == doctest::Approx(to_double(slopes.lipschitz_w)));
    CHECK(lu == doctest::Approx(to_double(slopes.lipschitz_u)));
}

TEST_CASE("identity design has unit Lipschitz constant") {
    const ProblemInstance inst = diag_instance({1, 1, 1, 1}, {0.8, -0.4, 0.3, 0.2});
    const PathSlopes slopes = path_slopes(inst, solve_path(inst));
    CHECK(to_double(slopes.lipschitz_w) == doctest::Approx(1.0));
    CHECK(to_double(slopes.lipschitz_u) == doctest::Approx(1.0));
}

TEST_CASE("deterministic Lipschitz bounds hold on random designs") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const ProblemInstance inst = gen_gaussian(20, 8, seed);
        const PathSlopes slopes = path_slopes(inst, solve_path(inst));
        const auto sv = extremal_singular_values<double>(inst.x.cast<double>());
        const double root_d = std::sqrt(8.0);
        CHECK(to_double(slopes.lipschitz_w) <= root_d / (sv.alpha * sv.alpha) * (1 + 1e-9));
        CHECK(to_double(slopes.lipschitz_u) <= sv.beta * sv.beta * root_d / (sv.alpha * sv.alpha) * (1 + 1e-9));
    }
}

TEST_CASE("exactly tied entries are resolved together") {
    // Two identical correlations enter at the same λ.
    const ProblemInstance inst = diag_instance({1, 1, 1}, {0.6, 0.6, 0.2});
    const RegularizationPath path = solve_path(inst);
    CHECK(path.count() == 3);
    CHECK(path.diagnostics.tie_events >= 1);
    CHECK(path.diagnostics.kkt_ok);
    CHECK(path.segments[1].signs == std::vector<int>{1, 1, 0});
}

TEST_CASE("numerically dependent column raises SingularActiveSet") {
    // Full rank in exact arithmetic, so every column enters before λ reaches
    // 0, but the third pivot (~1e-18) is far below the Standard tolerance.
    Matrix<double> x(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        x(i, 0) = double(i + 1);
        x(i, 1) = double(2 - i) * double(i + 2);
        x(i, 2) = x(i, 0) + x(i, 1) + (i == 1 ? 1e-9 : 0.0);
    }
    const ProblemInstance inst = ProblemInstance::from_double(x, std::vector<double>{1.0, 0.3, -0.2});
    PathOptions opts;
    opts.precision = PrecisionMode::Standard;
    CHECK_THROWS_AS(solve_path(inst, opts), SingularActiveSet);
}

TEST_CASE("the adversarial path agrees with the enumeration oracle at d=4") {
    const ProblemInstance inst = gen_adversarial(4);
    const RegularizationPath path = solve_path(inst);
    CHECK(path.count() == 41);
    const RegularizationPath ref = enumerate_sign_patterns(inst);
    CHECK(ref.count() == 41);
    CHECK(std::fabs(to_double(path.lambda_max / ref.segments.front().lambda_lo) - 1.0) <= 1e-12);
    CHECK(compare_paths(path, ref).matches(1e-9));
}
