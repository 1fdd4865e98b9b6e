#include <doctest.h>

#include <cmath>

#include "lassopath/errors.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/oracle.hpp"
#include "lassopath/rng.hpp"
#include "oracles.hpp"

using namespace lassopath;

TEST_CASE("enumeration on the scalar problem") {
    const ProblemInstance inst = ProblemInstance::from_double(Matrix<double>::identity(1), std::vector<double>{1.0});
    const RegularizationPath path = enumerate_sign_patterns(inst);
    REQUIRE(path.count() == 2);
    CHECK(isinf(path.segments[0].lambda_hi));
    CHECK(path.segments[0].lambda_lo == Real(1));
    CHECK(path.segments[0].signs == std::vector<int>{0});
    CHECK(path.segments[1].lambda_hi == Real(1));
    CHECK(path.segments[1].lambda_lo == Real(0));
    CHECK(path.segments[1].signs == std::vector<int>{1});
}

TEST_CASE("enumeration rejects dimensions beyond its budget") {
    const ProblemInstance inst = gen_gaussian(16, 15, 1);
    CHECK_THROWS_AS(enumerate_sign_patterns(inst), DomainError);
}

TEST_CASE("enumeration and homotopy agree in both directions on random d=4, n=6") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const ProblemInstance inst = gen_gaussian(6, 4, seed);
        const RegularizationPath a = solve_path(inst);
        const RegularizationPath b = enumerate_sign_patterns(inst);
        const PathComparison ab = compare_paths(a, b);
        const PathComparison ba = compare_paths(b, a);
        CHECK(ab.matches(1e-9));
        CHECK(ba.matches(1e-9));
        CHECK(ab.max_breakpoint_rel_diff == ba.max_breakpoint_rel_diff);
    }
}

TEST_CASE("valid sign patterns number exactly the segments") {
    const ProblemInstance inst = gen_gaussian(8, 5, 11);
    const RegularizationPath b = enumerate_sign_patterns(inst);
    CHECK(b.count() == solve_path(inst).count());
}

TEST_CASE("compare_paths detects disagreement") {
    const ProblemInstance inst = gen_gaussian(8, 5, 12);
    const RegularizationPath a = solve_path(inst);
    RegularizationPath b = a;
    b.segments[1].lambda_lo *= Real(1 + 1e-6);
    b.segments[2].lambda_hi = b.segments[1].lambda_lo;
    CHECK_FALSE(compare_paths(a, b).matches(1e-9));
    CHECK(compare_paths(a, b).same_signs);
    RegularizationPath c = a;
    c.segments.pop_back();
    CHECK_FALSE(compare_paths(a, c).matches(1e-9));
}

TEST_CASE("grid_solve on an orthonormal design is soft thresholding") {
    const std::vector<double> y{0.7, -0.4, 0.2};
    const ProblemInstance inst = ProblemInstance::from_double(Matrix<double>::identity(3), y);
    for (double lambda : {0.05, 0.3, 0.5}) {
        const auto w = grid_solve(inst, Real(lambda));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::fabs(to_double(w[i]) - oracle::soft_threshold(y[i], lambda)) <= 1e-12);
    }
}

TEST_CASE("grid_solve returns zero above lambda_max") {
    const ProblemInstance inst = gen_gaussian(10, 4, 3);
    const Real lmax = lambda_max(inst);
    for (Real lambda : {lmax, 2 * lmax}) {
        for (const auto& v : grid_solve(inst, lambda)) CHECK(v == Real(0));
    }
}

TEST_CASE("grid_solve agrees with eval_path at random lambdas") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ProblemInstance inst = gen_gaussian(12, 6, seed);
        const RegularizationPath path = solve_path(inst);
        const double lmax = to_double(path.lambda_max);
        const CounterRng rng(seed);
        for (std::uint64_t k = 0; k < 20; ++k) {
            const Real lambda = Real(lmax * rng.uniform(Stream::SubsetSampling, 0, k));
            const auto w_cd = grid_solve(inst, lambda);
            const auto w_path = eval_path(path, lambda);
            for (std::size_t i = 0; i < 6; ++i) REQUIRE(std::fabs(to_double(w_cd[i] - w_path[i])) <= 1e-7);
        }
    }
}

TEST_CASE("grid_solve signals non-convergence") {
    const ProblemInstance inst = gen_gaussian(12, 6, 2);
    CHECK_THROWS_AS(grid_solve(inst, lambda_max(inst) / 100, 1e-12, 2), NoConvergence);
}
