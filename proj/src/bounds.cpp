#include "lassopath/bounds.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "lassopath/linalg.hpp"
#include "lassopath/rng.hpp"

namespace lassopath {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive and finite");
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Residual of y against the columns outside `removed` (sorted ascending).
Real residual_without(const ProblemInstance& inst, const std::vector<std::size_t>& removed) {
    std::vector<std::size_t> kept;
    std::size_t r = 0;
    for (std::size_t j = 0; j < inst.d(); ++j) {
        if (r < removed.size() && removed[r] == j) {
            ++r;
            continue;
        }
        kept.push_back(j);
    }
    return least_squares_residual<Real>(inst.x.select_cols(kept), inst.y);
}

}  // namespace

double theorem1_bound(double n, double d, double sigma, double delta) {
    require_positive(n, "n");
    require_positive(d, "d");
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    if (sigma > 1.0) throw DomainError("sigma must lie in (0, 1]");
    if (delta > 1.0) throw DomainError("delta must lie in (0, 1]");
    return std::pow(n, 1.1) * std::pow(d / (delta * sigma), 6.0);
}

double theorem2_bound(double s, double n, double d, double lipschitz_w, double lipschitz_u, double alpha,
                      double sigma, double delta, double gamma_s) {
    if (!(s >= 2.0)) throw DomainError("exponent s/(s-1) needs s >= 2");
    require_positive(n, "n");
    require_positive(d, "d");
    require_positive(lipschitz_w, "L_w");
    require_positive(lipschitz_u, "L_u");
    require_positive(alpha, "alpha");
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    require_positive(gamma_s, "gamma_s");
    const double inner = std::sqrt(s * n) * d * (lipschitz_w / (alpha * alpha) + lipschitz_u) /
                         (delta * delta * sigma * gamma_s);
    return std::pow(3.0, s) * std::pow(inner, s / (s - 1.0));
}

double gamma_s_reference(double n, double d, double sigma, double delta, double s) {
    require_positive(n, "n");
    require_positive(d, "d");
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    require_positive(s, "s");
    return sigma / (std::sqrt(d * n) * std::pow(d / delta, 2.0 / s));
}

GammaEstimate estimate_gamma_s(const ProblemInstance& inst, std::size_t s, std::size_t trials, std::uint64_t seed) {
    inst.validate();
    const std::size_t d = inst.d();
    if (s < 1 || s > d) throw DomainError("gamma_s needs 1 <= s <= d");
    GammaEstimate out;
    Real best = scalar_traits<Real>::infinity();

    if (binomial(d, s) <= 1e4) {
        out.exhaustive = true;
        std::vector<std::size_t> subset(s);
        std::iota(subset.begin(), subset.end(), std::size_t{0});
        while (true) {
            best = std::min(best, residual_without(inst, subset));
            ++out.subsets_checked;
            // Next combination in lexicographic order.
            std::size_t i = s;
            while (i > 0 && subset[i - 1] == d - s + (i - 1)) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::size_t k = i; k < s; ++k) subset[k] = subset[k - 1] + 1;
        }
    } else {
        if (trials == 0) throw DomainError("gamma_s sampling needs trials >= 1");
        const CounterRng rng(seed);
        std::vector<std::size_t> perm(d);
        for (std::size_t t = 0; t < trials; ++t) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            for (std::size_t k = 0; k < s; ++k) {
                const std::size_t pick = k + rng.below(d - k, Stream::SubsetSampling, static_cast<std::uint32_t>(t), k);
                std::swap(perm[k], perm[pick]);
            }
            std::vector<std::size_t> subset(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
            std::sort(subset.begin(), subset.end());
            best = std::min(best, residual_without(inst, subset));
            ++out.subsets_checked;
        }
    }
    out.gamma_s = to_double(best);
    return out;
}

BoundReport instance_bound_report(const ProblemInstance& inst, double delta, const std::vector<std::size_t>& s_list,
                                  const BoundOptions& opts) {
    inst.validate();
    BoundReport r;
    r.n = inst.n();
    r.d = inst.d();
    r.sigma = inst.meta.sigma;
    r.delta = delta;

    const RegularizationPath path = solve_path(inst, opts.path);
    r.measured_count = path.count();
    r.max_kkt_violation = path.diagnostics.max_kkt_violation;
    const PathSlopes slopes = path_slopes(inst, path);
    r.lipschitz_w = to_double(slopes.lipschitz_w);
    r.lipschitz_u = to_double(slopes.lipschitz_u);

    const auto sv = extremal_singular_values<Real>(inst.x);
    r.alpha = to_double(sv.alpha);
    r.beta = to_double(sv.beta);
    const double root_d = std::sqrt(static_cast<double>(r.d));
    // Both sides carry rounding; allow a relative 1e-9 slack.
    constexpr double slack = 1.0 + 1e-9;
    if (r.alpha > 0.0) {
        r.lw_limit = root_d / (r.alpha * r.alpha);
        r.lu_limit = r.beta * r.beta * root_d / (r.alpha * r.alpha);
        r.lw_ok = r.lipschitz_w <= r.lw_limit * slack;
        r.lu_ok = r.lipschitz_u <= r.lu_limit * slack;
    } else {
        r.lw_limit = r.lu_limit = std::numeric_limits<double>::infinity();
    }

    const bool sigma_in_domain = r.sigma > 0.0 && r.sigma <= 1.0;
    const double n = static_cast<double>(r.n);
    const double d = static_cast<double>(r.d);
    r.thm1_value = sigma_in_domain ? theorem1_bound(n, d, r.sigma, delta) : nan_value;
    r.thm1_ratio = static_cast<double>(r.measured_count) / r.thm1_value;
    r.alpha_ratio = r.sigma > 0.0 ? r.alpha / (delta * r.sigma / d) : nan_value;

    for (std::size_t s : s_list) {
        SubsetBound b;
        b.s = s;
        b.gamma = estimate_gamma_s(inst, s, opts.gamma_trials, mix_seed(opts.seed, s));
        b.gamma_ratio = r.sigma > 0.0 ? b.gamma.gamma_s / gamma_s_reference(n, d, r.sigma, delta, double(s)) : nan_value;
        b.thm2_value = nan_value;
        if (s >= 2 && sigma_in_domain && b.gamma.gamma_s > 0.0 && r.alpha > 0.0) {
            b.thm2_value = theorem2_bound(double(s), n, d, r.lipschitz_w, r.lipschitz_u, r.alpha, r.sigma, delta,
                                          b.gamma.gamma_s);
        }
        b.count_ratio = static_cast<double>(r.measured_count) / b.thm2_value;
        r.subsets.push_back(b);
    }
    return r;
}

}  // namespace lassopath
