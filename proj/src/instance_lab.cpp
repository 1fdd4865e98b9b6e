#include "lassopath/instance_lab.hpp"

#include "lassopath/errors.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/rng.hpp"

namespace lassopath {

std::uint64_t adversarial_segment_count(std::size_t d) {
    std::uint64_t p = 1;
    for (std::size_t k = 0; k < d; ++k) p *= 3;
    return (p + 1) / 2;
}

ProblemInstance add_dimension(const ProblemInstance& base, Real y_next, Real alpha) {
    const std::size_t n = base.n();
    const std::size_t p = base.d();
    ProblemInstance out;
    out.x = Matrix<Real>(n + 1, p + 1);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) out.x(i, j) = base.x(i, j);
    }
    for (std::size_t i = 0; i < n; ++i) out.x(i, p) = Real(2) * alpha * base.y[i];
    out.x(n, p) = alpha * y_next;
    out.y = base.y;
    out.y.push_back(y_next);
    out.meta = base.meta;
    return out;
}

ProblemInstance gen_adversarial(std::size_t d, PrecisionMode precision, const AdversarialOptions& opts) {
    if (d < 1 || d > 12) throw DomainError("adversarial construction supports 1 <= d <= 12");
    if (!(opts.alpha_fraction > 0.0 && opts.alpha_fraction < 1.0)) {
        throw DomainError("alpha_fraction must lie in (0, 1)");
    }
    ProblemInstance inst;
    inst.x = Matrix<Real>(1, 1, Real(1));
    inst.y = {Real(1)};
    for (std::size_t level = 1; level < d; ++level) {
        const Real y_next = 1;
        // The new coordinate must enter only after the last breakpoint of the
        // current path.
        PathOptions level_opts;
        level_opts.check_kkt = false;
        level_opts.pivot_factor = opts.pivot_factor;
        const Real last_kink = solve_path(inst, level_opts).breakpoints().back();
        const Real bound = last_kink / (Real(2) * dot<Real>(inst.y, inst.y) + y_next * y_next);
        inst = add_dimension(inst, y_next, Real(opts.alpha_fraction) * bound);
    }
    Real largest = 0;
    for (const Real& v : inst.x.data()) largest = std::max(largest, abs(v));
    for (Real& v : inst.x.data()) v /= largest;
    inst.meta = InstanceMeta{};
    inst.meta.generator = "adversarial";

    if (opts.verify) {
        PathOptions path_opts;
        path_opts.precision = precision;
        path_opts.check_kkt = false;
        path_opts.pivot_factor = opts.pivot_factor;
        const auto expected = adversarial_segment_count(d);
        path_opts.max_segments = static_cast<std::size_t>(expected) + 1;
        std::size_t count = 0;
        try {
            count = solve_path(inst, path_opts).count();
        } catch (const LassoError& e) {
            throw ConstructionUnverified("adversarial d=" + std::to_string(d) + ": " + e.what());
        }
        if (count != expected) {
            throw ConstructionUnverified("adversarial d=" + std::to_string(d) + " traced " +
                                         std::to_string(count) + " segments, expected " +
                                         std::to_string(expected));
        }
    }
    return inst;
}

ProblemInstance smooth(const ProblemInstance& inst, const SmoothingSpec& spec) {
    if (spec.sigma < 0.0) throw DomainError("sigma must be nonnegative");
    ProblemInstance out = inst;
    out.meta.sigma = spec.sigma;
    out.meta.variance_mode = spec.variance_mode;
    out.meta.seed = spec.seed;
    out.meta.trial_index = spec.trial_index;
    if (spec.sigma == 0.0) return out;

    const std::size_t n = inst.n();
    const Real scale = spec.variance_mode == VarianceMode::Scaled
                           ? Real(spec.sigma) / sqrt(Real(static_cast<double>(n)))
                           : Real(spec.sigma);
    const CounterRng rng(spec.seed);
    for (std::size_t j = 0; j < inst.d(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double z = rng.normal(Stream::Smoothing, spec.trial_index, j * n + i);
            out.x(i, j) += scale * Real(z);
        }
    }
    return out;
}

ProblemInstance gen_gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d < 1 || n < d) throw DomainError("gen_gaussian needs n >= d >= 1");
    const CounterRng rng(seed);
    ProblemInstance inst;
    inst.x = Matrix<Real>(n, d);
    const Real scale = Real(1) / sqrt(Real(static_cast<double>(n)));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            inst.x(i, j) = scale * Real(rng.normal(Stream::DesignEntries, 0, j * n + i));
        }
    }
    inst.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) inst.y[i] = Real(rng.normal(Stream::TargetEntries, 0, i));
    const Real norm = norm2<Real>(inst.y);
    for (Real& v : inst.y) v /= norm;
    inst.meta.generator = "gaussian";
    inst.meta.seed = seed;
    inst.meta.normalized = true;
    return inst;
}

ProblemInstance normalize(const ProblemInstance& inst) {
    const Real norm = norm2<Real>(inst.y);
    if (norm == Real(0)) throw ZeroTarget("cannot normalize a zero target");
    ProblemInstance out = inst;
    out.meta.normalized = true;
    if (norm == Real(1)) return out;
    for (Real& v : out.y) v /= norm;
    out.meta.scale = to_double(Real(inst.meta.scale) / norm);
    return out;
}

}  // namespace lassopath
