#include "lassopath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "lassopath/parallel.hpp"

namespace lassopath {

namespace {

// Solves M [x1 x2] = [r1 r2] by Gaussian elimination with partial pivoting.
// Returns false for an exactly singular M.
template <class T>
bool eliminate(Matrix<T> m, Vector<T>& r1, Vector<T>& r2) {
    const std::size_t k = m.rows();
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < k; ++i) {
            if (abs(m(i, c)) > abs(m(piv, c))) piv = i;
        }
        if (m(piv, c) == T(0)) return false;
        if (piv != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(m(c, j), m(piv, j));
            std::swap(r1[c], r1[piv]);
            std::swap(r2[c], r2[piv]);
        }
        for (std::size_t i = c + 1; i < k; ++i) {
            const T f = m(i, c) / m(c, c);
            if (f == T(0)) continue;
            for (std::size_t j = c; j < k; ++j) m(i, j) -= f * m(c, j);
            r1[i] -= f * r1[c];
            r2[i] -= f * r2[c];
        }
    }
    for (std::size_t c = k; c-- > 0;) {
        for (std::size_t j = c + 1; j < k; ++j) {
            r1[c] -= m(c, j) * r1[j];
            r2[c] -= m(c, j) * r2[j];
        }
        r1[c] /= m(c, c);
        r2[c] /= m(c, c);
    }
    return true;
}

template <class T>
struct Candidate {
    T lo;
    T hi;
    PathSegment segment;
};

template <class T>
class PatternEnumerator {
public:
    explicit PatternEnumerator(const ProblemInstance& inst) : d_(inst.d()) {
        const Matrix<T> x = inst.x.cast<T>();
        const Vector<T> y = cast_vector<T>(std::span<const Real>(inst.y));
        g_ = Matrix<T>(d_, d_);
        c_.resize(d_);
        for (std::size_t i = 0; i < d_; ++i) {
            c_[i] = dot<T>(x.col(i), y);
            for (std::size_t j = 0; j < d_; ++j) g_(i, j) = dot<T>(x.col(i), x.col(j));
        }
    }

    std::uint64_t pattern_count() const {
        std::uint64_t p = 1;
        for (std::size_t k = 0; k < d_; ++k) p *= 3;
        return p;
    }

    T lambda_max() const { return norm_inf<T>(c_); }

    // Pattern `code` in base 3, digit 0 → 0, 1 → +1, 2 → −1.
    std::optional<Candidate<T>> interval(std::uint64_t code) const {
        std::vector<int> signs(d_);
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < d_; ++i, code /= 3) {
            const int digit = static_cast<int>(code % 3);
            signs[i] = digit == 0 ? 0 : (digit == 1 ? 1 : -1);
            if (signs[i] != 0) active.push_back(i);
        }
        const std::size_t m = active.size();
        Matrix<T> g_aa(m, m);
        Vector<T> a(m), b(m);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t s = 0; s < m; ++s) g_aa(r, s) = g_(active[r], active[s]);
            a[r] = c_[active[r]];
            b[r] = -T(signs[active[r]]);
        }
        if (m > 0 && !eliminate(g_aa, a, b)) return std::nullopt;

        T lo(0);
        T hi = scalar_traits<T>::infinity();
        // Requires coef·λ ≥ rhs (as an inequality on λ > 0).
        auto require = [&](T coef, T rhs) -> bool {
            if (coef > T(0)) {
                lo = std::max(lo, rhs / coef);
            } else if (coef < T(0)) {
                hi = std::min(hi, rhs / coef);
            } else if (rhs > T(0)) {
                return false;
            }
            return true;
        };
        for (std::size_t r = 0; r < m; ++r) {
            // s_i (a_i + λ b_i) ≥ 0
            const T s = T(signs[active[r]]);
            if (!require(s * b[r], -s * a[r])) return std::nullopt;
        }
        for (std::size_t j = 0; j < d_; ++j) {
            if (signs[j] != 0) continue;
            T p = -c_[j];
            T q(0);
            for (std::size_t r = 0; r < m; ++r) {
                p += g_(j, active[r]) * a[r];
                q += g_(j, active[r]) * b[r];
            }
            // p + λq ≤ λ and −λ ≤ p + λq
            if (!require(T(1) - q, p)) return std::nullopt;
            if (!require(T(1) + q, -p)) return std::nullopt;
        }
        if (!(hi > lo)) return std::nullopt;

        Candidate<T> out{lo, hi, {}};
        out.segment.lambda_hi = static_cast<Real>(hi);
        out.segment.lambda_lo = static_cast<Real>(lo);
        out.segment.signs = std::move(signs);
        out.segment.active = active;
        for (std::size_t r = 0; r < m; ++r) {
            out.segment.intercept.push_back(static_cast<Real>(a[r]));
            out.segment.slope.push_back(static_cast<Real>(b[r]));
        }
        return out;
    }

private:
    std::size_t d_;
    Matrix<T> g_;
    Vector<T> c_;
};

template <class T>
RegularizationPath enumerate(const ProblemInstance& inst, const OracleOptions& opts) {
    const PatternEnumerator<T> patterns(inst);
    const T lmax = patterns.lambda_max();
    const T eps = scalar_traits<T>::epsilon();
    // Patterns valid only at a single λ show up with rounding-level width.
    const T min_width = T(1e3) * eps * lmax;

    const std::uint64_t total = patterns.pattern_count();
    const unsigned workers = resolve_workers(opts.workers);
    const std::uint64_t chunk = (total + workers - 1) / workers;
    std::vector<std::vector<Candidate<T>>> found(workers);
    parallel_for(workers, workers, [&](std::size_t w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(total, begin + chunk);
        for (std::uint64_t code = begin; code < end; ++code) {
            auto c = patterns.interval(code);
            if (c && c->hi - c->lo > min_width) found[w].push_back(std::move(*c));
        }
    });
    std::vector<Candidate<T>> all;
    for (auto& part : found) {
        for (auto& c : part) all.push_back(std::move(c));
    }
    std::sort(all.begin(), all.end(), [](const Candidate<T>& l, const Candidate<T>& r) {
        if (l.hi != r.hi) return l.hi > r.hi;
        return l.lo > r.lo;
    });

    const T gap_tol = T(opts.gap_tol_rel) * lmax;
    auto fail = [](const std::string& what) { throw TilingViolation(what); };
    if (all.empty() || !isinf(static_cast<Real>(all.front().hi))) fail("no zero segment on [lambda_max, inf)");
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
        const T diff = all[k].lo - all[k + 1].hi;
        if (diff > gap_tol) fail("gap below lambda = " + quad_to_string(static_cast<Real>(all[k].lo), 20));
        if (diff < -gap_tol) fail("overlap at lambda = " + quad_to_string(static_cast<Real>(all[k].lo), 20));
    }
    if (all.back().lo > gap_tol) fail("intervals stop above zero");

    RegularizationPath path;
    path.d = inst.d();
    path.lambda_max = static_cast<Real>(lmax);
    path.diagnostics.precision = scalar_traits<T>::mode;
    for (auto& c : all) path.segments.push_back(std::move(c.segment));
    return path;
}

}  // namespace

RegularizationPath enumerate_sign_patterns(const ProblemInstance& inst, const OracleOptions& opts) {
    inst.validate();
    if (inst.d() > 14) throw DomainError("sign-pattern enumeration supports d <= 14");
    if (opts.precision == PrecisionMode::Extended) return enumerate<quad>(inst, opts);
    return enumerate<double>(inst, opts);
}

Vector<Real> grid_solve(const ProblemInstance& inst, Real lambda, double tol, std::size_t max_iter) {
    if (!(lambda > Real(0))) throw DomainError("grid_solve needs lambda > 0");
    inst.validate();
    const std::size_t d = inst.d();
    const Matrix<double> x = inst.x.cast<double>();
    const Vector<double> y = cast_vector<double>(std::span<const Real>(inst.y));
    const Matrix<double> g = gram(x);
    const Vector<double> c = multiply_transposed<double>(x, y);
    const double lam = to_double(lambda);

    Vector<double> w(d, 0.0);
    // Gradient of the smooth part, G w − c, kept in sync with w.
    Vector<double> grad(d);
    for (std::size_t i = 0; i < d; ++i) grad[i] = -c[i];

    for (std::size_t sweep = 0; sweep < max_iter; ++sweep) {
        for (std::size_t j = 0; j < d; ++j) {
            const double z = g(j, j) * w[j] - grad[j];
            const double shrunk = std::copysign(std::max(std::fabs(z) - lam, 0.0), z) / g(j, j);
            const double delta = shrunk - w[j];
            if (delta == 0.0) continue;
            w[j] = shrunk;
            for (std::size_t i = 0; i < d; ++i) grad[i] += g(i, j) * delta;
        }
        if (sweep % 8 != 7) continue;
        // Refresh the gradient to stop drift, then test optimality.
        for (std::size_t i = 0; i < d; ++i) {
            double s = -c[i];
            for (std::size_t k = 0; k < d; ++k) s += g(i, k) * w[k];
            grad[i] = s;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double v = w[i] != 0.0 ? std::fabs(grad[i] + lam * (w[i] > 0 ? 1.0 : -1.0))
                                         : std::max(0.0, std::fabs(grad[i]) - lam);
            worst = std::max(worst, v);
        }
        if (worst <= 0.5 * tol) {
            Vector<Real> out = cast_vector<Real>(std::span<const double>(w));
            if (kkt_check(inst, lambda, out, Real(tol)).pass) return out;
        }
    }
    throw NoConvergence("coordinate descent did not reach the KKT tolerance");
}

PathComparison compare_paths(const RegularizationPath& a, const RegularizationPath& b) {
    PathComparison cmp;
    cmp.count_a = a.count();
    cmp.count_b = b.count();
    cmp.same_signs = cmp.count_a == cmp.count_b;
    for (std::size_t k = 0; cmp.same_signs && k < cmp.count_a; ++k) {
        cmp.same_signs = a.segments[k].signs == b.segments[k].signs;
    }
    const auto ba = a.breakpoints();
    const auto bb = b.breakpoints();
    for (std::size_t k = 0; k < std::min(ba.size(), bb.size()); ++k) {
        const Real scale = std::max(abs(ba[k]), abs(bb[k]));
        if (scale == Real(0)) continue;
        cmp.max_breakpoint_rel_diff = std::max(cmp.max_breakpoint_rel_diff, to_double(abs(ba[k] - bb[k]) / scale));
    }
    return cmp;
}

}  // namespace lassopath
