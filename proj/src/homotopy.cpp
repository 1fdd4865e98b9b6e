#include "lassopath/homotopy.hpp"

#include <algorithm>
#include <numeric>

#include "lassopath/active_set_factor.hpp"

namespace lassopath {

namespace {

enum class EventKind { Enter, Leave };

template <class T>
struct Event {
    T lambda;
    std::size_t coord;
    EventKind kind;
    int new_sign;
    int old_sign = 0;
};

// Affine law on the current active set (factor order) plus the inactive
// correlations u_j(λ) = p_j + λ q_j.
template <class T>
struct Law {
    Vector<T> a;
    Vector<T> b;
    Vector<T> p;
    Vector<T> q;
};

template <class T>
class HomotopySolver {
public:
    HomotopySolver(const ProblemInstance& inst, const PathOptions& opts)
        : opts_(opts),
          x_(inst.x.cast<T>()),
          y_(cast_vector<T>(std::span<const Real>(inst.y))),
          gram_(gram(x_)),
          corr_(multiply_transposed<T>(x_, y_)),
          factor_(gram_, default_pivot_tol(gram_, opts.pivot_factor)),
          signs_(inst.d(), 0),
          lambda_min_(static_cast<T>(opts.lambda_min)) {}

    RegularizationPath run() {
        const std::size_t d = x_.cols();
        RegularizationPath path;
        path.d = d;
        path.lambda_min = static_cast<Real>(lambda_min_);
        path.diagnostics.precision = scalar_traits<T>::mode;
        path.diagnostics.kkt_tol = opts_.kkt_tol.value_or(default_kkt_tol(scalar_traits<T>::mode));

        const T lmax = norm_inf<T>(corr_);
        path.lambda_max = static_cast<Real>(lmax);

        PathSegment zero;
        zero.lambda_hi = scalar_traits<Real>::infinity();
        zero.lambda_lo = static_cast<Real>(std::max(lmax, lambda_min_));
        zero.signs.assign(d, 0);
        path.segments.push_back(std::move(zero));

        if (lmax > lambda_min_) {
            std::vector<Event<T>> initial;
            for (std::size_t j = 0; j < d; ++j) {
                if (abs(corr_[j]) >= lmax - tie_window(lmax)) {
                    initial.push_back({lmax, j, EventKind::Enter, sign_of(corr_[j])});
                }
            }
            trace(path, lmax, std::move(initial));
        }
        if (opts_.check_kkt) verify(path);
        return path;
    }

private:
    T tie_window(T lambda) const {
        return T(opts_.tie_factor) * scalar_traits<T>::epsilon() * lambda;
    }

    Law<T> compute_law() const {
        const auto active = factor_.active();
        const std::size_t m = active.size();
        const std::size_t d = x_.cols();
        Vector<T> c_a(m), s_a(m);
        for (std::size_t k = 0; k < m; ++k) {
            c_a[k] = corr_[active[k]];
            s_a[k] = T(signs_[active[k]]);
        }
        Law<T> law;
        law.a = factor_.solve(c_a);
        law.b = factor_.solve(s_a);
        for (T& v : law.b) v = -v;
        law.p.assign(d, T(0));
        law.q.assign(d, T(0));
        for (std::size_t j = 0; j < d; ++j) {
            if (signs_[j] != 0) continue;
            T p = -corr_[j];
            T q(0);
            for (std::size_t k = 0; k < m; ++k) {
                p += gram_(j, active[k]) * law.a[k];
                q += gram_(j, active[k]) * law.b[k];
            }
            law.p[j] = p;
            law.q[j] = q;
        }
        return law;
    }

    // Events strictly below `lambda` and above lambda_min. `changed` holds the
    // events applied at `lambda`; their own trivially-satisfied crossings at
    // `lambda` are excluded.
    std::vector<Event<T>> candidates(const Law<T>& law, T lambda,
                                     std::span<const Event<T>> changed) const {
        auto just = [&](std::size_t j, EventKind kind) -> const Event<T>* {
            for (const auto& e : changed) {
                if (e.coord == j && e.kind == kind) return &e;
            }
            return nullptr;
        };
        auto admissible = [&](T value) { return value < lambda && value > lambda_min_; };

        std::vector<Event<T>> out;
        const auto active = factor_.active();
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t i = active[k];
            if (law.b[k] == T(0) || just(i, EventKind::Enter)) continue;
            const T value = -law.a[k] / law.b[k];
            if (admissible(value)) out.push_back({value, i, EventKind::Leave, 0, signs_[i]});
        }
        for (std::size_t j = 0; j < x_.cols(); ++j) {
            if (signs_[j] != 0) continue;
            // A coordinate that just left sits on the boundary −s_old·λ.
            const Event<T>* left = just(j, EventKind::Leave);
            const int skip_boundary = left ? -left->old_sign : 0;
            const T p = law.p[j];
            const T q = law.q[j];
            if (skip_boundary != 1 && q != T(1)) {
                const T value = p / (T(1) - q);  // u_j = +λ, w_j turns negative
                if (admissible(value)) out.push_back({value, j, EventKind::Enter, -1});
            }
            if (skip_boundary != -1 && q != T(-1)) {
                const T value = -p / (T(1) + q);  // u_j = −λ, w_j turns positive
                if (admissible(value)) out.push_back({value, j, EventKind::Enter, +1});
            }
        }
        return out;
    }

    void apply(std::span<const Event<T>> events) {
        for (const auto& e : events) {
            if (e.kind == EventKind::Leave) {
                factor_.remove(e.coord);
                signs_[e.coord] = 0;
            }
        }
        for (const auto& e : events) {
            if (e.kind == EventKind::Enter) {
                factor_.add(e.coord);
                signs_[e.coord] = e.new_sign;
            }
        }
    }

    // Sign and dual feasibility just below `lambda` for the current state.
    bool consistent_below(T lambda, std::span<const Event<T>> changed) const {
        const Law<T> law = compute_law();
        const auto next = candidates(law, lambda, changed);
        T lo = lambda_min_;
        for (const auto& e : next) lo = std::max(lo, e.lambda);
        const T mid = (lo + lambda) / T(2);
        const T slack = T(1e3) * scalar_traits<T>::epsilon() * mid;
        const auto active = factor_.active();
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (sign_of(law.a[k] + mid * law.b[k]) != signs_[active[k]]) return false;
        }
        for (std::size_t j = 0; j < x_.cols(); ++j) {
            if (signs_[j] != 0) continue;
            if (abs(law.p[j] + mid * law.q[j]) > mid + slack) return false;
        }
        return true;
    }

    // Applies the events that occur at `lambda`. Simultaneous events are
    // applied together and verified; on failure each is tried alone in
    // ascending coordinate order.
    std::vector<Event<T>> apply_breakpoint(T lambda, std::vector<Event<T>> events,
                                           RegularizationPath& path) {
        if (events.size() == 1) {
            apply(events);
            return events;
        }
        ++path.diagnostics.tie_events;
        std::sort(events.begin(), events.end(),
                  [](const Event<T>& l, const Event<T>& r) { return l.coord < r.coord; });
        const ActiveSetFactor<T> saved_factor = factor_;
        const std::vector<int> saved_signs = signs_;
        auto restore = [&] {
            factor_ = saved_factor;
            signs_ = saved_signs;
        };
        try {
            apply(events);
            if (consistent_below(lambda, events)) return events;
        } catch (const SingularActiveSet&) {
        }
        restore();
        for (const auto& e : events) {
            const std::vector<Event<T>> single{e};
            try {
                apply(single);
                if (consistent_below(lambda, single)) return single;
            } catch (const SingularActiveSet&) {
            }
            restore();
        }
        throw DegenerateTie("unresolvable simultaneous events at lambda = " +
                            quad_to_string(static_cast<Real>(lambda), 20));
    }

    PathSegment make_segment(T hi, T lo, const Law<T>& law) const {
        const auto active = factor_.active();
        std::vector<std::size_t> order(active.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t l, std::size_t r) { return active[l] < active[r]; });
        PathSegment seg;
        seg.lambda_hi = static_cast<Real>(hi);
        seg.lambda_lo = static_cast<Real>(lo);
        seg.signs = signs_;
        for (std::size_t k : order) {
            seg.active.push_back(active[k]);
            seg.intercept.push_back(static_cast<Real>(law.a[k]));
            seg.slope.push_back(static_cast<Real>(law.b[k]));
        }
        return seg;
    }

    void trace(RegularizationPath& path, T lambda, std::vector<Event<T>> events) {
        std::vector<Event<T>> changed = apply_breakpoint(lambda, std::move(events), path);
        while (true) {
            const Law<T> law = compute_law();
            std::vector<Event<T>> next = candidates(law, lambda, changed);
            if (next.empty()) {
                path.segments.push_back(make_segment(lambda, lambda_min_, law));
                return;
            }
            T lead = next.front().lambda;
            for (const auto& e : next) lead = std::max(lead, e.lambda);
            path.segments.push_back(make_segment(lambda, lead, law));
            if (path.segments.size() >= opts_.max_segments) {
                throw SegmentBudgetExceeded("segment budget of " + std::to_string(opts_.max_segments) +
                                                " reached",
                                            std::move(path));
            }
            const T window = tie_window(lead);
            std::erase_if(next, [&](const Event<T>& e) { return e.lambda < lead - window; });
            changed = apply_breakpoint(lead, std::move(next), path);
            lambda = lead;
        }
    }

    void verify(RegularizationPath& path) const {
        T worst(0);
        const std::size_t d = x_.cols();
        for (const auto& seg : path.segments) {
            const T lambda = static_cast<T>(seg.probe_lambda());
            if (!(lambda > T(0))) continue;
            Vector<T> w(d, T(0));
            for (std::size_t k = 0; k < seg.active.size(); ++k) {
                w[seg.active[k]] = static_cast<T>(seg.intercept[k]) + lambda * static_cast<T>(seg.slope[k]);
            }
            Vector<T> r = multiply<T>(x_, w);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y_[i];
            const Vector<T> u = multiply_transposed<T>(x_, r);
            for (std::size_t i = 0; i < d; ++i) {
                const T v = w[i] != T(0) ? abs(u[i] + lambda * T(sign_of(w[i])))
                                         : std::max(T(0), abs(u[i]) - lambda);
                // The stored sign must match the evaluated one.
                const T mismatch = sign_of(w[i]) != seg.signs[i] ? lambda : T(0);
                worst = std::max({worst, v, mismatch});
            }
        }
        path.diagnostics.max_kkt_violation = to_double(worst);
        path.diagnostics.kkt_ok = path.diagnostics.max_kkt_violation <= path.diagnostics.kkt_tol;
    }

    const PathOptions& opts_;
    Matrix<T> x_;
    Vector<T> y_;
    Matrix<T> gram_;
    Vector<T> corr_;
    ActiveSetFactor<T> factor_;
    std::vector<int> signs_;
    T lambda_min_;
};

}  // namespace

double default_kkt_tol(PrecisionMode mode) {
    return mode == PrecisionMode::Extended ? 1e-10 : 1e-8;
}

Real PathSegment::probe_lambda() const {
    if (isinf(lambda_hi)) return Real(2) * lambda_lo;
    return (lambda_hi + lambda_lo) / Real(2);
}

Vector<Real> PathSegment::evaluate(Real lambda, std::size_t d) const {
    Vector<Real> w(d, Real(0));
    for (std::size_t k = 0; k < active.size(); ++k) w[active[k]] = intercept[k] + lambda * slope[k];
    return w;
}

std::vector<Real> RegularizationPath::breakpoints() const {
    std::vector<Real> out;
    for (std::size_t k = 0; k + 1 < segments.size(); ++k) out.push_back(segments[k].lambda_lo);
    return out;
}

Real lambda_max(const ProblemInstance& inst) {
    return norm_inf<Real>(multiply_transposed<Real>(inst.x, inst.y));
}

RegularizationPath solve_path(const ProblemInstance& inst, const PathOptions& opts) {
    inst.validate();
    if (opts.precision == PrecisionMode::Extended) return HomotopySolver<quad>(inst, opts).run();
    return HomotopySolver<double>(inst, opts).run();
}

KktReport kkt_check(const ProblemInstance& inst, Real lambda, std::span<const Real> w, Real tol) {
    if (!(lambda > Real(0))) throw DomainError("kkt_check needs lambda > 0");
    if (w.size() != inst.d()) throw DomainError("solution length does not match d");
    KktReport report;
    Vector<Real> r = multiply<Real>(inst.x, w);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= inst.y[i];
    report.u = multiply_transposed<Real>(inst.x, r);
    report.violation.resize(inst.d());
    for (std::size_t i = 0; i < inst.d(); ++i) {
        const Real u = report.u[i];
        report.violation[i] = w[i] != Real(0) ? abs(u + lambda * Real(sign_of(w[i])))
                                              : std::max(Real(0), abs(u) - lambda);
        report.max_violation = std::max(report.max_violation, report.violation[i]);
    }
    report.pass = report.max_violation <= tol;
    return report;
}

Vector<Real> eval_path(const RegularizationPath& path, Real lambda) {
    if (!(lambda > Real(0))) throw OutOfRange("eval_path needs lambda > 0");
    if (lambda >= path.lambda_max) return Vector<Real>(path.d, Real(0));
    if (lambda < path.lambda_min || path.segments.empty() ||
        lambda < path.segments.back().lambda_lo) {
        throw OutOfRange("lambda below the traced part of the path");
    }
    // First segment whose lower end is at or below lambda.
    auto it = std::partition_point(path.segments.begin(), path.segments.end(),
                                   [&](const PathSegment& s) { return s.lambda_lo > lambda; });
    return it->evaluate(lambda, path.d);
}

PathSlopes path_slopes(const ProblemInstance& inst, const RegularizationPath& path) {
    const Matrix<Real> g = gram(inst.x);
    const std::size_t d = inst.d();
    PathSlopes out;
    for (const auto& seg : path.segments) {
        Vector<Real> dw(d, Real(0));
        for (std::size_t k = 0; k < seg.active.size(); ++k) dw[seg.active[k]] = seg.slope[k];
        Vector<Real> du = multiply<Real>(g, dw);
        for (std::size_t i = 0; i < d; ++i) {
            out.lipschitz_w = std::max(out.lipschitz_w, abs(dw[i]));
            out.lipschitz_u = std::max(out.lipschitz_u, abs(du[i]));
        }
        out.dw.push_back(std::move(dw));
        out.du.push_back(std::move(du));
    }
    return out;
}

}  // namespace lassopath
