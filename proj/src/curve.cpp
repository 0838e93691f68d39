#include "srvreg/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srvreg/errors.hpp"
#include "srvreg/vec.hpp"

namespace srvreg {

namespace {
constexpr double kParamSlack = 1e-12;
}

SampledCurve SampledCurve::make(std::vector<double> points, int dim,
                                std::vector<double> params,
                                bool require_immersed) {
    if (dim < 1) throw InputError("curve dimension must be >= 1");
    if (params.size() < 2) throw InputError("curve needs at least 2 samples");
    if (points.size() != params.size() * static_cast<std::size_t>(dim))
        throw InputError("curve point/parameter count mismatch");
    if (std::abs(params.front()) > kParamSlack ||
        std::abs(params.back() - 1.0) > kParamSlack)
        throw InputError("curve parameters must start at 0 and end at 1");
    params.front() = 0.0;
    params.back() = 1.0;
    for (std::size_t k = 1; k < params.size(); ++k)
        if (!(params[k] > params[k - 1]))
            throw InputError("curve parameters must be strictly increasing (row " +
                             std::to_string(k) + ")");

    SampledCurve c;
    c.pts_ = std::move(points);
    c.params_ = std::move(params);
    c.dim_ = dim;
    for (int k = 0; k < c.segments(); ++k) {
        const double d = dist(c.point(k), c.point(k + 1));
        if (require_immersed && d <= 0.0)
            throw InputError("degenerate curve segment (coincident samples at row " +
                             std::to_string(k) + ")");
        c.length_ += d;
    }
    return c;
}

SampledCurve SampledCurve::create(std::vector<double> points, int dim,
                                  std::vector<double> params) {
    return make(std::move(points), dim, std::move(params), true);
}

SampledCurve SampledCurve::create_relaxed(std::vector<double> points, int dim,
                                          std::vector<double> params) {
    return make(std::move(points), dim, std::move(params), false);
}

SampledCurve SampledCurve::uniform(std::vector<double> points, int dim) {
    if (dim < 1) throw InputError("curve dimension must be >= 1");
    const std::size_t m = points.size() / static_cast<std::size_t>(dim);
    if (m < 2 || points.size() % static_cast<std::size_t>(dim) != 0)
        throw InputError("curve needs at least 2 samples of dimension " +
                         std::to_string(dim));
    std::vector<double> params(m);
    for (std::size_t k = 0; k < m; ++k)
        params[k] = static_cast<double>(k) / static_cast<double>(m - 1);
    return create(std::move(points), dim, std::move(params));
}

int SampledCurve::segment_of(double t) const {
    if (t < -kParamSlack || t > 1.0 + kParamSlack)
        throw InputError("curve parameter outside [0,1]: " + std::to_string(t));
    t = std::clamp(t, 0.0, 1.0);
    auto it = std::upper_bound(params_.begin(), params_.end(), t);
    int k = static_cast<int>(it - params_.begin()) - 1;
    return std::clamp(k, 0, segments() - 1);
}

void SampledCurve::eval(double t, double* out) const {
    const int k = segment_of(t);
    t = std::clamp(t, 0.0, 1.0);
    const double dt = params_[k + 1] - params_[k];
    const double s = (t - params_[k]) / dt;
    const auto a = point(k);
    const auto b = point(k + 1);
    for (int i = 0; i < dim_; ++i) out[i] = a[i] + s * (b[i] - a[i]);
}

std::vector<double> SampledCurve::eval(double t) const {
    std::vector<double> out(dim_);
    eval(t, out.data());
    return out;
}

void SampledCurve::deriv(double t, double* out) const {
    int k = segment_of(t);
    if (t >= 1.0) k = segments() - 1;
    const double dt = params_[k + 1] - params_[k];
    const auto a = point(k);
    const auto b = point(k + 1);
    for (int i = 0; i < dim_; ++i) out[i] = (b[i] - a[i]) / dt;
}

SampledCurve SampledCurve::reversed() const {
    const int m = sample_count();
    std::vector<double> pts(pts_.size());
    std::vector<double> params(m);
    for (int k = 0; k < m; ++k) {
        const auto p = point(m - 1 - k);
        std::copy(p.begin(), p.end(), pts.begin() + static_cast<std::size_t>(k) * dim_);
        params[k] = 1.0 - params_[m - 1 - k];
    }
    return create(std::move(pts), dim_, std::move(params));
}

Reparam Reparam::analytic(std::function<double(double)> f) {
    if (!f) throw InputError("empty reparametrisation callable");
    if (std::abs(f(0.0)) > 1e-9 || std::abs(f(1.0) - 1.0) > 1e-9)
        throw InputError("reparametrisation must fix 0 and 1");
    // Spot-check monotonicity; analytic maps are trusted between probes.
    double prev = 0.0;
    for (int k = 1; k <= 256; ++k) {
        const double v = f(k / 256.0);
        if (v < prev - 1e-12)
            throw InputError("reparametrisation is not non-decreasing");
        prev = v;
    }
    Reparam r;
    r.fn_ = std::move(f);
    return r;
}

Reparam Reparam::sampled(std::vector<double> t, std::vector<double> phi) {
    if (t.size() != phi.size() || t.size() < 2)
        throw InputError("sampled reparametrisation needs matching lists, >= 2 entries");
    if (std::abs(t.front()) > kParamSlack || std::abs(t.back() - 1.0) > kParamSlack)
        throw InputError("reparametrisation grid must span [0,1]");
    if (std::abs(phi.front()) > kParamSlack || std::abs(phi.back() - 1.0) > kParamSlack)
        throw InputError("reparametrisation values must span [0,1]");
    t.front() = 0.0;
    t.back() = 1.0;
    phi.front() = 0.0;
    phi.back() = 1.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1]))
            throw InputError("reparametrisation grid must be strictly increasing");
        if (phi[k] < phi[k - 1] - 1e-15)
            throw InputError("reparametrisation values must be non-decreasing");
    }
    Reparam r;
    r.t_ = std::move(t);
    r.phi_ = std::move(phi);
    return r;
}

Reparam Reparam::identity() {
    return analytic([](double t) { return t; });
}

Reparam Reparam::mobius_fwd() {
    return analytic([](double t) { return 3.0 * t / (1.0 + 2.0 * t); });
}

Reparam Reparam::mobius_inv() {
    return analytic([](double t) { return t / (3.0 - 2.0 * t); });
}

double Reparam::operator()(double t) const {
    if (t < -kParamSlack || t > 1.0 + kParamSlack)
        throw InputError("reparametrisation argument outside [0,1]");
    t = std::clamp(t, 0.0, 1.0);
    if (fn_) return std::clamp(fn_(t), 0.0, 1.0);
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    int k = std::clamp(static_cast<int>(it - t_.begin()) - 1, 0,
                       static_cast<int>(t_.size()) - 2);
    const double s = (t - t_[k]) / (t_[k + 1] - t_[k]);
    return phi_[k] + s * (phi_[k + 1] - phi_[k]);
}

SampledCurve apply_reparam(const SampledCurve& c, const Reparam& phi) {
    const int m = c.sample_count();
    std::vector<double> pts(static_cast<std::size_t>(m) * c.dim());
    std::vector<double> params(c.params().begin(), c.params().end());
    for (int k = 0; k < m; ++k)
        c.eval(phi(c.param(k)), pts.data() + static_cast<std::size_t>(k) * c.dim());
    return SampledCurve::create(std::move(pts), c.dim(), std::move(params));
}

namespace {

// Walk the polygon placing points at chord distance `chord` from the previous
// placed point; returns the polygon arc-length position after `steps`
// placements (or beyond-the-end extrapolation when the polygon is exhausted).
double place_equal_chords(const SampledCurve& c, double chord, int steps,
                          std::vector<double>* out_pts) {
    const int d = c.dim();
    const int m = c.segments();
    std::vector<double> cur(c.point(0).begin(), c.point(0).end());
    if (out_pts) {
        out_pts->clear();
        out_pts->insert(out_pts->end(), cur.begin(), cur.end());
    }
    int seg = 0;
    double seg_t = 0.0;  // fraction of current segment already consumed
    double arc = 0.0;
    std::vector<double> a(d), b(d);
    for (int step = 0; step < steps; ++step) {
        bool placed = false;
        while (seg < m) {
            const auto A = c.point(seg);
            const auto B = c.point(seg + 1);
            // Solve |A + t(B-A) - cur|^2 = chord^2 for t in (seg_t, 1].
            double qa = 0.0, qb = 0.0, qc = -chord * chord;
            for (int i = 0; i < d; ++i) {
                const double e = B[i] - A[i];
                const double w = A[i] - cur[i];
                qa += e * e;
                qb += 2.0 * e * w;
                qc += w * w;
            }
            const double disc = qb * qb - 4.0 * qa * qc;
            double root = std::numeric_limits<double>::infinity();
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double t1 = (-qb - sq) / (2.0 * qa);
                const double t2 = (-qb + sq) / (2.0 * qa);
                if (t1 > seg_t + 1e-15 && t1 <= 1.0 + 1e-15) root = t1;
                else if (t2 > seg_t + 1e-15 && t2 <= 1.0 + 1e-15) root = t2;
            }
            if (root <= 1.0 + 1e-15) {
                root = std::min(root, 1.0);
                const double seg_len = dist(A, B);
                arc += (root - seg_t) * seg_len;
                seg_t = root;
                for (int i = 0; i < d; ++i) cur[i] = A[i] + root * (B[i] - A[i]);
                if (out_pts) out_pts->insert(out_pts->end(), cur.begin(), cur.end());
                placed = true;
                break;
            }
            arc += (1.0 - seg_t) * dist(A, B);
            seg_t = 0.0;
            ++seg;
        }
        if (!placed) {
            // Ran off the end: extrapolate so the objective stays monotone.
            arc += chord * (steps - step);
            if (out_pts)
                for (int s2 = step; s2 < steps; ++s2)
                    out_pts->insert(out_pts->end(), cur.begin(), cur.end());
            break;
        }
    }
    return arc;
}

}  // namespace

SampledCurve arc_length_parametrise(const SampledCurve& c, int sample_count) {
    const int m_out = sample_count > 0 ? sample_count - 1 : c.segments();
    if (m_out < 1) throw InputError("arc-length resampling needs >= 2 samples");
    const double total = c.length();

    double lo = 0.0, hi = total / m_out;
    // The equal-chord length is at most the mean arc per step; corner cutting
    // only shortens chords, so `hi` already overshoots the target arc.
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double arc = place_equal_chords(c, mid, m_out, nullptr);
        if (arc < total) lo = mid; else hi = mid;
    }
    std::vector<double> pts;
    place_equal_chords(c, 0.5 * (lo + hi), m_out, &pts);
    // Pin the endpoint exactly; the bisection residual lives there.
    const auto last = c.point(c.segments());
    std::copy(last.begin(), last.end(),
              pts.end() - static_cast<std::ptrdiff_t>(c.dim()));
    return SampledCurve::uniform(std::move(pts), c.dim());
}

}  // namespace srvreg
