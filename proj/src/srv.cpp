#include "srvreg/srv.hpp"

#include <algorithm>
#include <cmath>

#include "srvreg/errors.hpp"
#include "srvreg/vec.hpp"

namespace srvreg {

SrvField SrvField::create(std::vector<double> samples, int dim,
                          std::vector<double> grid) {
    if (dim < 1) throw InputError("srv field dimension must be >= 1");
    if (grid.size() < 2) throw InputError("srv field needs at least 2 samples");
    if (samples.size() != grid.size() * static_cast<std::size_t>(dim))
        throw InputError("srv field sample/grid count mismatch");
    if (std::abs(grid.front()) > 1e-12 || std::abs(grid.back() - 1.0) > 1e-12)
        throw InputError("srv grid must span [0,1]");
    grid.front() = 0.0;
    grid.back() = 1.0;
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw InputError("srv grid must be strictly increasing");
    SrvField f;
    f.q_ = std::move(samples);
    f.grid_ = std::move(grid);
    f.dim_ = dim;
    return f;
}

void SrvField::eval(double t, double* out) const {
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw InputError("srv field argument outside [0,1]: " + std::to_string(t));
    t = std::clamp(t, 0.0, 1.0);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const int k = std::clamp(static_cast<int>(it - grid_.begin()) - 1, 0,
                             sample_count() - 2);
    const double s = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
    const auto a = sample(k);
    const auto b = sample(k + 1);
    for (int i = 0; i < dim_; ++i) out[i] = a[i] + s * (b[i] - a[i]);
}

std::vector<double> SrvField::eval(double t) const {
    std::vector<double> out(dim_);
    eval(t, out.data());
    return out;
}

double SrvField::l2_norm_sq() const {
    double s = 0.0;
    for (int k = 0; k + 1 < sample_count(); ++k)
        s += dot(sample(k), sample(k)) * (grid_[k + 1] - grid_[k]);
    return s;
}

SrvField SrvField::reversed() const {
    const int m = sample_count();
    std::vector<double> q(q_.size());
    std::vector<double> grid(m);
    for (int k = 0; k < m; ++k) {
        const auto src = sample(m - 1 - k);
        double* dst = q.data() + static_cast<std::size_t>(k) * dim_;
        for (int i = 0; i < dim_; ++i) dst[i] = -src[i];
        grid[k] = 1.0 - grid_[m - 1 - k];
    }
    return create(std::move(q), dim_, std::move(grid));
}

SrvField srvt(const SampledCurve& c) { return srvt(c, c.params()); }

SrvField srvt(const SampledCurve& c, std::span<const double> grid) {
    const int d = c.dim();
    const double len = c.length();
    const double sqrt_len = std::sqrt(len);
    std::vector<double> q(grid.size() * static_cast<std::size_t>(d));
    std::vector<double> cdot(d);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        c.deriv(grid[k], cdot.data());
        const double speed = norm(cdot);
        if (!(speed > 0.0))
            throw InputError("degenerate curve segment in srvt");
        const double scale = 1.0 / (sqrt_len * std::sqrt(speed));
        for (int i = 0; i < d; ++i)
            q[k * static_cast<std::size_t>(d) + i] = cdot[i] * scale;
    }
    return SrvField::create(std::move(q), d,
                            std::vector<double>(grid.begin(), grid.end()));
}

SampledCurve inverse_srvt(const SrvField& q) {
    const int d = q.dim();
    const int m = q.sample_count();
    std::vector<double> pts(static_cast<std::size_t>(m) * d, 0.0);
    for (int k = 1; k < m; ++k) {
        const auto qk = q.sample(k - 1);
        const double w = norm(qk) * (q.grid()[k] - q.grid()[k - 1]);
        for (int i = 0; i < d; ++i)
            pts[static_cast<std::size_t>(k) * d + i] =
                pts[static_cast<std::size_t>(k - 1) * d + i] + w * qk[i];
    }
    // q == 0 stretches reconstruct to coincident points, which is legitimate
    // for an inverse transform.
    std::vector<double> grid(q.grid().begin(), q.grid().end());
    return SampledCurve::create_relaxed(std::move(pts), d, std::move(grid));
}

double eval_f(const SrvField& q1, const SrvField& q2, double x1, double x2) {
    if (q1.dim() != q2.dim())
        throw InputError("srv fields of mismatched dimension");
    if (x1 < -1e-12 || x1 > 1.0 + 1e-12 || x2 < -1e-12 || x2 > 1.0 + 1e-12)
        throw InputError("eval_f argument outside the unit square");
    std::vector<double> a(q1.dim()), b(q2.dim());
    q1.eval(x1, a.data());
    q2.eval(x2, b.data());
    return std::max(dot(a, b), 0.0);
}

namespace {

// Normalised backward difference (c(x) - c(x - span)) / sqrt(|...|), zero when
// degenerate.
bool backward_diff_dir(const SampledCurve& c, double x, double span,
                       std::vector<double>& out) {
    std::vector<double> a(c.dim()), b(c.dim());
    c.eval(x, a.data());
    c.eval(x - span, b.data());
    double n2 = 0.0;
    for (int i = 0; i < c.dim(); ++i) {
        out[i] = a[i] - b[i];
        n2 += out[i] * out[i];
    }
    if (!(n2 > 0.0)) {
        std::fill(out.begin(), out.end(), 0.0);
        return false;
    }
    const double inv = 1.0 / std::sqrt(std::sqrt(n2));
    for (int i = 0; i < c.dim(); ++i) out[i] *= inv;
    return true;
}

}  // namespace

double approx_hf(const SampledCurve& c1, const SampledCurve& c2, double x1,
                 double x2, double h, long long* degenerate) {
    return approx_hf_ddp(c1, c2, x1, x2, h, 1, 1, degenerate);
}

double approx_hf_ddp(const SampledCurve& c1, const SampledCurve& c2, double x1,
                     double x2, double h, int k, int l, long long* degenerate) {
    if (k < 1 || l < 1)
        throw ConfigError("backward-difference spans need k, l >= 1");
    if (c1.dim() != c2.dim())
        throw InputError("curves of mismatched dimension");
    if (x1 < k * h - 1e-12 || x2 < l * h - 1e-12)
        throw InputError("backward difference reaches below parameter 0");
    std::vector<double> d1(c1.dim()), d2(c2.dim());
    const bool ok1 = backward_diff_dir(c1, x1, k * h, d1);
    const bool ok2 = backward_diff_dir(c2, x2, l * h, d2);
    if (!ok1 || !ok2) {
        if (degenerate) ++*degenerate;
        return 0.0;
    }
    const double scale = 1.0 / std::sqrt(c1.length() * c2.length());
    return std::max(dot(d1, d2) * scale, 0.0);
}

}  // namespace srvreg
