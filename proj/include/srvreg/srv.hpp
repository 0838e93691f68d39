#pragma once

#include <span>
#include <vector>

#include "srvreg/curve.hpp"

namespace srvreg {

/// Sampled square-root-velocity function q on a parameter grid in [0,1].
/// Built by srvt() it has unit discrete L2 norm (left-endpoint rule) by
/// construction. Off-grid values are piecewise-linear in the samples.
class SrvField {
public:
    static SrvField create(std::vector<double> samples, int dim,
                           std::vector<double> grid);

    int dim() const { return dim_; }
    int sample_count() const { return static_cast<int>(grid_.size()); }
    std::span<const double> sample(int k) const {
        return {q_.data() + static_cast<std::size_t>(k) * dim_,
                static_cast<std::size_t>(dim_)};
    }
    std::span<const double> grid() const { return grid_; }

    void eval(double t, double* out) const;
    std::vector<double> eval(double t) const;

    // Left-endpoint rule sum |q_k|^2 (t_{k+1} - t_k).
    double l2_norm_sq() const;

    SrvField reversed() const;

private:
    SrvField() = default;
    std::vector<double> q_;
    std::vector<double> grid_;
    int dim_ = 0;
};

/// Length-scaled square-root-velocity transform, sampled on the curve's own
/// parameter grid (right derivatives, so the discrete L2 norm is exactly 1).
SrvField srvt(const SampledCurve& c);
/// Same transform sampled on an explicit grid; the unit-norm identity holds
/// only when the grid resolves the curve's knots.
SrvField srvt(const SampledCurve& c, std::span<const double> grid);

/// Cumulative left-endpoint quadrature of |q| q; starts at the origin.
SampledCurve inverse_srvt(const SrvField& q);

/// Relaxed registration integrand max{<q1(x1), q2(x2)>, 0}.
double eval_f(const SrvField& q1, const SrvField& q2, double x1, double x2);

/// Backward-difference approximation of h*f(x) directly from curve samples,
/// with the same length scaling as srvt. Degenerate differences contribute 0
/// and bump *degenerate when given.
double approx_hf(const SampledCurve& c1, const SampledCurve& c2, double x1,
                 double x2, double h, long long* degenerate = nullptr);

/// Backward differences over spans k*h and l*h: approximates h*f(x)*sqrt(k*l).
double approx_hf_ddp(const SampledCurve& c1, const SampledCurve& c2, double x1,
                     double x2, double h, int k, int l,
                     long long* degenerate = nullptr);

}  // namespace srvreg
