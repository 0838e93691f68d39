#pragma once

#include <functional>
#include <span>
#include <vector>

namespace srvreg {

/// A discretely sampled immersed curve in R^d with piecewise-linear
/// interpolation. Parameters live in [0,1], params[0]=0, params[M]=1,
/// strictly increasing; consecutive sample points must not coincide.
class SampledCurve {
public:
    // points: (M+1) x d row-major. Throws InputError on invariant violations.
    static SampledCurve create(std::vector<double> points, int dim,
                               std::vector<double> params);
    // Uniform parameters k/M.
    static SampledCurve uniform(std::vector<double> points, int dim);
    // Reconstructions (inverse transforms) may legitimately contain coincident
    // consecutive samples; this skips the immersion check only.
    static SampledCurve create_relaxed(std::vector<double> points, int dim,
                                       std::vector<double> params);

    int dim() const { return dim_; }
    int segments() const { return static_cast<int>(params_.size()) - 1; }
    int sample_count() const { return static_cast<int>(params_.size()); }

    std::span<const double> point(int k) const {
        return {pts_.data() + static_cast<std::size_t>(k) * dim_,
                static_cast<std::size_t>(dim_)};
    }
    double param(int k) const { return params_[static_cast<std::size_t>(k)]; }
    std::span<const double> params() const { return params_; }

    // Piecewise-linear evaluation; t must lie in [0,1] (tiny slack for roundoff).
    void eval(double t, double* out) const;
    std::vector<double> eval(double t) const;

    // Right derivative of the interpolant at t (left derivative at t=1).
    void deriv(double t, double* out) const;

    /// Polygonal chord length.
    double length() const { return length_; }

    SampledCurve reversed() const;

private:
    SampledCurve() = default;
    static SampledCurve make(std::vector<double> points, int dim,
                             std::vector<double> params, bool require_immersed);
    int segment_of(double t) const;

    std::vector<double> pts_;
    std::vector<double> params_;
    int dim_ = 0;
    double length_ = 0.0;
};

/// Orientation-preserving reparametrisation of [0,1]: phi(0)=0, phi(1)=1,
/// non-decreasing. Either analytic or a sampled map interpolated linearly.
class Reparam {
public:
    static Reparam analytic(std::function<double(double)> f);
    static Reparam sampled(std::vector<double> t, std::vector<double> phi);
    static Reparam identity();
    // The Moebius pair 3t/(1+2t) and t/(3-2t); mutual inverses.
    static Reparam mobius_fwd();
    static Reparam mobius_inv();

    double operator()(double t) const;

private:
    Reparam() = default;
    std::function<double(double)> fn_;
    std::vector<double> t_, phi_;  // sampled form
};

/// Samples of c o phi on the original parameter grid of c.
SampledCurve apply_reparam(const SampledCurve& c, const Reparam& phi);

/// Resample so that consecutive sample chords have equal length (discrete
/// arc-length parametrisation, uniform output parameters). The sample count
/// is preserved unless sample_count is given.
SampledCurve arc_length_parametrise(const SampledCurve& c, int sample_count = 0);

}  // namespace srvreg
