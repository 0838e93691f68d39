#pragma once

#include <span>
#include <vector>

#include "srvreg/registration.hpp"

namespace srvreg {

/// Per-segment SRV samples after registration along a path:
/// q_{i,k} = q_i(phi_{i,k}) * sqrt(dphi_{i,k} / dt_k), k = 1..segments.
struct RegisteredSrv {
    int dim = 0;
    int segments = 0;
    std::vector<double> q1, q2;  // segments x dim, row-major
    std::vector<double> dts;     // joint parameter increments, sum 1

    std::span<const double> q1_at(int k) const {
        return {q1.data() + static_cast<std::size_t>(k) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> q2_at(int k) const {
        return {q2.data() + static_cast<std::size_t>(k) * dim,
                static_cast<std::size_t>(dim)};
    }
    /// Discrete objective sum_k <q1_k, q2_k> dt_k.
    double objective() const;
};

RegisteredSrv registered_srv(const ReparamPath& path, const SrvField& q1,
                             const SrvField& q2);

/// arccos of Jh clamped to [-1, 1].
double shape_distance(double Jh);

/// Great-circle interpolation weight sin(tau*theta)/sin(theta) with a linear
/// fallback below theta = 1e-6; throws NumericError near theta = pi.
double geodesic_weight(double theta, double tau);

/// gamma_k(tau) = w(1-tau) q1_k + w(tau) q2_k, flattened segments x dim.
std::vector<double> geodesic_points(const RegisteredSrv& reg, double Jh,
                                    double tau);

/// Discrete inverse transform of per-segment SRV samples: cumulative sums of
/// gamma |gamma| dt, starting at the origin.
SampledCurve preshape_curve(std::span<const double> gamma, int dim,
                            std::span<const double> dts);

struct GeodesicResult {
    double distance = 0.0;  // arccos(clamp(Jh))
    double Jh = 0.0;        // raw objective, kept for error reporting
    RegisteredSrv registered;
    std::vector<double> tau_grid;
    std::vector<SampledCurve> curves;  // one pre-shape representative per tau
};

GeodesicResult make_geodesic(const ReparamPath& path, const SrvField& q1,
                             const SrvField& q2, int tau_count = 7);

}  // namespace srvreg
