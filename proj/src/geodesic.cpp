#include "srvreg/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "srvreg/vec.hpp"

namespace srvreg {

namespace {
constexpr double kThetaTol = 1e-6;
constexpr double kAntipodalTol = 1e-9;
}

double RegisteredSrv::objective() const {
    double J = 0.0;
    for (int k = 0; k < segments; ++k)
        J += dot(q1_at(k), q2_at(k)) * dts[k];
    return J;
}

RegisteredSrv registered_srv(const ReparamPath& path, const SrvField& q1,
                             const SrvField& q2) {
    if (q1.dim() != q2.dim())
        throw InputError("srv fields of mismatched dimension");
    RegisteredSrv reg;
    reg.dim = q1.dim();
    std::vector<double> buf(reg.dim);
    for (int k = 1; k < path.point_count(); ++k) {
        const double d1 = std::max(path.phi1()[k] - path.phi1()[k - 1], 0.0);
        const double d2 = std::max(path.phi2()[k] - path.phi2()[k - 1], 0.0);
        const double dt = 0.5 * (d1 + d2);
        if (!(dt > 0.0)) continue;  // stationary segment carries no mass
        const double w1 = std::sqrt(d1 / dt);
        const double w2 = std::sqrt(d2 / dt);
        q1.eval(path.phi1()[k], buf.data());
        for (double v : buf) reg.q1.push_back(v * w1);
        q2.eval(path.phi2()[k], buf.data());
        for (double v : buf) reg.q2.push_back(v * w2);
        reg.dts.push_back(dt);
        ++reg.segments;
    }
    return reg;
}

double shape_distance(double Jh) {
    if (!std::isfinite(Jh)) throw NumericError("non-finite objective value");
    return std::acos(std::clamp(Jh, -1.0, 1.0));
}

double geodesic_weight(double theta, double tau) {
    if (theta < 0.0 || tau < -1e-12 || tau > 1.0 + 1e-12)
        throw ConfigError("geodesic weight arguments out of range");
    if (theta >= M_PI - kAntipodalTol)
        throw NumericError("antipodal srv fields: geodesic undefined");
    tau = std::clamp(tau, 0.0, 1.0);
    if (theta < kThetaTol) return tau;
    return std::sin(tau * theta) / std::sin(theta);
}

std::vector<double> geodesic_points(const RegisteredSrv& reg, double Jh,
                                    double tau) {
    const double theta = shape_distance(Jh);
    const double w1 = geodesic_weight(theta, 1.0 - tau);
    const double w2 = geodesic_weight(theta, tau);
    std::vector<double> out(reg.q1.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = w1 * reg.q1[k] + w2 * reg.q2[k];
    return out;
}

SampledCurve preshape_curve(std::span<const double> gamma, int dim,
                            std::span<const double> dts) {
    const int segs = static_cast<int>(dts.size());
    if (gamma.size() != dts.size() * static_cast<std::size_t>(dim))
        throw InputError("geodesic samples do not match the dt list");
    std::vector<double> pts(static_cast<std::size_t>(segs + 1) * dim, 0.0);
    std::vector<double> params(segs + 1, 0.0);
    for (int k = 0; k < segs; ++k) {
        const std::span<const double> g{
            gamma.data() + static_cast<std::size_t>(k) * dim,
            static_cast<std::size_t>(dim)};
        const double w = norm(g) * dts[k];
        for (int i = 0; i < dim; ++i)
            pts[static_cast<std::size_t>(k + 1) * dim + i] =
                pts[static_cast<std::size_t>(k) * dim + i] + w * g[i];
        params[k + 1] = params[k] + dts[k];
    }
    params[segs] = 1.0;
    return SampledCurve::create_relaxed(std::move(pts), dim, std::move(params));
}

GeodesicResult make_geodesic(const ReparamPath& path, const SrvField& q1,
                             const SrvField& q2, int tau_count) {
    if (tau_count < 1) throw ConfigError("geodesic needs at least one tau");
    GeodesicResult res;
    res.registered = registered_srv(path, q1, q2);
    res.Jh = eval_Jh(path, q1, q2);
    res.distance = shape_distance(res.Jh);
    if (res.distance >= M_PI - kAntipodalTol)
        throw NumericError("antipodal srv fields: geodesic undefined");
    for (int k = 0; k < tau_count; ++k) {
        const double tau =
            tau_count == 1 ? 0.0 : static_cast<double>(k) / (tau_count - 1);
        res.tau_grid.push_back(tau);
        const auto gamma = geodesic_points(res.registered, res.Jh, tau);
        res.curves.push_back(
            preshape_curve(gamma, res.registered.dim, res.registered.dts));
    }
    return res;
}

}  // namespace srvreg
