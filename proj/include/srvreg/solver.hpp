#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "srvreg/grid.hpp"
#include "srvreg/srv.hpp"

namespace srvreg {

enum class Scheme { U1, UInf, V1, VInf, Ddp, FilteredU, FilteredV };

/// How h*f is obtained at grid nodes: from the SRV fields (interpolated inner
/// products) or by backward differences of the curve samples.
enum class FSource { ExactQ, CurveFd };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws ConfigError

struct SchemeConfig {
    Scheme scheme = Scheme::VInf;
    double ddp_k = 0.75;
    double ddp_r = 0.5;
    double filter_k = 1.0;
    FSource f_source = FSource::CurveFd;

    void validate() const;
};

/// A registration problem: two curves and/or their SRV fields, or a bare
/// forcing function for synthetic studies.
class Problem {
public:
    static Problem from_curves(SampledCurve c1, SampledCurve c2);
    static Problem from_fields(SrvField q1, SrvField q2);
    static Problem from_forcing(std::function<double(double, double)> f);

    bool has_curves() const { return c1_.has_value(); }
    bool has_fields() const { return q1_.has_value(); }
    bool has_forcing() const { return static_cast<bool>(f_); }

    const SampledCurve& c1() const;
    const SampledCurve& c2() const;
    const SrvField& q1() const;
    const SrvField& q2() const;

    /// Relaxed integrand f(x1, x2) >= 0 at an arbitrary point.
    double forcing(double x1, double x2) const;

    /// The reversed problem f(1-x1, 1-x2) (curves/fields reversed).
    Problem reversed() const;

private:
    Problem() = default;
    std::optional<SampledCurve> c1_, c2_;
    std::optional<SrvField> q1_, q2_;
    std::function<double(double, double)> f_;
};

struct SolveStats {
    double wall_ms = 0.0;
    long long filter_cells = 0;
    long long filter_accepted = 0;
    long long degenerate_differences = 0;
};

struct SolveResult {
    ValueField value;
    PolicyField policy;
    SolveStats stats;
};

/// Solve the registration HJB problem on [0,1]^2 with a single causal sweep.
/// threads > 1 parallelises anti-diagonal wavefronts; results are identical.
SolveResult solve(const Problem& problem, const GridSpec& grid,
                  const SchemeConfig& cfg, int threads = 1);

}  // namespace srvreg
