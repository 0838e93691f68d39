#pragma once

#include <span>
#include <utility>
#include <vector>

#include "srvreg/grid.hpp"
#include "srvreg/srv.hpp"

namespace srvreg {

/// Monotone piecewise-linear reparametrisation path from (0,0) to (1,1) in
/// the unit square; interior points lie on grid lines. dts holds the joint
/// parameter increments per segment (||phi'||_1 convention, summing to 1).
class ReparamPath {
public:
    static ReparamPath create(std::vector<double> phi1, std::vector<double> phi2);

    int point_count() const { return static_cast<int>(phi1_.size()); }
    int segment_count() const { return point_count() - 1; }
    std::pair<double, double> point(int k) const { return {phi1_[k], phi2_[k]}; }
    std::span<const double> phi1() const { return phi1_; }
    std::span<const double> phi2() const { return phi2_; }
    std::span<const double> dts() const { return dts_; }

    /// Throws NumericError if endpoint, monotonicity or length invariants are
    /// violated (n gives the grid for the 2N+1 length bound; pass 0 to skip).
    void validate(int n = 0) const;

private:
    ReparamPath() = default;
    std::vector<double> phi1_, phi2_, dts_;
};

/// One backtracking step: intersect the ray phi - t * alpha with the left
/// and bottom lines of the half-open cell containing phi and return the
/// componentwise larger intersection (the smaller t). Hit coordinates snap
/// exactly onto their grid lines.
std::pair<double, double> backtrack_step(double phi1, double phi2, double a1,
                                         double a2, const GridSpec& grid);

/// Follow the stored maximisers from (1,1) back to (0,0).
ReparamPath backtrack(const PolicyField& policy, const GridSpec& grid);

/// Backtrack starting from an arbitrary grid node (ends at (0,0)).
ReparamPath backtrack_from(const PolicyField& policy, const GridSpec& grid,
                           int i, int j);

/// Joint-parameter increments 0.5 * (dphi1 + dphi2) per segment.
std::vector<double> compute_dts(std::span<const double> phi1,
                                std::span<const double> phi2);

/// Discrete objective sum_k <q1(phi1_k), q2(phi2_k)> sqrt(dphi1_k dphi2_k);
/// independent of any dt convention by construction. Raw value (no clamp).
double eval_Jh(const ReparamPath& path, const SrvField& q1, const SrvField& q2);

}  // namespace srvreg
