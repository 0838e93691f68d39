#pragma once

#include <functional>
#include <span>
#include <vector>

#include "srvreg/grid.hpp"

namespace srvreg {

/// One node update: the new value (in the scheme's native representation,
/// u or v = u^2) and the maximising direction.
struct UpdateResult {
    double value = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

// Naming convention for the cell around the node being solved: u01 is the
// left neighbour (x1 - h, x2), u10 the bottom neighbour (x1, x2 - h), u00 the
// diagonal (x1 - h, x2 - h). hf = h * f at the node, always >= 0.

/// Simplex-constrained directions, linear interpolation of u.
UpdateResult update_u1(double u01, double u10, double hf);

/// Max-norm directions, linear interpolation of u.
UpdateResult update_uinf(double u00, double u01, double u10, double hf);

/// Simplex-constrained directions, linear interpolation of v = u^2.
/// Inputs and output are v-values. Solves the largest root of
/// v^2 - v (v01 + v10 + hf^2) + v01 v10 = 0.
UpdateResult update_v1(double v01, double v10, double hf);

/// Max-norm directions, linear interpolation of v = u^2. Interior branch
/// v = v**(v** - v00) / (v** - v00 - hf^2) under the maximiser-feasibility
/// condition v** hf^2 <= (v** - v00)(v** - v00 - hf^2); otherwise the corner
/// direction (1,1) with value (hf + sqrt(hf^2 + v00))^2.
UpdateResult update_vinf(double v00, double v01, double v10, double hf);

/// Central-difference (non-monotone) candidates used by the filtered schemes.
double filtered_candidate_u(double u00, double u01, double u10, double hf);
double filtered_candidate_v(double v00, double v01, double v10, double hf);

/// Filtered update: take the central candidate if the monotone companion's
/// residual at it stays within filter_k * sqrt(h), else the monotone update.
/// Companions are update_u1 / update_v1. hf_c is h*f at the cell centre.
UpdateResult update_filtered_u(double u00, double u01, double u10, double hf,
                               double hf_c, double filter_k, double h,
                               bool* accepted = nullptr);
UpdateResult update_filtered_v(double v00, double v01, double v10, double hf,
                               double hf_c, double filter_k, double h,
                               bool* accepted = nullptr);

/// Non-zero integer jumps inside the Euclidean disc of the given radius,
/// lexicographically ordered (the tie-break order of the lattice scheme).
std::vector<LatticeJump> admissible_jumps(double radius);

/// One lattice node update: maximise u(i-k, j-l) + increment(k, l) over the
/// feasible jumps, first maximum (lexicographically smallest jump) winning.
/// increment(k, l) supplies h * f * sqrt(k l) or its curve-difference
/// approximation; axis jumps always contribute zero.
std::pair<double, LatticeJump> update_ddp(
    const ValueField& u, int i, int j, std::span<const LatticeJump> jumps,
    const std::function<double(int, int)>& increment);

enum class AdmissibleSet { L1, LInf };
enum class Repr { U, V };

/// Direct maximisation of the scheme functional over a dense sampling of the
/// admissible set, refined locally; ground truth for the closed forms above.
/// For Repr::V the neighbour arguments and the returned value are v-values.
UpdateResult brute_force_update(double u00, double u01, double u10, double hf,
                                AdmissibleSet set, Repr repr,
                                int samples = 2000);

}  // namespace srvreg
