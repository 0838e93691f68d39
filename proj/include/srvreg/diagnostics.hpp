#pragma once

#include <string>
#include <vector>

#include "srvreg/geodesic.hpp"
#include "srvreg/solver.hpp"

namespace srvreg {

struct GridPoint {
    int i = 0, j = 0;
};

/// Forward plus reversed value function; local maxima mark local solutions of
/// the registration problem.
struct TotalValue {
    GridSpec grid;
    std::vector<double> u_tot;  // (N+1)^2 row-major node values (u-scale)
    SolveResult forward;
    SolveResult reverse;  // solved in reflected coordinates
    double max_value = 0.0;

    double at(int i, int j) const {
        return u_tot[static_cast<std::size_t>(i) * (grid.n + 1) + j];
    }
};

TotalValue total_value(const Problem& problem, const GridSpec& grid,
                       const SchemeConfig& cfg, int threads = 1);

/// Interior grid points whose 8-neighbourhood does not exceed them by more
/// than plateau_tol; connected plateau components are merged and reported by
/// their best point (ties to the lexicographically smallest index).
std::vector<GridPoint> find_local_maxima(const TotalValue& tv,
                                         double plateau_tol);

/// Local solution through an interior node x: reverse-problem path from x to
/// (1,1) concatenated with the forward path from x down to (0,0).
ReparamPath backtrack_through(GridPoint x, const TotalValue& tv);

/// Max |u_h - u_eps| over the coarse nodes; grids must be nested.
double linf_error(const ValueField& coarse, const ValueField& fine);

/// pi * max L2 distance between the piecewise-constant registered SRV pairs,
/// resampled onto the merged segment partition. Upper bound for the maximal
/// pre-shape (and shape) distance between the two discrete geodesics.
double geodesic_error_bound(const RegisteredSrv& a, const RegisteredSrv& b);

struct ConvergenceRow {
    std::string scheme;
    int n = 0;
    double wall_ms = 0.0;
    double linf_u_error = 0.0;
    double dist_u_error = 0.0;
    double dist_j_error = 0.0;
    double geodesic_error_bound = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::string reference_scheme;
    int reference_n = 0;
};

/// Solve/backtrack/register per scheme and N against a fine reference solve.
ConvergenceReport run_convergence(const Problem& problem,
                                  const std::vector<Scheme>& schemes,
                                  std::vector<int> n_list, int reference_n,
                                  Scheme reference_scheme = Scheme::FilteredV,
                                  FSource f_source = FSource::CurveFd,
                                  int threads = 1);

}  // namespace srvreg
