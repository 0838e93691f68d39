#include "srvreg/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "srvreg/vec.hpp"

namespace srvreg {

ReparamPath ReparamPath::create(std::vector<double> phi1,
                                std::vector<double> phi2) {
    if (phi1.size() != phi2.size() || phi1.size() < 2)
        throw NumericError("path needs matching coordinate lists, >= 2 points");
    ReparamPath p;
    p.phi1_ = std::move(phi1);
    p.phi2_ = std::move(phi2);
    p.dts_ = compute_dts(p.phi1_, p.phi2_);
    return p;
}

void ReparamPath::validate(int n) const {
    if (phi1_.front() != 0.0 || phi2_.front() != 0.0)
        throw NumericError("path must start at (0,0)");
    if (phi1_.back() != 1.0 || phi2_.back() != 1.0)
        throw NumericError("path must end at (1,1)");
    for (std::size_t k = 1; k < phi1_.size(); ++k) {
        if (phi1_[k] < phi1_[k - 1] || phi2_[k] < phi2_[k - 1])
            throw NumericError("path is not componentwise monotone");
    }
    if (n > 0 && point_count() > 2 * n + 1)
        throw NumericError("path exceeds 2N+1 points");
}

std::vector<double> compute_dts(std::span<const double> phi1,
                                std::span<const double> phi2) {
    std::vector<double> dts(phi1.size() - 1);
    for (std::size_t k = 1; k < phi1.size(); ++k)
        dts[k - 1] = 0.5 * (phi1[k] - phi1[k - 1] + phi2[k] - phi2[k - 1]);
    return dts;
}

double eval_Jh(const ReparamPath& path, const SrvField& q1, const SrvField& q2) {
    std::vector<double> a(q1.dim()), b(q2.dim());
    double J = 0.0;
    for (int k = 1; k < path.point_count(); ++k) {
        const double d1 = std::max(path.phi1()[k] - path.phi1()[k - 1], 0.0);
        const double d2 = std::max(path.phi2()[k] - path.phi2()[k - 1], 0.0);
        if (d1 == 0.0 || d2 == 0.0) continue;
        q1.eval(path.phi1()[k], a.data());
        q2.eval(path.phi2()[k], b.data());
        J += dot(a, b) * std::sqrt(d1 * d2);
    }
    return J;
}

namespace {

// Index of the half-open cell (x_c, x_{c+1}] containing coordinate value x.
// Exact hits x == node(c) belong to cell c-1; comparisons are exact since
// the tracer snaps coordinates bitwise onto node values.
int cell_of(double x, const GridSpec& grid) {
    int c = static_cast<int>(std::floor(x * grid.n));
    c = std::clamp(c, 0, grid.n - 1);
    while (c > 0 && x <= grid.node(c)) --c;
    while (c + 1 < grid.n && x > grid.node(c + 1)) ++c;
    return c;
}

std::pair<double, double> ray_step(double x1, double x2, double a1, double a2,
                                   const GridSpec& grid) {
    const int ci = x1 > 0.0 ? cell_of(x1, grid) : 0;
    const int cj = x2 > 0.0 ? cell_of(x2, grid) : 0;
    // Ray phi - t * alpha against the cell's left and bottom lines; the
    // componentwise larger intersection is the one at smaller t.
    const double left = grid.node(ci);
    const double bottom = grid.node(cj);
    const double tv =
        a1 > 0.0 ? (x1 - left) / a1 : std::numeric_limits<double>::infinity();
    const double th =
        a2 > 0.0 ? (x2 - bottom) / a2 : std::numeric_limits<double>::infinity();
    const double t = std::min(tv, th);
    if (!(t > 0.0))
        throw NumericError("backtracking stalled (no strict progress)");
    const double n1 = tv <= th ? left : std::max(x1 - t * a1, left);
    const double n2 = th <= tv ? bottom : std::max(x2 - t * a2, bottom);
    return {n1, n2};
}

struct Tracer {
    const PolicyField& policy;
    const GridSpec& grid;
    std::vector<double> phi1, phi2;

    void trace_cells(double x1, double x2) {
        const int n = grid.n;
        int guard = 4 * n + 8;
        while (x1 > 0.0 || x2 > 0.0) {
            if (--guard < 0)
                throw NumericError("backtracking failed to reach (0,0)");
            double a1, a2;
            if (x1 <= 0.0) {
                a1 = 0.0;
                a2 = 1.0;
            } else if (x2 <= 0.0) {
                a1 = 1.0;
                a2 = 0.0;
            } else {
                const CellAlpha a =
                    policy.alpha(cell_of(x1, grid), cell_of(x2, grid));
                a1 = a.a1;
                a2 = a.a2;
                if (!(a1 > 0.0) && !(a2 > 0.0))
                    throw NumericError("zero policy direction during backtrack");
            }
            std::tie(x1, x2) = ray_step(x1, x2, a1, a2, grid);
            phi1.push_back(x1);
            phi2.push_back(x2);
        }
    }
};

}  // namespace

std::pair<double, double> backtrack_step(double phi1, double phi2, double a1,
                                         double a2, const GridSpec& grid) {
    if (!(a1 > 0.0) && !(a2 > 0.0))
        throw NumericError("zero direction in backtracking step");
    return ray_step(phi1, phi2, a1, a2, grid);
}

ReparamPath backtrack_from(const PolicyField& policy, const GridSpec& grid,
                           int i, int j) {
    if (i < 0 || j < 0 || i > grid.n || j > grid.n)
        throw ConfigError("backtracking start node outside the grid");
    std::vector<double> phi1{grid.node(i)};
    std::vector<double> phi2{grid.node(j)};
    if (policy.is_lattice()) {
        int ci = i, cj = j;
        while (ci > 0 || cj > 0) {
            if (ci == 0) {
                cj -= 1;
            } else if (cj == 0) {
                ci -= 1;
            } else {
                const LatticeJump jp = policy.jump(ci, cj);
                if (jp.k <= 0 && jp.l <= 0)
                    throw NumericError("zero jump in lattice policy");
                ci -= std::max<int>(jp.k, 0);
                cj -= std::max<int>(jp.l, 0);
            }
            phi1.push_back(grid.node(ci));
            phi2.push_back(grid.node(cj));
        }
    } else {
        Tracer tr{policy, grid, std::move(phi1), std::move(phi2)};
        tr.trace_cells(grid.node(i), grid.node(j));
        phi1 = std::move(tr.phi1);
        phi2 = std::move(tr.phi2);
    }
    std::reverse(phi1.begin(), phi1.end());
    std::reverse(phi2.begin(), phi2.end());
    return ReparamPath::create(std::move(phi1), std::move(phi2));
}

ReparamPath backtrack(const PolicyField& policy, const GridSpec& grid) {
    return backtrack_from(policy, grid, grid.n, grid.n);
}

}  // namespace srvreg
