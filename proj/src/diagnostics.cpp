#include "srvreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace srvreg {

TotalValue total_value(const Problem& problem, const GridSpec& grid,
                       const SchemeConfig& cfg, int threads) {
    TotalValue tv{.grid = grid,
                  .u_tot = {},
                  .forward = solve(problem, grid, cfg, threads),
                  .reverse = solve(problem.reversed(), grid, cfg, threads)};
    const int n = grid.n;
    tv.u_tot.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double v = tv.forward.value.u(i, j) +
                             tv.reverse.value.u(n - i, n - j);
            tv.u_tot[static_cast<std::size_t>(i) * (n + 1) + j] = v;
            tv.max_value = std::max(tv.max_value, v);
        }
    return tv;
}

std::vector<GridPoint> find_local_maxima(const TotalValue& tv,
                                         double plateau_tol) {
    const int n = tv.grid.n;
    const auto at = [&](int i, int j) { return tv.at(i, j); };
    std::vector<char> cand(static_cast<std::size_t>(n + 1) * (n + 1), 0);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            bool ok = true;
            for (int di = -1; di <= 1 && ok; ++di)
                for (int dj = -1; dj <= 1 && ok; ++dj)
                    if (at(i + di, j + dj) > at(i, j) + plateau_tol) ok = false;
            cand[static_cast<std::size_t>(i) * (n + 1) + j] = ok;
        }
    // Merge 8-connected plateau components; keep the best point of each.
    std::vector<char> seen(cand.size(), 0);
    std::vector<GridPoint> out;
    std::vector<GridPoint> stack;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            const std::size_t id = static_cast<std::size_t>(i) * (n + 1) + j;
            if (!cand[id] || seen[id]) continue;
            GridPoint best{i, j};
            stack.assign(1, {i, j});
            seen[id] = 1;
            while (!stack.empty()) {
                const GridPoint p = stack.back();
                stack.pop_back();
                if (at(p.i, p.j) > at(best.i, best.j) ||
                    (at(p.i, p.j) == at(best.i, best.j) &&
                     (p.i < best.i || (p.i == best.i && p.j < best.j))))
                    best = p;
                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int qi = p.i + di, qj = p.j + dj;
                        if (qi < 1 || qj < 1 || qi >= n || qj >= n) continue;
                        const std::size_t qid =
                            static_cast<std::size_t>(qi) * (n + 1) + qj;
                        if (cand[qid] && !seen[qid]) {
                            seen[qid] = 1;
                            stack.push_back({qi, qj});
                        }
                    }
            }
            out.push_back(best);
        }
    return out;
}

ReparamPath backtrack_through(GridPoint x, const TotalValue& tv) {
    const int n = tv.grid.n;
    if (x.i <= 0 || x.j <= 0 || x.i >= n || x.j >= n)
        throw ConfigError("backtrack_through needs an interior grid point");
    const ReparamPath fwd =
        backtrack_from(tv.forward.policy, tv.grid, x.i, x.j);
    const ReparamPath rev =
        backtrack_from(tv.reverse.policy, tv.grid, n - x.i, n - x.j);
    // Reflect the reverse-problem path and append it beyond x.
    std::vector<double> phi1(fwd.phi1().begin(), fwd.phi1().end());
    std::vector<double> phi2(fwd.phi2().begin(), fwd.phi2().end());
    for (int k = rev.point_count() - 2; k >= 0; --k) {
        phi1.push_back(1.0 - rev.phi1()[k]);
        phi2.push_back(1.0 - rev.phi2()[k]);
    }
    return ReparamPath::create(std::move(phi1), std::move(phi2));
}

double linf_error(const ValueField& coarse, const ValueField& fine) {
    if (coarse.n() < 2 || fine.n() < coarse.n() || fine.n() % coarse.n() != 0)
        throw ConfigError("grids are not nested");
    const int m = fine.n() / coarse.n();
    double err = 0.0;
    for (int i = 0; i <= coarse.n(); ++i)
        for (int j = 0; j <= coarse.n(); ++j)
            err = std::max(err, std::abs(coarse.u(i, j) - fine.u(i * m, j * m)));
    return err;
}

namespace {

// L2 distance between two piecewise-constant vector functions given by
// per-segment values and segment lengths (both partitions of [0,1]).
double pw_const_l2(const std::vector<double>& qa, std::span<const double> dta,
                   const std::vector<double>& qb, std::span<const double> dtb,
                   int dim) {
    double ta = 0.0, tb = 0.0, t = 0.0, acc = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < dta.size() && ib < dtb.size()) {
        const double ea = ta + dta[ia];
        const double eb = tb + dtb[ib];
        const double e = std::min(ea, eb);
        const double w = e - t;
        if (w > 0.0) {
            double d2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                const double d = qa[ia * dim + c] - qb[ib * dim + c];
                d2 += d * d;
            }
            acc += d2 * w;
        }
        t = e;
        if (ea <= e + 1e-18) {
            ta = ea;
            ++ia;
        }
        if (eb <= e + 1e-18) {
            tb = eb;
            ++ib;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

double geodesic_error_bound(const RegisteredSrv& a, const RegisteredSrv& b) {
    if (a.dim != b.dim)
        throw InputError("registered srv samples of mismatched dimension");
    const double e1 = pw_const_l2(a.q1, a.dts, b.q1, b.dts, a.dim);
    const double e2 = pw_const_l2(a.q2, a.dts, b.q2, b.dts, a.dim);
    return M_PI * std::max(e1, e2);
}

ConvergenceReport run_convergence(const Problem& problem,
                                  const std::vector<Scheme>& schemes,
                                  std::vector<int> n_list, int reference_n,
                                  Scheme reference_scheme, FSource f_source,
                                  int threads) {
    if (schemes.empty() || n_list.empty())
        throw ConfigError("convergence run needs schemes and grid sizes");
    std::sort(n_list.begin(), n_list.end());
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] == n_list[k - 1])
            throw ConfigError("duplicate grid size in convergence run");
    for (int n : n_list)
        if (n < 2 || reference_n % n != 0)
            throw ConfigError("reference grid must be an integer multiple of every N");
    if (!problem.has_fields())
        throw ConfigError("convergence run needs srv fields (curve problems)");

    SchemeConfig ref_cfg;
    ref_cfg.scheme = reference_scheme;
    ref_cfg.f_source = f_source;
    const GridSpec ref_grid{reference_n};
    const SolveResult ref = solve(problem, ref_grid, ref_cfg, threads);
    const ReparamPath ref_path = backtrack(ref.policy, ref_grid);
    const RegisteredSrv ref_reg =
        registered_srv(ref_path, problem.q1(), problem.q2());
    const double ref_dist_u = shape_distance(ref.value.u_at_one());
    const double ref_dist_j =
        shape_distance(eval_Jh(ref_path, problem.q1(), problem.q2()));

    ConvergenceReport report;
    report.reference_scheme = scheme_name(reference_scheme);
    report.reference_n = reference_n;
    for (Scheme s : schemes) {
        SchemeConfig cfg;
        cfg.scheme = s;
        cfg.f_source = f_source;
        for (int n : n_list) {
            const GridSpec grid{n};
            const SolveResult res = solve(problem, grid, cfg, threads);
            const ReparamPath path = backtrack(res.policy, grid);
            const RegisteredSrv reg =
                registered_srv(path, problem.q1(), problem.q2());
            ConvergenceRow row;
            row.scheme = scheme_name(s);
            row.n = n;
            row.wall_ms = res.stats.wall_ms;
            row.linf_u_error = linf_error(res.value, ref.value);
            row.dist_u_error =
                std::abs(shape_distance(res.value.u_at_one()) - ref_dist_u);
            row.dist_j_error = std::abs(
                shape_distance(eval_Jh(path, problem.q1(), problem.q2())) -
                ref_dist_j);
            row.geodesic_error_bound = geodesic_error_bound(reg, ref_reg);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace srvreg
