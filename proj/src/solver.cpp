#include "srvreg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "srvreg/updates.hpp"
#include "srvreg/vec.hpp"

namespace srvreg {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::U1: return "u1";
        case Scheme::UInf: return "uinf";
        case Scheme::V1: return "v1";
        case Scheme::VInf: return "vinf";
        case Scheme::Ddp: return "ddp";
        case Scheme::FilteredU: return "filtered-u";
        case Scheme::FilteredV: return "filtered-v";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::U1, Scheme::UInf, Scheme::V1, Scheme::VInf,
                     Scheme::Ddp, Scheme::FilteredU, Scheme::FilteredV})
        if (name == scheme_name(s)) return s;
    throw ConfigError("unknown scheme '" + name + "'");
}

void SchemeConfig::validate() const {
    if (!(ddp_k > 0.0)) throw ConfigError("ddp_k must be > 0");
    if (!(ddp_r > 0.0 && ddp_r < 1.0)) throw ConfigError("ddp_r must be in (0,1)");
    if (!(filter_k > 0.0)) throw ConfigError("filter_k must be > 0");
}

Problem Problem::from_curves(SampledCurve c1, SampledCurve c2) {
    if (c1.dim() != c2.dim())
        throw InputError("curves of mismatched dimension");
    Problem p;
    p.q1_ = srvt(c1);
    p.q2_ = srvt(c2);
    p.c1_ = std::move(c1);
    p.c2_ = std::move(c2);
    return p;
}

Problem Problem::from_fields(SrvField q1, SrvField q2) {
    if (q1.dim() != q2.dim())
        throw InputError("srv fields of mismatched dimension");
    Problem p;
    p.q1_ = std::move(q1);
    p.q2_ = std::move(q2);
    return p;
}

Problem Problem::from_forcing(std::function<double(double, double)> f) {
    if (!f) throw ConfigError("empty forcing callable");
    Problem p;
    p.f_ = std::move(f);
    return p;
}

const SampledCurve& Problem::c1() const {
    if (!c1_) throw ConfigError("problem carries no curves");
    return *c1_;
}
const SampledCurve& Problem::c2() const {
    if (!c2_) throw ConfigError("problem carries no curves");
    return *c2_;
}
const SrvField& Problem::q1() const {
    if (!q1_) throw ConfigError("problem carries no srv fields");
    return *q1_;
}
const SrvField& Problem::q2() const {
    if (!q2_) throw ConfigError("problem carries no srv fields");
    return *q2_;
}

double Problem::forcing(double x1, double x2) const {
    if (f_) return std::max(f_(x1, x2), 0.0);
    return eval_f(q1(), q2(), x1, x2);
}

Problem Problem::reversed() const {
    Problem p;
    if (c1_) {
        p.c1_ = c1_->reversed();
        p.c2_ = c2_->reversed();
    }
    if (q1_) {
        p.q1_ = q1_->reversed();
        p.q2_ = q2_->reversed();
    }
    if (f_) {
        auto f = f_;
        p.f_ = [f](double x1, double x2) { return f(1.0 - x1, 1.0 - x2); };
    }
    return p;
}

namespace {

std::vector<double> curve_at_params(const SampledCurve& c,
                                    const std::vector<double>& ts) {
    std::vector<double> pts(ts.size() * static_cast<std::size_t>(c.dim()));
    for (std::size_t k = 0; k < ts.size(); ++k)
        c.eval(ts[k], pts.data() + k * static_cast<std::size_t>(c.dim()));
    return pts;
}

// Rows of normalised span differences (pts[k+stride] - pts[k]) / sqrt(|.|);
// zero rows mark degenerate differences.
struct FdDirs {
    std::vector<double> dir;
    int dim = 0;
    const double* at(int k) const {
        return dir.data() + static_cast<std::size_t>(k) * dim;
    }
};

FdDirs normalized_diffs(const std::vector<double>& pts, int count, int dim,
                        int stride, long long* degenerate) {
    FdDirs out;
    out.dim = dim;
    out.dir.assign(static_cast<std::size_t>(count) * dim, 0.0);
    for (int k = 0; k < count; ++k) {
        const double* a = pts.data() + static_cast<std::size_t>(k + stride) * dim;
        const double* b = pts.data() + static_cast<std::size_t>(k) * dim;
        double* d = out.dir.data() + static_cast<std::size_t>(k) * dim;
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            d[i] = a[i] - b[i];
            n2 += d[i] * d[i];
        }
        if (n2 > 0.0) {
            const double inv = 1.0 / std::sqrt(std::sqrt(n2));
            for (int i = 0; i < dim; ++i) d[i] *= inv;
        } else {
            for (int i = 0; i < dim; ++i) d[i] = 0.0;
            if (degenerate) ++*degenerate;
        }
    }
    return out;
}

inline double dot_n(const double* a, const double* b, int d) {
    if (d == 2) return a[0] * b[0] + a[1] * b[1];
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

// h*f at grid nodes (and cell centres for the filtered schemes), computed
// on the fly from per-axis sample rows so the sweep stays cache-resident.
struct NodeForcing {
    int dim = 0;
    double scale = 0.0;          // common factor applied to the dot products
    std::vector<double> row1;    // per-i data, contiguous dim-vectors
    std::vector<double> row2;    // per-j data
    std::vector<double> c1_row, c2_row;  // cell-centre variants
    std::vector<double> table;   // fallback (analytic forcing): (n+1)^2
    std::vector<double> ctable;  // fallback centres: n^2
    int n = 0;
    long long degenerate = 0;

    double at(int i, int j) const {
        if (!table.empty())
            return table[static_cast<std::size_t>(i) * (n + 1) + j];
        const double v = dot_n(row1.data() + static_cast<std::size_t>(i - 1) * dim,
                               row2.data() + static_cast<std::size_t>(j - 1) * dim,
                               dim) *
                         scale;
        return v > 0.0 ? v : 0.0;
    }
    // Cell (ci, cj); boundary-adjacent cells fall back to the node value
    // where the backward difference would reach below parameter 0.
    double at_center(int ci, int cj) const {
        if (!ctable.empty())
            return ctable[static_cast<std::size_t>(ci) * n + cj];
        if (c1_row.empty() || ci == 0 || cj == 0) return at(ci + 1, cj + 1);
        const double v =
            dot_n(c1_row.data() + static_cast<std::size_t>(ci) * dim,
                  c2_row.data() + static_cast<std::size_t>(cj) * dim, dim) *
            scale;
        return v > 0.0 ? v : 0.0;
    }
};

NodeForcing build_forcing(const Problem& prob, const GridSpec& grid,
                          const SchemeConfig& cfg, bool want_centers) {
    const int n = grid.n;
    const double h = grid.h();
    NodeForcing f;
    f.n = n;

    if (cfg.f_source == FSource::CurveFd) {
        if (!prob.has_curves())
            throw ConfigError("curve-difference f source requires curves");
        const auto& c1 = prob.c1();
        const auto& c2 = prob.c2();
        f.dim = c1.dim();
        f.scale = 1.0 / std::sqrt(c1.length() * c2.length());
        std::vector<double> nodes(n + 1);
        for (int i = 0; i <= n; ++i) nodes[i] = grid.node(i);
        f.row1 = normalized_diffs(curve_at_params(c1, nodes), n, f.dim, 1,
                                  &f.degenerate)
                     .dir;
        f.row2 = normalized_diffs(curve_at_params(c2, nodes), n, f.dim, 1,
                                  &f.degenerate)
                     .dir;
        if (want_centers) {
            // Backward differences at the cell centres, spanning
            // [centre - h, centre]; the first cell keeps the node fallback
            // (its span would reach below parameter 0).
            f.c1_row.assign(static_cast<std::size_t>(n) * f.dim, 0.0);
            f.c2_row.assign(static_cast<std::size_t>(n) * f.dim, 0.0);
            std::vector<double> hi(n), lo(n);
            for (int c = 0; c < n; ++c) {
                hi[c] = grid.node(c) + 0.5 * h;
                lo[c] = std::max(hi[c] - h, 0.0);
            }
            const auto hi1 = curve_at_params(c1, hi);
            const auto lo1 = curve_at_params(c1, lo);
            const auto hi2 = curve_at_params(c2, hi);
            const auto lo2 = curve_at_params(c2, lo);
            auto fill = [&](const std::vector<double>& a,
                            const std::vector<double>& b,
                            std::vector<double>& out) {
                for (int c = 1; c < n; ++c) {
                    double n2 = 0.0;
                    double* d = out.data() + static_cast<std::size_t>(c) * f.dim;
                    for (int i = 0; i < f.dim; ++i) {
                        d[i] = a[static_cast<std::size_t>(c) * f.dim + i] -
                               b[static_cast<std::size_t>(c) * f.dim + i];
                        n2 += d[i] * d[i];
                    }
                    if (n2 > 0.0) {
                        const double inv = 1.0 / std::sqrt(std::sqrt(n2));
                        for (int i = 0; i < f.dim; ++i) d[i] *= inv;
                    } else {
                        for (int i = 0; i < f.dim; ++i) d[i] = 0.0;
                        ++f.degenerate;
                    }
                }
            };
            fill(hi1, lo1, f.c1_row);
            fill(hi2, lo2, f.c2_row);
        }
        return f;
    }

    if (prob.has_forcing()) {
        f.table.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                f.table[static_cast<std::size_t>(i) * (n + 1) + j] =
                    h * prob.forcing(grid.node(i), grid.node(j));
        if (want_centers) {
            f.ctable.assign(static_cast<std::size_t>(n) * n, 0.0);
            for (int ci = 0; ci < n; ++ci)
                for (int cj = 0; cj < n; ++cj)
                    f.ctable[static_cast<std::size_t>(ci) * n + cj] =
                        h * prob.forcing(grid.node(ci) + 0.5 * h,
                                         grid.node(cj) + 0.5 * h);
        }
        return f;
    }

    // Exact f from the SRV fields: per-axis interpolated samples, scaled by h.
    const auto& q1 = prob.q1();
    const auto& q2 = prob.q2();
    f.dim = q1.dim();
    f.scale = h;
    f.row1.resize(static_cast<std::size_t>(n) * f.dim);
    f.row2.resize(static_cast<std::size_t>(n) * f.dim);
    for (int i = 1; i <= n; ++i) {
        q1.eval(grid.node(i), f.row1.data() + static_cast<std::size_t>(i - 1) * f.dim);
        q2.eval(grid.node(i), f.row2.data() + static_cast<std::size_t>(i - 1) * f.dim);
    }
    if (want_centers) {
        f.c1_row.assign(static_cast<std::size_t>(n) * f.dim, 0.0);
        f.c2_row.assign(static_cast<std::size_t>(n) * f.dim, 0.0);
        for (int c = 0; c < n; ++c) {
            q1.eval(grid.node(c) + 0.5 * h,
                    f.c1_row.data() + static_cast<std::size_t>(c) * f.dim);
            q2.eval(grid.node(c) + 0.5 * h,
                    f.c2_row.data() + static_cast<std::size_t>(c) * f.dim);
        }
    }
    return f;
}

// Serial row sweep with register-carried neighbours; the wavefront variant
// splits anti-diagonals across threads (identical arithmetic per node).
template <class Update>
void sweep(ValueField& value, PolicyField& policy, int n, int threads,
           Update&& up) {
    if (threads <= 1) {
        for (int i = 1; i <= n; ++i) {
            const double* prev = value.row(i - 1);
            double* cur = value.row(i);
            double w00 = prev[0];
            double w10 = cur[0];
            for (int j = 1; j <= n; ++j) {
                const double w01 = prev[j];
                const UpdateResult r = up(i, j, w00, w01, w10);
                cur[j] = r.value;
                policy.set_alpha(i - 1, j - 1, {r.a1, r.a2});
                w00 = w01;
                w10 = r.value;
            }
        }
        return;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    threads = std::min<int>(threads, hw > 0 ? static_cast<int>(hw) : 4);
    for (int s = 2; s <= 2 * n; ++s) {
        const int ilo = std::max(1, s - n);
        const int ihi = std::min(n, s - 1);
        const int count = ihi - ilo + 1;
        auto run = [&](int a, int b) {
            for (int i = a; i <= b; ++i) {
                const int j = s - i;
                const UpdateResult r = up(i, j, value.raw(i - 1, j - 1),
                                          value.raw(i - 1, j), value.raw(i, j - 1));
                value.raw(i, j) = r.value;
                policy.set_alpha(i - 1, j - 1, {r.a1, r.a2});
            }
        };
        if (count < 256) {
            run(ilo, ihi);
            continue;
        }
        const int chunk = (count + threads - 1) / threads;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            const int a = ilo + t * chunk;
            const int b = std::min(ihi, a + chunk - 1);
            if (a > b) break;
            pool.emplace_back(run, a, b);
        }
        for (auto& th : pool) th.join();
    }
}

}  // namespace

SolveResult solve(const Problem& problem, const GridSpec& grid,
                  const SchemeConfig& cfg, int threads) {
    grid.validate();
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const int n = grid.n;
    const double h = grid.h();
    const bool filtered =
        cfg.scheme == Scheme::FilteredU || cfg.scheme == Scheme::FilteredV;
    const bool vkind = cfg.scheme == Scheme::V1 || cfg.scheme == Scheme::VInf ||
                       cfg.scheme == Scheme::FilteredV;

    NodeForcing forcing = build_forcing(problem, grid, cfg, filtered);
    SolveStats stats;
    stats.degenerate_differences = forcing.degenerate;

    auto finish = [&](ValueField&& value, PolicyField&& policy) {
        stats.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        return SolveResult{std::move(value), std::move(policy), stats};
    };

    if (cfg.scheme == Scheme::Ddp) {
        const double radius = cfg.ddp_k * std::pow(h, -cfg.ddp_r);
        struct Offset {
            int k, l;
            double skl;
        };
        std::vector<Offset> offsets;
        int kmax = 0;
        for (const LatticeJump& jp : admissible_jumps(radius)) {
            offsets.push_back(
                {jp.k, jp.l, std::sqrt(static_cast<double>(jp.k) * jp.l)});
            kmax = std::max({kmax, jp.k, jp.l});
        }

        ValueField value(n, ValueKind::U);
        PolicyField policy = PolicyField::jumps(n);

        const bool fd = cfg.f_source == FSource::CurveFd;
        std::vector<FdDirs> span1, span2;
        double fd_scale = 0.0;
        if (fd) {
            const auto& c1 = problem.c1();
            const auto& c2 = problem.c2();
            fd_scale = 1.0 / std::sqrt(c1.length() * c2.length());
            std::vector<double> nodes(n + 1);
            for (int i = 0; i <= n; ++i) nodes[i] = grid.node(i);
            const auto p1 = curve_at_params(c1, nodes);
            const auto p2 = curve_at_params(c2, nodes);
            span1.resize(std::min(kmax, n) + 1);
            span2.resize(std::min(kmax, n) + 1);
            for (int s = 1; s <= kmax && s <= n; ++s) {
                span1[s] = normalized_diffs(p1, n + 1 - s, c1.dim(), s,
                                            &stats.degenerate_differences);
                span2[s] = normalized_diffs(p2, n + 1 - s, c2.dim(), s,
                                            &stats.degenerate_differences);
            }
        }
        const int d = fd ? problem.c1().dim() : 0;

        auto node = [&](int i, int j) {
            double best = -1.0;
            LatticeJump bj{1, 0};
            const double hf = fd ? 0.0 : forcing.at(i, j);
            for (const auto& o : offsets) {
                if (o.k > i || o.l > j) continue;
                double inc;
                if (o.k == 0 || o.l == 0) {
                    inc = 0.0;
                } else if (fd) {
                    const double v = dot_n(span1[o.k].at(i - o.k),
                                           span2[o.l].at(j - o.l), d) *
                                     fd_scale;
                    inc = v > 0.0 ? v : 0.0;
                } else {
                    inc = hf * o.skl;
                }
                const double cand = value.raw(i - o.k, j - o.l) + inc;
                if (cand > best) {
                    best = cand;
                    bj = {o.k, o.l};
                }
            }
            value.raw(i, j) = std::max(best, 0.0);
            policy.set_jump(i, j, bj);
        };
        if (threads <= 1) {
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) node(i, j);
        } else {
            for (int s = 2; s <= 2 * n; ++s) {
                const int ilo = std::max(1, s - n);
                const int ihi = std::min(n, s - 1);
                const int count = ihi - ilo + 1;
                if (count < 64) {
                    for (int i = ilo; i <= ihi; ++i) node(i, s - i);
                    continue;
                }
                const int nt = std::min(threads, 8);
                const int chunk = (count + nt - 1) / nt;
                std::vector<std::thread> pool;
                for (int t = 0; t < nt; ++t) {
                    const int a = ilo + t * chunk;
                    const int b = std::min(ihi, a + chunk - 1);
                    if (a > b) break;
                    pool.emplace_back([&node, a, b, s] {
                        for (int i = a; i <= b; ++i) node(i, s - i);
                    });
                }
                for (auto& th : pool) th.join();
            }
        }
        return finish(std::move(value), std::move(policy));
    }

    ValueField value(n, vkind ? ValueKind::VSquared : ValueKind::U);
    PolicyField policy = PolicyField::alphas(n);

    switch (cfg.scheme) {
        case Scheme::U1:
            sweep(value, policy, n, threads,
                  [&](int i, int j, double, double w01, double w10) {
                      return update_u1(w01, w10, forcing.at(i, j));
                  });
            break;
        case Scheme::UInf:
            sweep(value, policy, n, threads,
                  [&](int i, int j, double w00, double w01, double w10) {
                      return update_uinf(w00, w01, w10, forcing.at(i, j));
                  });
            break;
        case Scheme::V1:
            sweep(value, policy, n, threads,
                  [&](int i, int j, double, double w01, double w10) {
                      return update_v1(w01, w10, forcing.at(i, j));
                  });
            break;
        case Scheme::VInf:
            sweep(value, policy, n, threads,
                  [&](int i, int j, double w00, double w01, double w10) {
                      return update_vinf(w00, w01, w10, forcing.at(i, j));
                  });
            break;
        case Scheme::FilteredU: {
            std::atomic<long long> accepted{0};
            sweep(value, policy, n, threads,
                  [&](int i, int j, double w00, double w01, double w10) {
                      bool acc = false;
                      const auto r = update_filtered_u(
                          w00, w01, w10, forcing.at(i, j),
                          forcing.at_center(i - 1, j - 1), cfg.filter_k, h, &acc);
                      if (acc) accepted.fetch_add(1, std::memory_order_relaxed);
                      return r;
                  });
            stats.filter_cells = static_cast<long long>(n) * n;
            stats.filter_accepted = accepted.load();
            break;
        }
        case Scheme::FilteredV: {
            std::atomic<long long> accepted{0};
            sweep(value, policy, n, threads,
                  [&](int i, int j, double w00, double w01, double w10) {
                      bool acc = false;
                      const auto r = update_filtered_v(
                          w00, w01, w10, forcing.at(i, j),
                          forcing.at_center(i - 1, j - 1), cfg.filter_k, h, &acc);
                      if (acc) accepted.fetch_add(1, std::memory_order_relaxed);
                      return r;
                  });
            stats.filter_cells = static_cast<long long>(n) * n;
            stats.filter_accepted = accepted.load();
            break;
        }
        default:
            throw ConfigError("unreachable scheme");
    }
    return finish(std::move(value), std::move(policy));
}

}  // namespace srvreg
