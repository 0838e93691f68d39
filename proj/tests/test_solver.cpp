#include <doctest.h>

#include <cmath>
#include <random>

#include "srvreg/samples.hpp"
#include "srvreg/solver.hpp"
#include "srvreg/updates.hpp"

using namespace srvreg;

namespace {

SchemeConfig forcing_cfg(Scheme s) {
    SchemeConfig cfg;
    cfg.scheme = s;
    cfg.f_source = FSource::ExactQ;
    return cfg;
}

const std::vector<Scheme> kSemiDiscrete{Scheme::U1, Scheme::UInf, Scheme::V1,
                                        Scheme::VInf};
const std::vector<Scheme> kAllSchemes{
    Scheme::U1,  Scheme::UInf,      Scheme::V1,       Scheme::VInf,
    Scheme::Ddp, Scheme::FilteredU, Scheme::FilteredV};

// Smooth strictly positive field with bounded Fourier content.
double smooth_field(double x, double y, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-0.1, 0.1);
    std::uniform_real_distribution<double> freq(0.5, 3.0);
    double v = 0.7;
    for (int k = 0; k < 4; ++k) {
        const double a = amp(rng), fx = freq(rng), fy = freq(rng),
                     ph = amp(rng) * 40.0;
        v += a * std::sin(2.0 * M_PI * (fx * x + fy * y) + ph);
    }
    return std::max(v, 0.0);
}

}  // namespace

TEST_CASE("zero forcing gives a zero value field for every scheme") {
    const auto prob = Problem::from_forcing([](double, double) { return 0.0; });
    for (Scheme s : kAllSchemes) {
        const auto res = solve(prob, GridSpec{16}, forcing_cfg(s));
        for (int i = 0; i <= 16; ++i)
            for (int j = 0; j <= 16; ++j) CHECK(res.value.u(i, j) == 0.0);
    }
}

TEST_CASE("constant forcing reproduces the product-root value function") {
    const auto prob = Problem::from_forcing([](double, double) { return 1.0; });
    const GridSpec grid{160};

    // First-order scheme error bound on the analytic solution.
    const auto res = solve(prob, grid, forcing_cfg(Scheme::U1));
    double worst = 0.0;
    for (int i = 0; i <= grid.n; ++i)
        for (int j = 0; j <= grid.n; ++j)
            worst = std::max(worst,
                             std::abs(res.value.u(i, j) -
                                      std::sqrt(grid.node(i) * grid.node(j))));
    CHECK(worst <= 0.05);

    // The v-form simplex scheme resolves this solution exactly.
    const auto resv = solve(prob, grid, forcing_cfg(Scheme::V1));
    double worstv = 0.0;
    for (int i = 0; i <= grid.n; ++i)
        for (int j = 0; j <= grid.n; ++j)
            worstv = std::max(worstv,
                              std::abs(resv.value.u(i, j) -
                                       std::sqrt(grid.node(i) * grid.node(j))));
    CHECK(worstv <= 1e-10);
}

TEST_CASE("boundary zeros, axis monotonicity and stability bounds") {
    for (unsigned seed : {11u, 12u, 13u}) {
        const auto prob = Problem::from_forcing([seed](double x, double y) {
            return smooth_field(x, y, seed);
        });
        const GridSpec grid{48};
        double fmax = 0.0;
        for (int i = 0; i <= grid.n; ++i)
            for (int j = 0; j <= grid.n; ++j)
                fmax = std::max(fmax, smooth_field(grid.node(i), grid.node(j),
                                                   seed));
        for (Scheme s : kAllSchemes) {
            SchemeConfig cfg = forcing_cfg(s);
            const auto res = solve(prob, grid, cfg);
            for (int k = 0; k <= grid.n; ++k) {
                CHECK(res.value.u(0, k) == 0.0);
                CHECK(res.value.u(k, 0) == 0.0);
            }
            double amax = 1.0;  // max-norm sets and the lattice scheme
            if (s == Scheme::U1 || s == Scheme::V1 || s == Scheme::FilteredU ||
                s == Scheme::FilteredV)
                amax = 0.5;
            const double bound =
                s == Scheme::Ddp ? fmax : 2.0 * fmax * amax;
            for (int i = 1; i <= grid.n; ++i)
                for (int j = 1; j <= grid.n; ++j) {
                    const double u = res.value.u(i, j);
                    CHECK(u >= res.value.u(i - 1, j) - 1e-12);
                    CHECK(u >= res.value.u(i, j - 1) - 1e-12);
                    CHECK(u <= bound + 1e-12);
                }
        }
    }
}

TEST_CASE("v-form schemes dominate their u-form counterparts pointwise") {
    for (unsigned seed : {31u, 32u}) {
        const auto prob = Problem::from_forcing([seed](double x, double y) {
            return smooth_field(x, y, seed);
        });
        const GridSpec grid{32};
        const auto u1 = solve(prob, grid, forcing_cfg(Scheme::U1));
        const auto v1 = solve(prob, grid, forcing_cfg(Scheme::V1));
        const auto ui = solve(prob, grid, forcing_cfg(Scheme::UInf));
        const auto vi = solve(prob, grid, forcing_cfg(Scheme::VInf));
        for (int i = 0; i <= grid.n; ++i)
            for (int j = 0; j <= grid.n; ++j) {
                CHECK(v1.value.u(i, j) >= u1.value.u(i, j) - 1e-12);
                CHECK(vi.value.u(i, j) >= ui.value.u(i, j) - 1e-12);
            }
    }
}

TEST_CASE("zero-forcing region stays exactly zero") {
    const auto prob = Problem::from_forcing([](double x, double y) {
        return (x <= 0.5 || y <= 0.25) ? 0.0 : 1.0;
    });
    const GridSpec grid{32};
    for (Scheme s : kAllSchemes) {
        const auto res = solve(prob, grid, forcing_cfg(s));
        for (int i = 0; i <= grid.n; ++i)
            for (int j = 0; j <= grid.n; ++j)
                if (grid.node(i) <= 0.5 || grid.node(j) <= 0.25)
                    CHECK(res.value.u(i, j) == 0.0);
        CHECK(res.value.u_at_one() > 0.0);
    }
}

TEST_CASE("strict increase across cells with positive forcing") {
    const auto prob = Problem::from_forcing([](double, double) { return 1.0; });
    const GridSpec grid{16};
    for (Scheme s : kSemiDiscrete) {
        const auto res = solve(prob, grid, forcing_cfg(s));
        for (int i = 1; i <= grid.n; ++i)
            for (int j = 1; j <= grid.n; ++j) {
                CHECK(res.value.u(i, j) >
                      std::max(res.value.u(i - 1, j), res.value.u(i, j - 1)));
            }
    }
}

TEST_CASE("lattice scheme: jump selection inside a bounded disc") {
    // Single forcing spike at (0.5, 0.5); radius-3 jumps make (2,2) optimal
    // with increment h * sqrt(4) = 0.2.
    const auto prob = Problem::from_forcing([](double x, double y) {
        return (std::abs(x - 0.5) < 1e-9 && std::abs(y - 0.5) < 1e-9) ? 1.0
                                                                      : 0.0;
    });
    SchemeConfig cfg = forcing_cfg(Scheme::Ddp);
    cfg.ddp_k = 3.0 * std::sqrt(0.1);  // radius k h^{-1/2} = 3 at h = 1/10
    cfg.ddp_r = 0.5;
    const GridSpec grid{10};
    const auto res = solve(prob, grid, cfg);
    CHECK(res.value.u(5, 5) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(res.policy.jump(5, 5).k == 2);
    CHECK(res.policy.jump(5, 5).l == 2);
}

TEST_CASE("lattice scheme with every jump admissible is the exhaustive optimum") {
    const int n = 5;
    const auto prob = Problem::from_forcing([](double, double) { return 1.0; });
    SchemeConfig cfg = forcing_cfg(Scheme::Ddp);
    cfg.ddp_k = std::sqrt(2.0) * n * std::sqrt(1.0 / n) + 1e-9;
    const GridSpec grid{n};
    const auto res = solve(prob, grid, cfg);
    // Single diagonal jump attains h * N * sqrt(1) ... = 1 by Cauchy-Schwarz.
    CHECK(res.value.u_at_one() == doctest::Approx(1.0).epsilon(1e-13));

    // Exhaustive lattice-path maximisation over all predecessors.
    const double h = grid.h();
    std::vector<double> w((n + 1) * (n + 1), 0.0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            if (i == 0 || j == 0) continue;
            double best = 0.0;
            for (int pi = 0; pi <= i; ++pi)
                for (int pj = 0; pj <= j; ++pj) {
                    if (pi == i && pj == j) continue;
                    best = std::max(best,
                                    w[pi * (n + 1) + pj] +
                                        h * std::sqrt(static_cast<double>(
                                                (i - pi) * (j - pj))));
                }
            w[i * (n + 1) + j] = best;
        }
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            CHECK(res.value.u(i, j) ==
                  doctest::Approx(w[i * (n + 1) + j]).epsilon(1e-12));
}

TEST_CASE("standalone lattice update reproduces the solved field") {
    const auto prob = Problem::from_forcing([](double x, double y) {
        return smooth_field(x, y, 21u);
    });
    const GridSpec grid{24};
    SchemeConfig cfg = forcing_cfg(Scheme::Ddp);
    const auto res = solve(prob, grid, cfg);
    const auto jumps =
        admissible_jumps(cfg.ddp_k * std::pow(grid.h(), -cfg.ddp_r));
    for (int i = 1; i <= grid.n; ++i)
        for (int j = 1; j <= grid.n; ++j) {
            const double hf =
                grid.h() * prob.forcing(grid.node(i), grid.node(j));
            const auto [value, jump] = update_ddp(
                res.value, i, j, jumps, [hf](int k, int l) {
                    return hf * std::sqrt(static_cast<double>(k) * l);
                });
            CHECK(value == res.value.raw(i, j));
            CHECK(jump.k == res.policy.jump(i, j).k);
            CHECK(jump.l == res.policy.jump(i, j).l);
        }
    // Only the origin has an empty feasible set.
    const auto [v0, j0] = update_ddp(res.value, 0, 0, jumps,
                                     [](int, int) { return 1.0; });
    CHECK(v0 == 0.0);
}

TEST_CASE("filtered scheme accepts the central candidate on smooth data") {
    const auto prob = Problem::from_forcing([](double, double) { return 1.0; });
    for (Scheme s : {Scheme::FilteredU, Scheme::FilteredV}) {
        const auto res = solve(prob, GridSpec{160}, forcing_cfg(s));
        CHECK(res.stats.filter_cells == 160 * 160);
        CHECK(res.stats.filter_accepted > res.stats.filter_cells / 2);
    }
}

TEST_CASE("one causal sweep lands on the fixed point of the update map") {
    const auto prob = Problem::from_forcing([](double x, double y) {
        return smooth_field(x, y, 5u);
    });
    const GridSpec grid{24};
    for (Scheme s : kSemiDiscrete) {
        const auto res = solve(prob, grid, forcing_cfg(s));
        const auto& w = res.value;
        for (int i = 1; i <= grid.n; ++i)
            for (int j = 1; j <= grid.n; ++j) {
                const double hf =
                    grid.h() * prob.forcing(grid.node(i), grid.node(j));
                UpdateResult r;
                switch (s) {
                    case Scheme::U1:
                        r = update_u1(w.raw(i - 1, j), w.raw(i, j - 1), hf);
                        break;
                    case Scheme::UInf:
                        r = update_uinf(w.raw(i - 1, j - 1), w.raw(i - 1, j),
                                        w.raw(i, j - 1), hf);
                        break;
                    case Scheme::V1:
                        r = update_v1(w.raw(i - 1, j), w.raw(i, j - 1), hf);
                        break;
                    default:
                        r = update_vinf(w.raw(i - 1, j - 1), w.raw(i - 1, j),
                                        w.raw(i, j - 1), hf);
                }
                CHECK(w.raw(i, j) == r.value);
            }
    }
}

TEST_CASE("solves are deterministic across thread counts") {
    const auto prob = Problem::from_forcing([](double x, double y) {
        return smooth_field(x, y, 77u);
    });
    const GridSpec grid{96};
    for (Scheme s : {Scheme::VInf, Scheme::Ddp, Scheme::FilteredV}) {
        const auto a = solve(prob, grid, forcing_cfg(s), 1);
        const auto b = solve(prob, grid, forcing_cfg(s), 4);
        for (int i = 0; i <= grid.n; ++i)
            for (int j = 0; j <= grid.n; ++j)
                CHECK(a.value.raw(i, j) == b.value.raw(i, j));
    }
}

TEST_CASE("curve-difference and exact forcing agree to first order") {
    const auto [c1, c2] = make_mobius_pair(2049);
    const auto prob = Problem::from_curves(c1, c2);
    const GridSpec grid{64};
    SchemeConfig fd;
    fd.scheme = Scheme::VInf;
    fd.f_source = FSource::CurveFd;
    SchemeConfig ex = forcing_cfg(Scheme::VInf);
    const auto a = solve(prob, grid, fd);
    const auto b = solve(prob, grid, ex);
    double worst = 0.0;
    for (int i = 0; i <= grid.n; ++i)
        for (int j = 0; j <= grid.n; ++j)
            worst = std::max(worst, std::abs(a.value.u(i, j) - b.value.u(i, j)));
    CHECK(worst < 0.05);
}

TEST_CASE("configuration errors are rejected") {
    const auto prob = Problem::from_forcing([](double, double) { return 1.0; });
    SchemeConfig cfg = forcing_cfg(Scheme::VInf);
    cfg.ddp_r = 1.5;
    CHECK_THROWS_AS(solve(prob, GridSpec{8}, cfg), ConfigError);
    cfg = forcing_cfg(Scheme::VInf);
    CHECK_THROWS_AS(solve(prob, GridSpec{1}, cfg), ConfigError);
    cfg.f_source = FSource::CurveFd;  // no curves behind the forcing problem
    CHECK_THROWS_AS(solve(prob, GridSpec{8}, cfg), ConfigError);
    SchemeConfig ddp = forcing_cfg(Scheme::Ddp);
    ddp.ddp_k = 0.05;  // radius < 1: empty jump set
    CHECK_THROWS_AS(solve(prob, GridSpec{8}, ddp), ConfigError);
    CHECK_THROWS_AS(scheme_from_name("nope"), ConfigError);
}
