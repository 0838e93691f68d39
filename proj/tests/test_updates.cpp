#include <doctest.h>

#include <cmath>
#include <random>

#include "srvreg/updates.hpp"

using namespace srvreg;

namespace {
constexpr double kOracleTol = 1e-6;
}

TEST_CASE("u1 update: pinned values and maximisers") {
    auto r = update_u1(0.0, 0.0, 0.0);
    CHECK(r.value == 0.0);
    CHECK(r.a1 == 0.5);
    CHECK(r.a2 == 0.5);

    r = update_u1(0.5, 0.5, 0.2);
    CHECK(r.value == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r.a1 == doctest::Approx(0.5));

    r = update_u1(0.3, 0.1, 0.2);
    CHECK(r.value == doctest::Approx(0.341421356).epsilon(1e-8));
    CHECK(r.a1 == doctest::Approx(0.853553391).epsilon(1e-8));
    CHECK(r.a2 == doctest::Approx(0.146446609).epsilon(1e-8));

    auto b = brute_force_update(0.0, 0.3, 0.1, 0.2, AdmissibleSet::L1, Repr::U);
    CHECK(r.value == doctest::Approx(b.value).epsilon(kOracleTol));
    CHECK(r.a1 == doctest::Approx(b.a1).epsilon(1e-4));
}

TEST_CASE("uinf update: pinned values and maximisers") {
    auto r = update_uinf(0.0, 0.0, 0.0, 0.2);
    CHECK(r.value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == 1.0);

    r = update_uinf(0.0, 0.6, 0.2, 0.2);
    CHECK(r.value == doctest::Approx(0.6166666667).epsilon(1e-9));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == doctest::Approx(1.0 / 36.0).epsilon(1e-9));

    // Interior condition fails; the corner attains the maximum.
    r = update_uinf(0.5, 0.55, 0.52, 0.3);
    CHECK(r.value == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == 1.0);

    auto b = brute_force_update(0.0, 0.6, 0.2, 0.2, AdmissibleSet::LInf, Repr::U);
    CHECK(b.value == doctest::Approx(0.6166666667).epsilon(kOracleTol));
    CHECK(b.a2 == doctest::Approx(1.0 / 36.0).epsilon(1e-3));
}

TEST_CASE("v1 update: pinned values and the quadratic's largest root") {
    auto r = update_v1(0.0, 0.0, 0.2);
    CHECK(r.value == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(std::sqrt(r.value) == doctest::Approx(0.2));
    CHECK(r.a1 == doctest::Approx(0.5));

    r = update_v1(0.09, 0.01, 0.2);
    CHECK(r.value == doctest::Approx(0.133245553).epsilon(1e-8));
    CHECK(std::sqrt(r.value) == doctest::Approx(0.365028154).epsilon(1e-8));

    // Largest-root property: value solves v^2 - v (v01+v10+hf^2) + v01 v10 = 0.
    const double v = r.value;
    CHECK(v * v - v * (0.09 + 0.01 + 0.04) + 0.09 * 0.01 ==
          doctest::Approx(0.0).epsilon(1e-12));

    r = update_v1(0.37, 0.37, 0.0);
    CHECK(r.value == doctest::Approx(0.37).epsilon(1e-14));

    auto b = brute_force_update(0.0, 0.09, 0.01, 0.2, AdmissibleSet::L1, Repr::V);
    CHECK(b.value == doctest::Approx(0.133245553).epsilon(kOracleTol));
}

TEST_CASE("vinf update: interior branch and corner fallback") {
    // Interior branch with the derived feasibility condition.
    auto r = update_vinf(0.0, 0.25, 0.16, 0.2);
    CHECK(r.value == doctest::Approx(0.297619048).epsilon(1e-8));
    CHECK(std::sqrt(r.value) == doctest::Approx(0.545544726).epsilon(1e-8));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == doctest::Approx(0.190476190).epsilon(1e-8));
    auto b =
        brute_force_update(0.0, 0.25, 0.16, 0.2, AdmissibleSet::LInf, Repr::V);
    CHECK(r.value == doctest::Approx(b.value).epsilon(kOracleTol));
    CHECK(r.a2 == doctest::Approx(b.a2).epsilon(1e-3));

    // All-zero neighbours: the corner solves v = v00 + 2 sqrt(v) hf.
    r = update_vinf(0.0, 0.0, 0.0, 0.2);
    CHECK(r.value == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == 1.0);
    b = brute_force_update(0.0, 0.0, 0.0, 0.2, AdmissibleSet::LInf, Repr::V);
    CHECK(r.value == doctest::Approx(b.value).epsilon(kOracleTol));

    // Interior condition fails; corner value (hf + sqrt(hf^2 + v00))^2.
    r = update_vinf(0.04, 0.05, 0.045, 0.3);
    const double expect = std::pow(0.3 + std::sqrt(0.09 + 0.04), 2);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.a1 == 1.0);
    CHECK(r.a2 == 1.0);
    b = brute_force_update(0.04, 0.05, 0.045, 0.3, AdmissibleSet::LInf, Repr::V);
    CHECK(r.value == doctest::Approx(b.value).epsilon(kOracleTol));

    // hf = 0 keeps the plain interpolant maximum.
    r = update_vinf(0.2, 0.5, 0.3, 0.0);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("brute force with hf = 0 maximises the interpolant alone") {
    auto b = brute_force_update(0.0, 0.7, 0.3, 0.0, AdmissibleSet::L1, Repr::U);
    CHECK(b.value == doctest::Approx(0.7).epsilon(1e-9));
    b = brute_force_update(0.4, 0.7, 0.3, 0.0, AdmissibleSet::LInf, Repr::U);
    CHECK(b.value == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("closed forms match the brute-force oracle on random inputs") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> force(0.0, 0.5);
    for (int it = 0; it < 2000; ++it) {
        const double w00 = unit(rng);
        const double w01 = unit(rng);
        const double w10 = unit(rng);
        const double hf = force(rng);

        auto u1 = update_u1(w01, w10, hf);
        auto b = brute_force_update(w00, w01, w10, hf, AdmissibleSet::L1, Repr::U);
        REQUIRE(std::abs(u1.value - b.value) < kOracleTol);

        auto ui = update_uinf(w00, w01, w10, hf);
        b = brute_force_update(w00, w01, w10, hf, AdmissibleSet::LInf, Repr::U);
        REQUIRE(std::abs(ui.value - b.value) < kOracleTol);

        auto v1 = update_v1(w01, w10, hf);
        b = brute_force_update(w00, w01, w10, hf, AdmissibleSet::L1, Repr::V);
        REQUIRE(std::abs(v1.value - b.value) < kOracleTol);

        auto vi = update_vinf(w00, w01, w10, hf);
        b = brute_force_update(w00, w01, w10, hf, AdmissibleSet::LInf, Repr::V);
        REQUIRE(std::abs(vi.value - b.value) < kOracleTol);
    }
}

TEST_CASE("updates are monotone non-decreasing in every neighbour") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> bump(0.0, 0.3);
    for (int it = 0; it < 3000; ++it) {
        const double w00 = unit(rng), w01 = unit(rng), w10 = unit(rng);
        const double hf = 0.5 * unit(rng);
        const double e00 = bump(rng), e01 = bump(rng), e10 = bump(rng);
        CHECK(update_u1(w01 + e01, w10 + e10, hf).value >=
              update_u1(w01, w10, hf).value - 1e-14);
        CHECK(update_uinf(w00 + e00, w01 + e01, w10 + e10, hf).value >=
              update_uinf(w00, w01, w10, hf).value - 1e-14);
        CHECK(update_v1(w01 + e01, w10 + e10, hf).value >=
              update_v1(w01, w10, hf).value - 1e-14);
        CHECK(update_vinf(w00 + e00, w01 + e01, w10 + e10, hf).value >=
              update_vinf(w00, w01, w10, hf).value - 1e-14);
    }
}

TEST_CASE("maximisers reproduce the update value when re-inserted") {
    // alpha* must be the argmax of the interpolated functional, not a
    // rescaled variant: plugging it back must reproduce the value.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int it = 0; it < 500; ++it) {
        const double w00 = unit(rng);
        const double w01 = w00 + unit(rng);
        const double w10 = w00 + unit(rng);
        const double hf = 0.5 * unit(rng);

        auto r = update_u1(w01, w10, hf);
        const double g = (1.0 - r.a1) * w10 + r.a1 * w01;
        CHECK(g + hf * std::sqrt(r.a1 * r.a2) ==
              doctest::Approx(r.value).epsilon(1e-10));

        auto ri = update_uinf(w00, w01, w10, hf);
        const double gi = (ri.a1 + ri.a2 - 1.0) * w00 + (1.0 - ri.a1) * w10 +
                          (1.0 - ri.a2) * w01;
        CHECK(gi + hf * std::sqrt(ri.a1 * ri.a2) ==
              doctest::Approx(ri.value).epsilon(1e-10));

        auto rv = update_vinf(w00, w01, w10, hf);
        const double gv = (rv.a1 + rv.a2 - 1.0) * w00 + (1.0 - rv.a1) * w10 +
                          (1.0 - rv.a2) * w01;
        const double s = hf * std::sqrt(rv.a1 * rv.a2);
        CHECK(s + std::sqrt(s * s + std::max(gv, 0.0)) ==
              doctest::Approx(std::sqrt(rv.value)).epsilon(1e-10));
    }
}

TEST_CASE("filtered candidates and the residual gate") {
    CHECK(filtered_candidate_u(0.0, 0.0, 0.0, 0.0) == 0.0);
    CHECK(filtered_candidate_v(0.0, 0.0, 0.0, 0.0) == 0.0);

    // Candidate 0.2 sits far from the monotone value 0.6: rejected.
    bool accepted = true;
    auto r = update_filtered_u(0.0, 0.5, 0.5, 0.2, 0.2, 1.0, 0.01, &accepted);
    CHECK(filtered_candidate_u(0.0, 0.5, 0.5, 0.2) == doctest::Approx(0.2));
    CHECK(!accepted);
    CHECK(r.value == doctest::Approx(0.6).epsilon(1e-12));

    // Smooth data: candidate within the gate, accepted.
    accepted = false;
    r = update_filtered_u(0.0, 0.01, 0.01, 0.02, 0.02, 1.0, 0.01, &accepted);
    CHECK(accepted);
}
