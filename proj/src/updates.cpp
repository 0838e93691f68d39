#include "srvreg/updates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "srvreg/errors.hpp"

namespace srvreg {

UpdateResult update_u1(double u01, double u10, double hf) {
    const double diff = u01 - u10;
    const double root = std::sqrt(diff * diff + hf * hf);
    UpdateResult r;
    r.value = 0.5 * (u01 + u10 + root);
    if (root > 0.0) {
        r.a1 = 0.5 * (1.0 + diff / root);
        r.a2 = 1.0 - r.a1;
    } else {
        r.a1 = r.a2 = 0.5;
    }
    return r;
}

UpdateResult update_uinf(double u00, double u01, double u10, double hf) {
    const double ustar = std::max(u01, u10);
    UpdateResult r;
    if (2.0 * (ustar - u00) > hf) {
        const double s = hf / (2.0 * (ustar - u00));
        r.value = ustar + 0.25 * hf * hf / (ustar - u00);
        // Ties pick the u01 branch.
        if (u01 >= u10) {
            r.a1 = 1.0;
            r.a2 = s * s;
        } else {
            r.a1 = s * s;
            r.a2 = 1.0;
        }
    } else {
        r.value = u00 + hf;
        r.a1 = r.a2 = 1.0;
    }
    return r;
}

UpdateResult update_v1(double v01, double v10, double hf) {
    const double p2 = hf * hf;
    const double diff = v01 - v10;
    const double disc = diff * diff + 2.0 * (v01 + v10) * p2 + p2 * p2;
    UpdateResult r;
    r.value = 0.5 * (v01 + v10 + p2 + std::sqrt(disc));
    const double denom = std::sqrt(diff * diff + 4.0 * r.value * p2);
    if (denom > 0.0) {
        r.a1 = 0.5 * (1.0 + diff / denom);
        r.a2 = 1.0 - r.a1;
    } else {
        r.a1 = r.a2 = 0.5;
    }
    return r;
}

UpdateResult update_vinf(double v00, double v01, double v10, double hf) {
    const double vstar = std::max(v01, v10);
    const double z = vstar - v00;
    const double p2 = hf * hf;
    UpdateResult r;
    if (z > p2 && vstar * p2 <= z * (z - p2)) {
        r.value = vstar * z / (z - p2);
        const double a = r.value * p2 / (z * z);
        if (v01 >= v10) {
            r.a1 = 1.0;
            r.a2 = a;
        } else {
            r.a1 = a;
            r.a2 = 1.0;
        }
    } else {
        const double root = hf + std::sqrt(p2 + v00);
        r.value = root * root;
        r.a1 = r.a2 = 1.0;
    }
    return r;
}

double filtered_candidate_u(double u00, double u01, double u10, double hf) {
    const double diff = u01 - u10;
    return u00 + std::sqrt(diff * diff + hf * hf);
}

double filtered_candidate_v(double v00, double v01, double v10, double hf) {
    const double p2 = hf * hf;
    const double diff = v01 - v10;
    return v00 + 0.5 * p2 +
           std::sqrt(diff * diff + (2.0 * v00 + v01 + v10) * p2 + 0.25 * p2 * p2);
}

UpdateResult update_filtered_u(double u00, double u01, double u10, double hf,
                               double hf_c, double filter_k, double h,
                               bool* accepted) {
    const UpdateResult mono = update_u1(u01, u10, hf);
    const double cand = filtered_candidate_u(u00, u01, u10, hf_c);
    const double residual = (cand - mono.value) / h;
    const bool take = std::abs(residual) <= filter_k * std::sqrt(h);
    if (accepted) *accepted = take;
    if (!take) return mono;
    UpdateResult r;
    r.value = cand;
    const double diff = u01 - u10;
    const double root = std::sqrt(diff * diff + hf_c * hf_c);
    if (root > 0.0) {
        r.a1 = 0.5 * (1.0 + diff / root);
        r.a2 = 1.0 - r.a1;
    } else {
        r.a1 = r.a2 = 0.5;
    }
    return r;
}

UpdateResult update_filtered_v(double v00, double v01, double v10, double hf,
                               double hf_c, double filter_k, double h,
                               bool* accepted) {
    const UpdateResult mono = update_v1(v01, v10, hf);
    const double cand = filtered_candidate_v(v00, v01, v10, hf_c);
    const double residual =
        cand > 0.0 ? (cand - mono.value) / (2.0 * h * std::sqrt(cand)) : 0.0;
    const bool take = std::abs(residual) <= filter_k * std::sqrt(h);
    if (accepted) *accepted = take;
    if (!take) return mono;
    UpdateResult r;
    r.value = cand;
    const double diff = v01 - v10;
    const double denom = std::sqrt(diff * diff + 4.0 * cand * hf_c * hf_c);
    if (denom > 0.0) {
        r.a1 = 0.5 * (1.0 + diff / denom);
        r.a2 = 1.0 - r.a1;
    } else {
        r.a1 = r.a2 = 0.5;
    }
    return r;
}

std::vector<LatticeJump> admissible_jumps(double radius) {
    if (radius < 1.0)
        throw ConfigError("admissible jump set is empty (radius < 1)");
    const int kmax = static_cast<int>(std::floor(radius));
    std::vector<LatticeJump> jumps;
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= kmax; ++l) {
            if (k == 0 && l == 0) continue;
            if (static_cast<double>(k) * k + static_cast<double>(l) * l <=
                radius * radius)
                jumps.push_back({k, l});
        }
    return jumps;
}

std::pair<double, LatticeJump> update_ddp(
    const ValueField& u, int i, int j, std::span<const LatticeJump> jumps,
    const std::function<double(int, int)>& increment) {
    double best = 0.0;
    LatticeJump bj{0, 0};
    bool found = false;
    for (const auto& jp : jumps) {
        if (jp.k > i || jp.l > j) continue;
        const double inc =
            (jp.k == 0 || jp.l == 0) ? 0.0 : increment(jp.k, jp.l);
        const double cand = u.raw(i - jp.k, j - jp.l) + inc;
        if (!found || cand > best) {
            best = cand;
            bj = jp;
            found = true;
        }
    }
    if (!found) return {0.0, {0, 0}};  // only at the origin
    return {std::max(best, 0.0), bj};
}

namespace {

// Maximise a smooth 1-D functional on [0,1]: dense scan then shrinking local
// grids around the incumbent.
std::pair<double, double> scan_max(const std::function<double(double)>& fn,
                                   int samples) {
    double best_x = 0.0, best_v = fn(0.0);
    for (int k = 1; k <= samples; ++k) {
        const double x = static_cast<double>(k) / samples;
        const double v = fn(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double width = 1.0 / samples;
    for (int round = 0; round < 14; ++round) {
        const double lo = std::max(0.0, best_x - width);
        const double hi = std::min(1.0, best_x + width);
        constexpr int kPts = 32;
        for (int k = 0; k <= kPts; ++k) {
            const double x = lo + (hi - lo) * k / kPts;
            const double v = fn(x);
            if (v > best_v) {
                best_v = v;
                best_x = x;
            }
        }
        width *= 3.0 / kPts;
    }
    return {best_x, best_v};
}

}  // namespace

UpdateResult brute_force_update(double u00, double u01, double u10, double hf,
                                AdmissibleSet set, Repr repr, int samples) {
    if (samples < 8) throw ConfigError("brute-force oracle needs >= 8 samples");
    UpdateResult r;
    if (set == AdmissibleSet::L1) {
        // alpha = (a, 1-a); the diagonal corner value v00/u00 never enters.
        auto fn = [&](double a) {
            const double s = std::sqrt(std::max(a * (1.0 - a), 0.0));
            if (repr == Repr::U) return (1.0 - a) * u10 + a * u01 + hf * s;
            const double g2 = std::max((1.0 - a) * u10 + a * u01, 0.0);
            return hf * s + std::sqrt(hf * hf * a * (1.0 - a) + g2);
        };
        auto [a, v] = scan_max(fn, samples);
        r.a1 = a;
        r.a2 = 1.0 - a;
        r.value = repr == Repr::U ? v : v * v;
        return r;
    }
    // Max-norm set: two edges alpha = (1, a) and alpha = (a, 1).
    auto edge = [&](double a, double u_adj) {
        if (repr == Repr::U) return a * u00 + (1.0 - a) * u_adj + hf * std::sqrt(a);
        const double g2 = std::max(a * u00 + (1.0 - a) * u_adj, 0.0);
        return hf * std::sqrt(a) + std::sqrt(hf * hf * a + g2);
    };
    auto [a1, v1] = scan_max([&](double a) { return edge(a, u01); }, samples);
    auto [a2, v2] = scan_max([&](double a) { return edge(a, u10); }, samples);
    // Ties resolve to the u01 edge, matching the closed forms.
    if (v1 >= v2) {
        r.a1 = 1.0;
        r.a2 = a1;
        r.value = repr == Repr::U ? v1 : v1 * v1;
    } else {
        r.a1 = a2;
        r.a2 = 1.0;
        r.value = repr == Repr::U ? v2 : v2 * v2;
    }
    return r;
}

}  // namespace srvreg
