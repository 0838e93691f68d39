#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "srvreg/errors.hpp"

namespace srvreg {

/// Square grid on [0,1]^2 with N cells per axis, h = 1/N.
struct GridSpec {
    int n = 320;

    double h() const { return 1.0 / n; }
    double node(int i) const { return static_cast<double>(i) / n; }
    void validate() const {
        if (n < 2) throw ConfigError("grid needs N >= 2 cells per axis");
    }
};

enum class ValueKind { U, VSquared };

/// (N+1) x (N+1) node values of the value-function estimate. V-form schemes
/// store v = u^2; u() converts on demand. Boundary rows/columns are zero.
class ValueField {
public:
    ValueField(int n, ValueKind kind)
        : n_(n), kind_(kind),
          data_(static_cast<std::size_t>(n + 1) * (n + 1), 0.0) {}

    int n() const { return n_; }
    ValueKind kind() const { return kind_; }

    double raw(int i, int j) const { return data_[idx(i, j)]; }
    double& raw(int i, int j) { return data_[idx(i, j)]; }
    const double* row(int i) const { return data_.data() + idx(i, 0); }
    double* row(int i) { return data_.data() + idx(i, 0); }

    double u(int i, int j) const {
        const double w = data_[idx(i, j)];
        return kind_ == ValueKind::U ? w : std::sqrt(w);
    }
    double u_at_one() const { return u(n_, n_); }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * (n_ + 1) + j;
    }
    int n_;
    ValueKind kind_;
    std::vector<double> data_;
};

struct CellAlpha {
    double a1 = 0.0, a2 = 0.0;
};

struct LatticeJump {
    std::int32_t k = 0, l = 0;
};

/// Per-cell optimal directions for the semi-discrete schemes, or per-node
/// optimal jumps for the fully discretised scheme.
class PolicyField {
public:
    static PolicyField alphas(int n) {
        PolicyField p;
        p.n_ = n;
        p.alpha_.assign(static_cast<std::size_t>(n) * n, {});
        return p;
    }
    static PolicyField jumps(int n) {
        PolicyField p;
        p.n_ = n;
        p.jump_.assign(static_cast<std::size_t>(n + 1) * (n + 1), {});
        return p;
    }

    int n() const { return n_; }
    bool is_lattice() const { return !jump_.empty(); }

    // cell (ci, cj), 0 <= ci, cj < N; the cell's upper-right node is (ci+1, cj+1)
    CellAlpha alpha(int ci, int cj) const {
        return alpha_[static_cast<std::size_t>(ci) * n_ + cj];
    }
    void set_alpha(int ci, int cj, CellAlpha a) {
        alpha_[static_cast<std::size_t>(ci) * n_ + cj] = a;
    }

    LatticeJump jump(int i, int j) const {
        return jump_[static_cast<std::size_t>(i) * (n_ + 1) + j];
    }
    void set_jump(int i, int j, LatticeJump v) {
        jump_[static_cast<std::size_t>(i) * (n_ + 1) + j] = v;
    }

private:
    PolicyField() = default;
    int n_ = 0;
    std::vector<CellAlpha> alpha_;
    std::vector<LatticeJump> jump_;
};

}  // namespace srvreg
