#pragma once

#include <string>

#include "srvreg/curve.hpp"
#include "srvreg/grid.hpp"
#include "srvreg/registration.hpp"

namespace srvreg {

/// Curve CSV: one sample per row, d decimal columns, optional leading comment
/// lines starting with '#'. With t_column set, the first data column holds
/// the parameter; parameters are affinely normalised to [0,1].
SampledCurve read_curve_csv(const std::string& path, bool t_column = false);
void write_curve_csv(const std::string& path, const SampledCurve& c,
                     bool with_t = false);

/// Grid dump: rows (i, j, u, alpha1, alpha2); boundary cells carry the
/// convention directions, and lattice policies report their integer jumps
/// in the alpha columns.
void write_grid_csv(const std::string& path, const ValueField& value,
                    const PolicyField& policy);

/// Binary value dump: 8-byte magic "SRVGRID\0", u64 N, then (N+1)^2 row-major
/// f64 node values on the u scale.
void write_grid_binary(const std::string& path, const ValueField& value);
ValueField read_grid_binary(const std::string& path);

/// Path CSV: rows (t_k, phi1_k, phi2_k) with t_k the cumulative dt.
void write_path_csv(const std::string& path, const ReparamPath& p);

}  // namespace srvreg
