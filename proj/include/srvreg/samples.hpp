#pragma once

#include <utility>

#include "srvreg/curve.hpp"

namespace srvreg {

// Documented synthetic test curves (planar, sampled).

/// Straight segment from the origin along `dir` with the given length.
SampledCurve make_segment(int samples, double length = 1.0, double dir_x = 1.0,
                          double dir_y = 0.0);

/// Unit-speed upper semicircle (cos pi t, sin pi t).
SampledCurve make_semicircle(int samples);

/// Sine arch (t, a sin(2 pi t)); not unit speed.
SampledCurve make_s_curve(int samples, double amplitude = 0.3);

/// The semicircle composed with the two mutually inverse Moebius maps,
/// sampled analytically: equal shapes with different parametrisations.
std::pair<SampledCurve, SampledCurve> make_mobius_pair(int samples);

}  // namespace srvreg
