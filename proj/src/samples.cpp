#include "srvreg/samples.hpp"

#include <cmath>

#include "srvreg/errors.hpp"

namespace srvreg {

namespace {

SampledCurve from_fn(int samples, double (*fx)(double), double (*fy)(double)) {
    if (samples < 2) throw ConfigError("sample curves need >= 2 samples");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(samples) * 2);
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        pts.push_back(fx(t));
        pts.push_back(fy(t));
    }
    return SampledCurve::uniform(std::move(pts), 2);
}

}  // namespace

SampledCurve make_segment(int samples, double length, double dir_x,
                          double dir_y) {
    if (samples < 2) throw ConfigError("sample curves need >= 2 samples");
    const double nrm = std::hypot(dir_x, dir_y);
    if (!(nrm > 0.0) || !(length > 0.0))
        throw ConfigError("segment needs a direction and positive length");
    std::vector<double> pts;
    for (int k = 0; k < samples; ++k) {
        const double t = length * static_cast<double>(k) / (samples - 1);
        pts.push_back(t * dir_x / nrm);
        pts.push_back(t * dir_y / nrm);
    }
    return SampledCurve::uniform(std::move(pts), 2);
}

SampledCurve make_semicircle(int samples) {
    return from_fn(
        samples, [](double t) { return std::cos(M_PI * t); },
        [](double t) { return std::sin(M_PI * t); });
}

SampledCurve make_s_curve(int samples, double amplitude) {
    if (samples < 2) throw ConfigError("sample curves need >= 2 samples");
    std::vector<double> pts;
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        pts.push_back(t);
        pts.push_back(amplitude * std::sin(2.0 * M_PI * t));
    }
    return SampledCurve::uniform(std::move(pts), 2);
}

std::pair<SampledCurve, SampledCurve> make_mobius_pair(int samples) {
    if (samples < 2) throw ConfigError("sample curves need >= 2 samples");
    auto arc = [](double s) {
        return std::pair<double, double>{std::cos(M_PI * s), std::sin(M_PI * s)};
    };
    std::vector<double> a, b;
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        const double s1 = 3.0 * t / (1.0 + 2.0 * t);
        const double s2 = t / (3.0 - 2.0 * t);
        const auto [x1, y1] = arc(s1);
        a.push_back(x1);
        a.push_back(y1);
        const auto [x2, y2] = arc(s2);
        b.push_back(x2);
        b.push_back(y2);
    }
    return {SampledCurve::uniform(std::move(a), 2),
            SampledCurve::uniform(std::move(b), 2)};
}

}  // namespace srvreg
