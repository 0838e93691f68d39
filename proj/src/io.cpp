#include "srvreg/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "srvreg/errors.hpp"

namespace srvreg {

namespace {
constexpr std::array<char, 8> kGridMagic = {'S', 'R', 'V', 'G',
                                            'R', 'I', 'D', '\0'};

std::vector<double> parse_row(const std::string& line, int lineno) {
    std::vector<double> row;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // Trim spaces.
        const auto b = cell.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            throw InputError("empty cell at line " + std::to_string(lineno));
        const auto e = cell.find_last_not_of(" \t\r");
        cell = cell.substr(b, e - b + 1);
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw InputError("malformed number '" + cell + "' at line " +
                             std::to_string(lineno));
        }
        if (used != cell.size())
            throw InputError("malformed number '" + cell + "' at line " +
                             std::to_string(lineno));
        row.push_back(v);
    }
    return row;
}

}  // namespace

SampledCurve read_curve_csv(const std::string& path, bool t_column) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open curve file '" + path + "'");
    std::vector<double> pts;
    std::vector<double> params;
    int dim = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto row = parse_row(line, lineno);
        const int want = t_column ? static_cast<int>(row.size()) - 1
                                  : static_cast<int>(row.size());
        if (want < 1)
            throw InputError("too few columns at line " + std::to_string(lineno));
        if (dim < 0) dim = want;
        if (want != dim)
            throw InputError("inconsistent column count at line " +
                             std::to_string(lineno));
        std::size_t start = 0;
        if (t_column) {
            params.push_back(row[0]);
            start = 1;
        }
        pts.insert(pts.end(), row.begin() + start, row.end());
    }
    if (dim < 1 || pts.empty())
        throw InputError("curve file '" + path + "' holds no samples");
    const std::size_t m = pts.size() / static_cast<std::size_t>(dim);
    if (!t_column) return SampledCurve::uniform(std::move(pts), dim);
    if (params.size() != m)
        throw InputError("parameter column length mismatch in '" + path + "'");
    const double lo = params.front(), hi = params.back();
    if (!(hi > lo))
        throw InputError("parameter column must increase in '" + path + "'");
    for (double& t : params) t = (t - lo) / (hi - lo);
    return SampledCurve::create(std::move(pts), dim, std::move(params));
}

void write_curve_csv(const std::string& path, const SampledCurve& c,
                     bool with_t) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write curve file '" + path + "'");
    out << std::setprecision(17);
    for (int k = 0; k < c.sample_count(); ++k) {
        if (with_t) out << c.param(k) << ',';
        const auto p = c.point(k);
        for (int i = 0; i < c.dim(); ++i) {
            if (i) out << ',';
            out << p[i];
        }
        out << '\n';
    }
    if (!out) throw InputError("write failed for '" + path + "'");
}

void write_grid_csv(const std::string& path, const ValueField& value,
                    const PolicyField& policy) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write grid file '" + path + "'");
    out << std::setprecision(17);
    const int n = value.n();
    out << "i,j,u,alpha1,alpha2\n";
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double a1 = 0.0, a2 = 0.0;
            if (j == 0) {
                a1 = 1.0;
            } else if (i == 0) {
                a2 = 1.0;
            } else if (policy.is_lattice()) {
                const auto jp = policy.jump(i, j);
                a1 = jp.k;
                a2 = jp.l;
            } else {
                const auto a = policy.alpha(i - 1, j - 1);
                a1 = a.a1;
                a2 = a.a2;
            }
            out << i << ',' << j << ',' << value.u(i, j) << ',' << a1 << ','
                << a2 << '\n';
        }
    if (!out) throw InputError("write failed for '" + path + "'");
}

void write_grid_binary(const std::string& path, const ValueField& value) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write grid file '" + path + "'");
    out.write(kGridMagic.data(), kGridMagic.size());
    const std::uint64_t n = static_cast<std::uint64_t>(value.n());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (int i = 0; i <= value.n(); ++i)
        for (int j = 0; j <= value.n(); ++j) {
            const double u = value.u(i, j);
            out.write(reinterpret_cast<const char*>(&u), sizeof u);
        }
    if (!out) throw InputError("write failed for '" + path + "'");
}

ValueField read_grid_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open grid file '" + path + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), kGridMagic.data(), magic.size()) != 0)
        throw InputError("bad grid file magic in '" + path + "'");
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || n < 2 || n > (1u << 20))
        throw InputError("bad grid size in '" + path + "'");
    ValueField value(static_cast<int>(n), ValueKind::U);
    for (int i = 0; i <= value.n(); ++i)
        for (int j = 0; j <= value.n(); ++j) {
            double u = 0.0;
            in.read(reinterpret_cast<char*>(&u), sizeof u);
            if (!in) throw InputError("truncated grid file '" + path + "'");
            value.raw(i, j) = u;
        }
    return value;
}

void write_path_csv(const std::string& path, const ReparamPath& p) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write path file '" + path + "'");
    out << std::setprecision(17);
    out << "t,phi1,phi2\n";
    double t = 0.0;
    for (int k = 0; k < p.point_count(); ++k) {
        if (k > 0) t += p.dts()[k - 1];
        out << t << ',' << p.phi1()[k] << ',' << p.phi2()[k] << '\n';
    }
    if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace srvreg
