#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "srvreg/diagnostics.hpp"
#include "srvreg/io.hpp"
#include "srvreg/samples.hpp"

using json = nlohmann::ordered_json;
using namespace srvreg;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string curve1, curve2;
    std::string scheme = "vinf";
    int grid_n = 320;
    double ddp_k = 0.75;
    double ddp_r = 0.5;
    double filter_k = 1.0;
    std::string f_source = "fd";
    int threads = 0;  // 0: resolve from SRVREG_THREADS, else 1
    bool t_column = false;
    std::string dump_grid;
    std::string dump_grid_bin;
    std::string out;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& o, bool curves = true) {
    if (curves) {
        cmd->add_option("curve1", o.curve1, "first curve CSV file")->required();
        cmd->add_option("curve2", o.curve2, "second curve CSV file")->required();
        cmd->add_flag("--t-column", o.t_column,
                      "first CSV column holds the curve parameter t");
    }
    cmd->add_option("--scheme", o.scheme,
                    "u1|uinf|v1|vinf|ddp|filtered-u|filtered-v");
    cmd->add_option("--grid-n", o.grid_n, "grid cells per axis (h = 1/N)");
    cmd->add_option("--ddp-k", o.ddp_k, "jump radius factor k h^{-r}");
    cmd->add_option("--ddp-r", o.ddp_r, "jump radius exponent in (0,1)");
    cmd->add_option("--filter-k", o.filter_k, "filter gate constant (x sqrt h)");
    cmd->add_option("--f-source", o.f_source,
                    "forcing source: exact (srv fields) or fd (curve differences)");
    cmd->add_option("--threads", o.threads,
                    "wavefront worker threads (env SRVREG_THREADS)");
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("SRVREG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

SchemeConfig make_config(const CommonOpts& o) {
    SchemeConfig cfg;
    cfg.scheme = scheme_from_name(o.scheme);
    cfg.ddp_k = o.ddp_k;
    cfg.ddp_r = o.ddp_r;
    cfg.filter_k = o.filter_k;
    if (o.f_source == "exact")
        cfg.f_source = FSource::ExactQ;
    else if (o.f_source == "fd")
        cfg.f_source = FSource::CurveFd;
    else
        throw ConfigError("unknown f source '" + o.f_source + "'");
    cfg.validate();
    if (o.grid_n < 2) throw ConfigError("grid needs N >= 2");
    return cfg;
}

Problem load_problem(const CommonOpts& o) {
    return Problem::from_curves(read_curve_csv(o.curve1, o.t_column),
                                read_curve_csv(o.curve2, o.t_column));
}

void maybe_dump(const CommonOpts& o, const SolveResult& res) {
    if (!o.dump_grid.empty()) write_grid_csv(o.dump_grid, res.value, res.policy);
    if (!o.dump_grid_bin.empty()) write_grid_binary(o.dump_grid_bin, res.value);
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write output file '" + out + "'");
    f << j.dump(2) << '\n';
}

int cmd_distance(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto prob = load_problem(o);
    const auto cfg = make_config(o);
    const GridSpec grid{o.grid_n};
    const auto res = solve(prob, grid, cfg, resolve_threads(o.threads));
    const auto path = backtrack(res.policy, grid);
    const double Jh = eval_Jh(path, prob.q1(), prob.q2());
    maybe_dump(o, res);
    const double wall = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    json j;
    j["scheme"] = o.scheme;
    j["N"] = o.grid_n;
    j["u_at_one"] = res.value.u_at_one();
    j["J_h"] = Jh;
    j["distance_from_u"] = shape_distance(res.value.u_at_one());
    j["distance_from_J"] = shape_distance(Jh);
    j["wall_ms"] = wall;
    emit(j, o.out);
    return 0;
}

int cmd_register(const CommonOpts& o) {
    if (o.out.empty()) throw ConfigError("register needs --out for the path CSV");
    const auto prob = load_problem(o);
    const auto cfg = make_config(o);
    const GridSpec grid{o.grid_n};
    const auto res = solve(prob, grid, cfg, resolve_threads(o.threads));
    const auto path = backtrack(res.policy, grid);
    maybe_dump(o, res);
    write_path_csv(o.out, path);
    const double Jh = eval_Jh(path, prob.q1(), prob.q2());
    json j;
    j["scheme"] = o.scheme;
    j["N"] = o.grid_n;
    j["points"] = path.point_count();
    j["J_h"] = Jh;
    j["distance_from_J"] = shape_distance(Jh);
    j["path_csv"] = o.out;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_geodesic(const CommonOpts& o, int tau_count) {
    if (o.out.empty())
        throw ConfigError("geodesic needs --out for the output directory");
    const auto prob = load_problem(o);
    const auto cfg = make_config(o);
    const GridSpec grid{o.grid_n};
    const auto res = solve(prob, grid, cfg, resolve_threads(o.threads));
    const auto path = backtrack(res.policy, grid);
    const auto geo = make_geodesic(path, prob.q1(), prob.q2(), tau_count);

    fs::create_directories(o.out);
    json manifest;
    manifest["distance"] = geo.distance;
    manifest["J_h"] = geo.Jh;
    manifest["taus"] = geo.tau_grid;
    json files = json::array();
    for (std::size_t k = 0; k < geo.curves.size(); ++k) {
        std::ostringstream name;
        name << "tau_" << k << ".csv";
        const std::string file = (fs::path(o.out) / name.str()).string();
        write_curve_csv(file, geo.curves[k], true);
        files.push_back(name.str());
    }
    manifest["files"] = files;
    const std::string mpath = (fs::path(o.out) / "manifest.json").string();
    emit(manifest, mpath);
    std::cout << manifest.dump(2) << '\n';
    return 0;
}

int cmd_converge(const CommonOpts& o, const std::string& n_list_str,
                 int reference_n, const std::string& reference_scheme,
                 const std::string& schemes_str) {
    const auto prob = load_problem(o);
    std::vector<int> n_list;
    {
        std::stringstream ss(n_list_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) n_list.push_back(std::stoi(tok));
    }
    std::vector<Scheme> schemes;
    {
        std::stringstream ss(schemes_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) schemes.push_back(scheme_from_name(tok));
    }
    if (o.f_source != "exact" && o.f_source != "fd")
        throw ConfigError("unknown f source '" + o.f_source + "'");
    const FSource fsrc =
        o.f_source == "exact" ? FSource::ExactQ : FSource::CurveFd;
    const auto rep =
        run_convergence(prob, schemes, n_list, reference_n,
                        scheme_from_name(reference_scheme), fsrc,
                        resolve_threads(o.threads));
    json j;
    j["reference_scheme"] = rep.reference_scheme;
    j["reference_n"] = rep.reference_n;
    json rows = json::array();
    std::ostringstream csv;
    csv << "scheme,N,wall_ms,linf_u_error,dist_u_error,dist_J_error,"
           "geodesic_error_bound\n";
    csv.precision(17);
    for (const auto& r : rep.rows) {
        json row;
        row["scheme"] = r.scheme;
        row["N"] = r.n;
        row["wall_ms"] = r.wall_ms;
        row["linf_u_error"] = r.linf_u_error;
        row["dist_u_error"] = r.dist_u_error;
        row["dist_J_error"] = r.dist_j_error;
        row["geodesic_error_bound"] = r.geodesic_error_bound;
        rows.push_back(row);
        csv << r.scheme << ',' << r.n << ',' << r.wall_ms << ','
            << r.linf_u_error << ',' << r.dist_u_error << ',' << r.dist_j_error
            << ',' << r.geodesic_error_bound << '\n';
    }
    j["rows"] = rows;
    if (!o.out.empty()) {
        std::ofstream cf(o.out + ".csv");
        if (!cf) throw InputError("cannot write '" + o.out + ".csv'");
        cf << csv.str();
        emit(j, o.out + ".json");
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_localmax(const CommonOpts& o, double plateau_rel) {
    const auto prob = load_problem(o);
    const auto cfg = make_config(o);
    const GridSpec grid{o.grid_n};
    const auto tv = total_value(prob, grid, cfg, resolve_threads(o.threads));
    const auto maxima = find_local_maxima(tv, plateau_rel * tv.max_value);
    json j;
    j["scheme"] = o.scheme;
    j["N"] = o.grid_n;
    j["plateau_tol"] = plateau_rel * tv.max_value;
    j["max_u_tot"] = tv.max_value;
    j["u_forward_at_one"] = tv.forward.value.u_at_one();
    json list = json::array();
    for (const auto& m : maxima) {
        json e;
        e["i"] = m.i;
        e["j"] = m.j;
        e["x1"] = grid.node(m.i);
        e["x2"] = grid.node(m.j);
        e["u_tot"] = tv.at(m.i, m.j);
        list.push_back(e);
    }
    j["maxima"] = list;
    emit(j, o.out);
    return 0;
}

int cmd_samples(const std::string& out_dir, int samples) {
    fs::create_directories(out_dir);
    const auto dir = fs::path(out_dir);
    write_curve_csv((dir / "segment.csv").string(), make_segment(samples));
    write_curve_csv((dir / "semicircle.csv").string(), make_semicircle(samples));
    write_curve_csv((dir / "scurve.csv").string(), make_s_curve(samples));
    const auto [m1, m2] = make_mobius_pair(samples);
    write_curve_csv((dir / "semicircle_psi1.csv").string(), m1);
    write_curve_csv((dir / "semicircle_psi2.csv").string(), m2);
    json j;
    j["dir"] = out_dir;
    j["files"] = {"segment.csv", "semicircle.csv", "scurve.csv",
                  "semicircle_psi1.csv", "semicircle_psi2.csv"};
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"square-root-velocity shape distances, registrations and "
                 "geodesics for open curves"};
    app.require_subcommand(1);

    CommonOpts od, orr, og, oc, ol;
    int tau_count = 7;
    double plateau_rel = 1e-3;
    std::string n_list = "20,40,80";
    int reference_n = 320;
    std::string reference_scheme = "filtered-v";
    std::string schemes = "u1,uinf,v1,vinf,ddp";
    std::string samples_dir;
    int samples_count = 257;

    auto* dist = app.add_subcommand("distance", "shape distance between two curves");
    add_solver_flags(dist, od);
    dist->add_option("--out", od.out, "write the JSON result here (default stdout)");
    dist->add_option("--dump-grid", od.dump_grid, "value/policy grid CSV dump");
    dist->add_option("--dump-grid-bin", od.dump_grid_bin, "binary value dump");

    auto* reg = app.add_subcommand("register", "optimal reparametrisation path");
    add_solver_flags(reg, orr);
    reg->add_option("--out", orr.out, "path CSV output file")->required();
    reg->add_option("--dump-grid", orr.dump_grid, "value/policy grid CSV dump");
    reg->add_option("--dump-grid-bin", orr.dump_grid_bin, "binary value dump");

    auto* geo = app.add_subcommand("geodesic", "shape-space geodesic export");
    add_solver_flags(geo, og);
    geo->add_option("--tau", tau_count, "number of tau samples on [0,1]");
    geo->add_option("--out", og.out, "output directory")->required();

    auto* conv = app.add_subcommand("converge", "convergence study vs a fine reference");
    add_solver_flags(conv, oc);
    conv->add_option("--n-list", n_list, "comma-separated grid sizes");
    conv->add_option("--reference-n", reference_n, "reference grid size");
    conv->add_option("--reference-scheme", reference_scheme, "reference scheme");
    conv->add_option("--schemes", schemes, "comma-separated schemes to run");
    conv->add_option("--out", oc.out, "basename for .csv/.json outputs");

    auto* lmax = app.add_subcommand("localmax", "local maxima of the total value function");
    add_solver_flags(lmax, ol);
    lmax->add_option("--plateau-tol", plateau_rel,
                     "plateau tolerance relative to max u_tot");
    lmax->add_option("--out", ol.out, "write the JSON result here");

    auto* smp = app.add_subcommand("samples", "write the bundled sample curves");
    smp->add_option("--out", samples_dir, "output directory")->required();
    smp->add_option("--samples", samples_count, "samples per curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 4;
    }

    try {
        if (dist->parsed()) return cmd_distance(od);
        if (reg->parsed()) return cmd_register(orr);
        if (geo->parsed()) return cmd_geodesic(og, tau_count);
        if (conv->parsed())
            return cmd_converge(oc, n_list, reference_n, reference_scheme,
                                schemes);
        if (lmax->parsed()) return cmd_localmax(ol, plateau_rel);
        if (smp->parsed()) return cmd_samples(samples_dir, samples_count);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
