#include "pgfv/harness.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include <json.hpp>

namespace pgfv {

ManufacturedCase mms_case(const std::string& name) {
    const double pi = std::acos(-1.0);
    if (name == "sinsin") {
        ManufacturedCase c;
        c.name = "sinsin";
        c.u_exact = [pi](Vec2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
        c.p_exact = [pi](Vec2 x) -> Vec2 {
            return {pi * std::cos(pi * x.x) * std::sin(pi * x.y),
                    pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
        };
        c.f = [pi](Vec2 x) {
            return 2.0 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y);
        };
        return c;
    }
    if (name == "bubble") {
        ManufacturedCase c;
        c.name = "bubble";
        c.u_exact = [](Vec2 x) { return x.x * (1.0 - x.x) * x.y * (1.0 - x.y); };
        c.p_exact = [](Vec2 x) -> Vec2 {
            return {(1.0 - 2.0 * x.x) * x.y * (1.0 - x.y),
                    x.x * (1.0 - x.x) * (1.0 - 2.0 * x.y)};
        };
        c.f = [](Vec2 x) {
            return 2.0 * (x.x * (1.0 - x.x) + x.y * (1.0 - x.y));
        };
        return c;
    }
    throw Error("unknown manufactured case '" + name + "' (expected sinsin|bubble)");
}

ErrorNorms error_norms(const Mesh& mesh, const DiscreteSolution& sol,
                       const ManufacturedCase& mms) {
    ErrorNorms e;
    double su = 0.0, sp = 0.0, sd = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const TriGeom& geom = mesh.cell_geom(c);
        const double uc = sol.u[c];
        su += quadrature_triangle(
            [&](Vec2 x) {
                const double d = mms.u_exact(x) - uc;
                return d * d;
            },
            geom, 5);
        sp += quadrature_triangle(
            [&](Vec2 x) {
                return norm_sq(mms.p_exact(x) - eval_field_in_cell(mesh, sol.p, c, x));
            },
            geom, 5);
        const double divc = field_cell_divergence(mesh, sol.p, c);
        sd += quadrature_triangle(
            [&](Vec2 x) {
                const double d = -mms.f(x) - divc;
                return d * d;
            },
            geom, 5);
    }
    e.e_u = std::sqrt(su);
    e.e_p = std::sqrt(sp);
    e.e_div = std::sqrt(sd);
    e.e_V = std::sqrt(su + sp + sd);
    return e;
}

double cell_center_error(const Mesh& mesh, const std::vector<double>& u,
                         const ScalarField& u_exact) {
    double s = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const double d = u[c] - u_exact(mesh.cell_geom(c).circumcenter);
        s += mesh.cell_area(c) * d * d;
    }
    return std::sqrt(s);
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& e) {
    const int n = static_cast<int>(h.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(e[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

double rate_with_coarse_guard(const std::vector<double>& h, std::vector<double> e) {
    std::vector<double> hh = h;
    if (e.size() >= 3 && e[0] <= e[1]) { // preasymptotic coarsest level
        hh.erase(hh.begin());
        e.erase(e.begin());
    }
    return fit_rate(hh, e);
}

} // namespace

ConvergenceReport convergence_study(Scheme scheme, const ManufacturedCase& mms,
                                    const std::vector<int>& levels,
                                    const Closure& closure) {
    if (levels.size() < 3) throw Error("convergence study needs at least 3 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) throw Error("levels must be ascending");

    ConvergenceReport report;
    report.scheme = scheme_name(scheme);
    report.mms = mms.name;

    for (int n : levels) {
        const Mesh mesh = build_structured(n);
        ConvergenceLevel lvl;
        lvl.n = n;
        lvl.h = 0.0;
        for (int c = 0; c < mesh.n_cells(); ++c)
            lvl.h = std::max(lvl.h, mesh.cell_geom(c).diameter);
        const auto t0 = std::chrono::steady_clock::now();
        DiscreteSolution sol;
        try {
            switch (scheme) {
                case Scheme::Mixed: sol = solve_saddle(assemble_mixed(mesh, mms.f)); break;
                case Scheme::Tpfa: sol = solve_tpfa(mesh, mms.f); break;
                case Scheme::Petrov: sol = solve_petrov_galerkin(mesh, mms.f, closure); break;
            }
        } catch (const Error& err) {
            throw SolverError("level n=" + std::to_string(n) + ": " + err.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        lvl.seconds = std::chrono::duration<double>(t1 - t0).count();
        lvl.err = error_norms(mesh, sol, mms);
        report.levels.push_back(lvl);
    }

    std::vector<double> h, eu, ep, ed, ev;
    for (const auto& lvl : report.levels) {
        h.push_back(lvl.h);
        eu.push_back(lvl.err.e_u);
        ep.push_back(lvl.err.e_p);
        ed.push_back(lvl.err.e_div);
        ev.push_back(lvl.err.e_V);
    }
    report.rates.e_u = rate_with_coarse_guard(h, eu);
    report.rates.e_p = rate_with_coarse_guard(h, ep);
    report.rates.e_div = rate_with_coarse_guard(h, ed);
    report.rates.e_V = rate_with_coarse_guard(h, ev);
    return report;
}

std::string report_to_json(const ConvergenceReport& report) {
    nlohmann::json j;
    j["scheme"] = report.scheme;
    j["case"] = report.mms;
    j["levels"] = nlohmann::json::array();
    for (const auto& lvl : report.levels) {
        j["levels"].push_back({{"n", lvl.n},
                               {"h", lvl.h},
                               {"e_u", lvl.err.e_u},
                               {"e_p", lvl.err.e_p},
                               {"e_div", lvl.err.e_div},
                               {"e_V", lvl.err.e_V},
                               {"seconds", lvl.seconds}});
    }
    j["rates"] = {{"e_u", report.rates.e_u},
                  {"e_p", report.rates.e_p},
                  {"e_div", report.rates.e_div},
                  {"e_V", report.rates.e_V}};
    return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ConvergenceReport report;
    report.scheme = j.at("scheme").get<std::string>();
    report.mms = j.at("case").get<std::string>();
    for (const auto& item : j.at("levels")) {
        ConvergenceLevel lvl;
        lvl.n = item.at("n").get<int>();
        lvl.h = item.at("h").get<double>();
        lvl.err.e_u = item.at("e_u").get<double>();
        lvl.err.e_p = item.at("e_p").get<double>();
        lvl.err.e_div = item.at("e_div").get<double>();
        lvl.err.e_V = item.at("e_V").get<double>();
        lvl.seconds = item.at("seconds").get<double>();
        report.levels.push_back(lvl);
    }
    report.rates.e_u = j.at("rates").at("e_u").get<double>();
    report.rates.e_p = j.at("rates").at("e_p").get<double>();
    report.rates.e_div = j.at("rates").at("e_div").get<double>();
    report.rates.e_V = j.at("rates").at("e_V").get<double>();
    return report;
}

double estimate_infsup(const Mesh& mesh) {
    const int ne = mesh.n_edges();
    const int nf = mesh.n_cells();
    if (ne + nf > 2000)
        throw SolverError("mesh too large for the dense inf-sup diagnostic (E+F = " +
                          std::to_string(ne + nf) + " > 2000)");

    const SaddleSystem sys = assemble_mixed(mesh, [](Vec2) { return 0.0; });
    const Eigen::MatrixXd m = Eigen::MatrixXd(sys.M);
    const Eigen::MatrixXd b = Eigen::MatrixXd(sys.B);

    // form matrix in the (u, p) ordering and the V-norm Gram matrix
    const int dim = nf + ne;
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(dim, dim);
    gamma.topRightCorner(nf, ne) = b;
    gamma.bottomLeftCorner(ne, nf) = b.transpose();
    gamma.bottomRightCorner(ne, ne) = m;

    Eigen::VectorXd areas(nf);
    for (int c = 0; c < nf; ++c) areas(c) = mesh.cell_area(c);
    Eigen::MatrixXd vnorm = Eigen::MatrixXd::Zero(dim, dim);
    vnorm.topLeftCorner(nf, nf) = areas.asDiagonal();
    vnorm.bottomRightCorner(ne, ne) =
        m + b.transpose() * areas.cwiseInverse().asDiagonal() * b;

    const Eigen::LLT<Eigen::MatrixXd> llt(vnorm);
    if (llt.info() != Eigen::Success)
        throw SolverError("V-norm Gram matrix is not positive definite");
    const auto l = llt.matrixL();
    Eigen::MatrixXd scaled = l.solve(gamma);
    scaled = l.solve(scaled.transpose()).eval();
    scaled = 0.5 * (scaled + scaled.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
    return eig.eigenvalues().cwiseAbs().minCoeff();
}

} // namespace pgfv
