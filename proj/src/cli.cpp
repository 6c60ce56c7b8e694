#include "pgfv/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgfv/harness.hpp"

namespace pgfv {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct MeshChoice {
    int n = 0;
    std::string mesh_files; // "path.node,path.ele"

    Mesh build() const {
        if ((n != 0) == !mesh_files.empty())
            throw UsageError("exactly one of --n and --mesh is required");
        if (n < 0) throw UsageError("--n must be a positive integer");
        if (n > 0) return build_structured(n);
        const auto comma = mesh_files.find(',');
        if (comma == std::string::npos)
            throw UsageError("--mesh expects '<node-file>,<ele-file>'");
        return load_mesh(read_file(mesh_files.substr(0, comma)),
                         read_file(mesh_files.substr(comma + 1)));
    }
};

void add_mesh_options(CLI::App* cmd, MeshChoice& mc) {
    cmd->add_option("--n", mc.n, "structured mesh refinement (unit square, n x n x 2 cells)");
    cmd->add_option("--mesh", mc.mesh_files, "mesh files as '<node-file>,<ele-file>'");
}

Closure parse_closure(const std::string& text) {
    if (text.empty() || text == "minnorm") return Closure::min_norm();
    if (text.rfind("fixed:", 0) == 0) {
        double t1 = 0.0, t2 = 0.0;
        char extra = 0;
        if (std::sscanf(text.c_str() + 6, "%lf,%lf%c", &t1, &t2, &extra) != 2)
            throw UsageError("--closure fixed expects 'fixed:t1,t2'");
        return Closure::fixed(t1, t2);
    }
    throw UsageError("unknown closure '" + text + "' (expected minnorm|fixed:t1,t2)");
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            levels.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("bad level '" + item + "' in --levels");
        }
    }
    if (levels.size() < 3) throw UsageError("--levels needs at least 3 ascending values");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) throw UsageError("--levels must be ascending");
    return levels;
}

std::string solution_csv(const Mesh& mesh, const DiscreteSolution& sol) {
    std::string csv = "cell_id,cx,cy,u\n";
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const Vec2 ctr = mesh.cell_centroid(c);
        csv += std::to_string(c) + "," + fmt(ctr.x) + "," + fmt(ctr.y) + "," +
               fmt(sol.u[c]) + "\n";
    }
    csv += "edge_id,flux\n";
    for (int a = 0; a < mesh.n_edges(); ++a)
        csv += std::to_string(a) + "," + fmt(sol.p[a]) + "\n";
    return csv;
}

std::string stencil_csv(const Mesh& mesh, const Closure& closure) {
    std::string csv =
        "edge_id,eta,alpha,beta,gamma,delta,residual_35,residual_36,nullspace_dim\n";
    for (int a = 0; a < mesh.n_edges(); ++a) {
        if (mesh.edges[a].boundary()) continue;
        const EdgeNeighborhood nb = edge_neighborhood(mesh, a);
        if (!nb.complete) continue;
        const ConstraintSystem sys = assemble_constraints(mesh, nb);
        const StencilCoefficients c = solve_stencil(sys, closure);
        csv += std::to_string(a) + "," + fmt(c.eta) + "," + fmt(c.alpha) + "," +
               fmt(c.beta) + "," + fmt(c.gamma) + "," + fmt(c.delta) + "," +
               fmt(norm(residual_vector_constraint(sys, c))) + "," +
               fmt(std::abs(residual_moment_constraint(sys, c))) + "," +
               std::to_string(nullspace_dimension(sys)) + "\n";
    }
    return csv;
}

Scheme parse_scheme(const std::string& name) {
    try {
        return scheme_from_name(name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

ManufacturedCase parse_case(const std::string& name) {
    try {
        return mms_case(name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

DiscreteSolution run_scheme(Scheme scheme, const Mesh& mesh, const ScalarField& f,
                            const Closure& closure) {
    switch (scheme) {
        case Scheme::Mixed: return solve_saddle(assemble_mixed(mesh, f));
        case Scheme::Tpfa: return solve_tpfa(mesh, f);
        case Scheme::Petrov: return solve_petrov_galerkin(mesh, f, closure);
    }
    throw Error("unreachable");
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Triangular-mesh Poisson solvers: classical RT0 mixed elements, "
                 "two-point finite volumes, and Petrov-Galerkin six-point finite "
                 "volumes built from dual Raviart-Thomas flux constraints."};
    app.require_subcommand(1);

    MeshChoice mesh_solve, mesh_stencil, mesh_validate, mesh_infsup;
    std::string scheme_s = "mixed", scheme_c = "mixed";
    std::string case_s = "sinsin", case_c = "sinsin";
    std::string closure_s, closure_c, closure_st;
    std::string out_solve, out_stencil, json_solve, json_converge, levels_text;
    bool quiet_solve = false, quiet_converge = false;

    CLI::App* solve = app.add_subcommand(
        "solve", "solve one case on one mesh; --out writes a CSV with a cell block "
                 "(cell_id,cx,cy,u) followed by an edge block (edge_id,flux)");
    add_mesh_options(solve, mesh_solve);
    solve->add_option("--scheme", scheme_s, "mixed|tpfa|petrov")->required();
    solve->add_option("--case", case_s, "sinsin|bubble");
    solve->add_option("--closure", closure_s, "minnorm|fixed:t1,t2 (petrov only)");
    solve->add_option("--out", out_solve, "solution CSV path");
    solve->add_option("--json", json_solve, "error-norm JSON path");
    solve->add_flag("--quiet", quiet_solve, "suppress normal output");

    CLI::App* converge = app.add_subcommand("converge", "refinement study over --levels");
    converge->add_option("--scheme", scheme_c, "mixed|tpfa|petrov")->required();
    converge->add_option("--case", case_c, "sinsin|bubble");
    converge->add_option("--levels", levels_text, "comma-separated ascending n values")
        ->required();
    converge->add_option("--closure", closure_c, "minnorm|fixed:t1,t2 (petrov only)");
    converge->add_option("--json", json_converge, "report JSON path");
    converge->add_flag("--quiet", quiet_converge, "suppress normal output");

    CLI::App* stencil = app.add_subcommand(
        "stencil", "export six-point stencil coefficients for every complete interior edge");
    add_mesh_options(stencil, mesh_stencil);
    stencil->add_option("--closure", closure_st, "minnorm|fixed:t1,t2");
    stencil->add_option("--out", out_stencil, "stencil CSV path")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "check mesh invariants");
    add_mesh_options(validate_cmd, mesh_validate);

    CLI::App* infsup = app.add_subcommand(
        "infsup", "dense inf-sup diagnostic for the classical Galerkin pair");
    add_mesh_options(infsup, mesh_infsup);

    std::vector<const char*> argv;
    argv.push_back("pgfv");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    if (solve->parsed()) {
        const Mesh mesh = mesh_solve.build();
        const ManufacturedCase mms = parse_case(case_s);
        const DiscreteSolution sol =
            run_scheme(parse_scheme(scheme_s), mesh, mms.f, parse_closure(closure_s));
        const ErrorNorms err = error_norms(mesh, sol, mms);
        if (!out_solve.empty()) write_file(out_solve, solution_csv(mesh, sol));
        if (!json_solve.empty()) {
            nlohmann::json j = {{"scheme", scheme_s},
                                {"case", mms.name},
                                {"e_u", err.e_u},
                                {"e_p", err.e_p},
                                {"e_div", err.e_div},
                                {"e_V", err.e_V}};
            write_file(json_solve, j.dump(2) + "\n");
        }
        if (!quiet_solve) {
            std::printf("cells=%d edges=%d method=%s residual=%.3e\n", mesh.n_cells(),
                        mesh.n_edges(), sol.stats.method.c_str(), sol.stats.residual);
            std::printf("e_u = %.12e\n", err.e_u);
            std::printf("e_p = %.12e\n", err.e_p);
            std::printf("e_div = %.12e\n", err.e_div);
            std::printf("e_V = %.12e\n", err.e_V);
        }
        return 0;
    }

    if (converge->parsed()) {
        const ConvergenceReport report =
            convergence_study(parse_scheme(scheme_c), parse_case(case_c),
                              parse_levels(levels_text), parse_closure(closure_c));
        if (!json_converge.empty()) write_file(json_converge, report_to_json(report));
        if (!quiet_converge) {
            std::printf("%6s %12s %12s %12s %12s %12s %9s\n", "n", "h", "e_u", "e_p",
                        "e_div", "e_V", "seconds");
            for (const auto& lvl : report.levels)
                std::printf("%6d %12.5e %12.5e %12.5e %12.5e %12.5e %9.3f\n", lvl.n,
                            lvl.h, lvl.err.e_u, lvl.err.e_p, lvl.err.e_div, lvl.err.e_V,
                            lvl.seconds);
            std::printf("rates: e_u=%.3f e_p=%.3f e_div=%.3f e_V=%.3f\n",
                        report.rates.e_u, report.rates.e_p, report.rates.e_div,
                        report.rates.e_V);
        }
        return 0;
    }

    if (stencil->parsed()) {
        const Mesh mesh = mesh_stencil.build();
        write_file(out_stencil, stencil_csv(mesh, parse_closure(closure_st)));
        return 0;
    }

    if (validate_cmd->parsed()) {
        const Mesh mesh = mesh_validate.build();
        const auto issues = validate(mesh);
        if (issues.empty()) {
            std::printf("mesh is valid (V=%d, E=%d, F=%d)\n", mesh.n_vertices(),
                        mesh.n_edges(), mesh.n_cells());
            return 0;
        }
        for (const auto& issue : issues)
            std::fprintf(stderr, "error: invariant violated: %s\n", issue.message.c_str());
        return 2;
    }

    if (infsup->parsed()) {
        const Mesh mesh = mesh_infsup.build();
        std::printf("infsup = %.12e\n", estimate_infsup(mesh));
        return 0;
    }
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args);
}

} // namespace pgfv
