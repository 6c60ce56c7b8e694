#include "pgfv/stencil.hpp"

#include <cmath>

#include "pgfv/errors.hpp"

namespace pgfv {

StencilFrame stencil_frame(const Mesh& mesh, const EdgeNeighborhood& nb) {
    if (!nb.complete)
        throw StencilError("neighborhood is incomplete (outer triangle on the boundary)",
                           nb.edge);
    StencilFrame f;
    f.S = mesh.vertices[nb.S];
    f.N = mesh.vertices[nb.N];
    f.W = mesh.vertices[nb.W];
    f.E = mesh.vertices[nb.E];
    f.A = mesh.vertices[nb.A];
    f.B = mesh.vertices[nb.B];
    f.C = mesh.vertices[nb.C];
    f.D = mesh.vertices[nb.D];
    f.cK = mesh.cell_centroid(nb.K);
    f.cL = mesh.cell_centroid(nb.L);
    f.cM = mesh.cell_centroid(nb.M);
    f.cP = mesh.cell_centroid(nb.P);
    f.cQ = mesh.cell_centroid(nb.Q);
    f.cR = mesh.cell_centroid(nb.R);
    f.rhoK = mesh.cell_geom(nb.K).gyration_radius;
    f.rhoL = mesh.cell_geom(nb.L).gyration_radius;
    f.rhoM = mesh.cell_geom(nb.M).gyration_radius;
    f.rhoP = mesh.cell_geom(nb.P).gyration_radius;
    f.rhoQ = mesh.cell_geom(nb.Q).gyration_radius;
    f.rhoR = mesh.cell_geom(nb.R).gyration_radius;
    const Vec2 sn = f.N - f.S;
    f.len_sn = norm(sn);
    f.n_sn = perp_cw(sn / f.len_sn);
    f.O = 0.5 * (f.S + f.N);
    return f;
}

ConstraintSystem assemble_constraints(const Mesh& mesh, const EdgeNeighborhood& nb) {
    ConstraintSystem sys;
    sys.neighborhood = nb;
    sys.frame = stencil_frame(mesh, nb);
    const StencilFrame& f = sys.frame;
    sys.scale = f.len_sn;

    const Vec2 KL = f.cL - f.cK;
    const Vec2 LM = f.cM - f.cL;
    const Vec2 KP = f.cP - f.cK;
    const Vec2 KQ = f.cQ - f.cK;
    const Vec2 LR = f.cR - f.cL;

    sys.matrix << KL.x, LM.x, KP.x, KQ.x, LR.x,
                  KL.y, LM.y, KP.y, KQ.y, LR.y,
                  0.0,
                  dot(LM, f.A - f.W),
                  dot(KP, f.B - f.E),
                  dot(KQ, f.C - f.E),
                  dot(LR, f.D - f.W);
    sys.rhs << f.len_sn * f.n_sn.x,
               f.len_sn * f.n_sn.y,
               -3.0 * f.len_sn * dot(f.n_sn, (f.cL - f.O) + (f.cK - f.O));
    return sys;
}

namespace {

struct EquilibratedSvd {
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 5>> svd;
    Eigen::Vector3d rhs;
};

// Non-dimensionalize (coordinates by 1/|SN|), equilibrate rows to unit norm,
// factor. Row scalings leave the solution set untouched; they only make the
// rank test meaningful across the mixed dimensions of the two constraints.
EquilibratedSvd factor(const ConstraintSystem& sys) {
    Eigen::Matrix<double, 3, 5> a = sys.matrix;
    Eigen::Vector3d b = sys.rhs;
    const double s = sys.scale;
    a.topRows(2) /= s;
    b.head(2) /= s;
    a.row(2) /= s * s;
    b(2) /= s * s;
    for (int i = 0; i < 3; ++i) {
        const double r = a.row(i).norm();
        if (r > 0.0) {
            a.row(i) /= r;
            b(i) /= r;
        }
    }
    EquilibratedSvd out;
    out.svd.compute(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.rhs = b;
    return out;
}

bool full_rank(const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 5>>& svd) {
    const auto& sig = svd.singularValues();
    return sig(0) > 0.0 && sig(2) / sig(0) > 1e-10;
}

Eigen::Matrix<double, 5, 2> nullspace_of(
    const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 5>>& svd) {
    Eigen::Matrix<double, 5, 2> ns;
    ns.col(0) = svd.matrixV().col(3);
    ns.col(1) = svd.matrixV().col(4);
    // deterministic sign: largest-magnitude component positive
    for (int j = 0; j < 2; ++j) {
        int imax = 0;
        ns.col(j).cwiseAbs().maxCoeff(&imax);
        if (ns(imax, j) < 0.0) ns.col(j) = -ns.col(j);
    }
    return ns;
}

} // namespace

StencilCoefficients solve_stencil(const ConstraintSystem& sys, const Closure& closure) {
    EquilibratedSvd eq = factor(sys);
    if (!full_rank(eq.svd))
        throw StencilError("stencil constraint system is rank deficient",
                           sys.neighborhood.edge);

    const auto& sig = eq.svd.singularValues();
    const Eigen::Vector3d utb = eq.svd.matrixU().transpose() * eq.rhs;
    Eigen::Matrix<double, 5, 1> x =
        eq.svd.matrixV().leftCols<3>() * (utb.array() / sig.array()).matrix();

    if (closure.kind == Closure::Kind::Fixed) {
        const Eigen::Matrix<double, 5, 2> ns = nullspace_of(eq.svd);
        x += closure.t1 * ns.col(0) + closure.t2 * ns.col(1);
    }
    return {x(0), x(1), x(2), x(3), x(4)};
}

namespace {

Eigen::Matrix<double, 5, 1> as_vector(const StencilCoefficients& c) {
    Eigen::Matrix<double, 5, 1> x;
    x << c.eta, c.alpha, c.beta, c.gamma, c.delta;
    return x;
}

} // namespace

Vec2 residual_vector_constraint(const ConstraintSystem& sys,
                                const StencilCoefficients& c) {
    const Eigen::Vector3d r = sys.matrix * as_vector(c) - sys.rhs;
    return {r(0), r(1)};
}

double residual_moment_constraint(const ConstraintSystem& sys,
                                  const StencilCoefficients& c) {
    const Eigen::Vector3d r = sys.matrix * as_vector(c) - sys.rhs;
    return r(2);
}

double moment_constraint_scale(const ConstraintSystem& sys) {
    const StencilFrame& f = sys.frame;
    return 3.0 * f.len_sn * (norm(f.cL - f.O) + norm(f.cK - f.O));
}

int nullspace_dimension(const ConstraintSystem& sys) {
    EquilibratedSvd eq = factor(sys);
    const auto& sig = eq.svd.singularValues();
    int rank = 0;
    for (int i = 0; i < 3; ++i)
        if (sig(0) > 0.0 && sig(i) / sig(0) > 1e-10) ++rank;
    return 5 - rank;
}

Eigen::Matrix<double, 5, 2> nullspace_basis(const ConstraintSystem& sys) {
    EquilibratedSvd eq = factor(sys);
    if (!full_rank(eq.svd))
        throw StencilError("stencil constraint system is rank deficient",
                           sys.neighborhood.edge);
    return nullspace_of(eq.svd);
}

double gradient_six_point(const StencilCoefficients& c, double u_K, double u_L,
                          double u_M, double u_P, double u_Q, double u_R) {
    return c.eta * (u_L - u_K) + c.alpha * (u_M - u_L) + c.beta * (u_P - u_K) +
           c.gamma * (u_Q - u_K) + c.delta * (u_R - u_L);
}

double eta1_from_L(const StencilFrame& f, const StencilCoefficients& c) {
    const Vec2 v = (f.cL - f.S) * c.eta + (f.cM - f.cL) * c.alpha +
                   (f.cR - f.cL) * c.delta;
    return dot(v, f.N - f.S) / f.len_sn;
}

double eta1_from_K(const StencilFrame& f, const StencilCoefficients& c) {
    const Vec2 v = (f.cK - f.S) * c.eta - (f.cP - f.cK) * c.beta -
                   (f.cQ - f.cK) * c.gamma;
    return dot(v, f.N - f.S) / f.len_sn;
}

Eta2Pair eta2_pair(const StencilFrame& f, const StencilCoefficients& c) {
    Eta2Pair out;
    const Vec2 SA = f.A - f.S, ND = f.D - f.N, SB = f.B - f.S, NC = f.C - f.N;
    out.from_L = (f.rhoL * f.rhoL + norm_sq(f.cL - f.S)) * c.eta +
                 dot(SA, (f.E - f.S) + SA + (f.N - f.S)) / 6.0 * c.alpha +
                 dot(ND, (f.D - f.S) + (f.E - f.S) + (f.N - f.S)) / 6.0 * c.delta;
    out.tilde_from_L = (f.rhoL * f.rhoL + norm_sq(f.cL - f.N)) * c.eta +
                       dot(SA, (f.S - f.N) + (f.E - f.N) + (f.A - f.N)) / 6.0 * c.alpha +
                       dot(ND, (f.S - f.N) + ND + (f.E - f.N)) / 6.0 * c.delta;
    out.tilde_from_K = (f.rhoK * f.rhoK + norm_sq(f.cK - f.N)) * c.eta -
                       dot(SB, (f.B - f.N) + (f.W - f.N) + (f.S - f.N)) / 6.0 * c.beta -
                       dot(NC, (f.W - f.N) + NC + (f.S - f.N)) / 6.0 * c.gamma;
    out.from_K = (f.rhoK * f.rhoK + norm_sq(f.cK - f.S)) * c.eta -
                 dot(SB, (f.N - f.S) + SB + (f.W - f.S)) / 6.0 * c.beta -
                 dot(NC, (f.N - f.S) + (f.W - f.S) + (f.C - f.S)) / 6.0 * c.gamma;
    return out;
}

namespace {

// Momenta across the outer edge from vertex u towards vertex v of the outer
// triangle with centroid ctr and gyration radius rho, carrying flux `flux`.
SideMomenta side_momenta_one(Vec2 u, Vec2 v, Vec2 ctr, double rho, double flux) {
    const Vec2 t = (v - u) / norm(v - u);
    SideMomenta m;
    m.m1 = dot(ctr - u, t) * flux;
    m.m1_tilde = -dot(ctr - v, t) * flux;
    m.m2 = (rho * rho + norm_sq(ctr - u)) * flux;
    m.m2_tilde = (rho * rho + norm_sq(ctr - v)) * flux;
    return m;
}

} // namespace

SideMomentaSet side_momenta(const StencilFrame& f, const StencilCoefficients& c) {
    SideMomentaSet s;
    s.M = side_momenta_one(f.E, f.N, f.cM, f.rhoM, c.alpha);
    s.P = side_momenta_one(f.N, f.W, f.cP, f.rhoP, c.beta);
    s.Q = side_momenta_one(f.W, f.S, f.cQ, f.rhoQ, c.gamma);
    s.R = side_momenta_one(f.S, f.E, f.cR, f.rhoR, c.delta);
    return s;
}

Vec2 dual_cell_average(const StencilFrame& f, const StencilCoefficients& c,
                       DualSide side) {
    Vec2 u, v, ctr;
    double flux = 0.0;
    switch (side) {
        case DualSide::M: u = f.E; v = f.N; ctr = f.cM; flux = c.alpha; break;
        case DualSide::P: u = f.N; v = f.W; ctr = f.cP; flux = c.beta; break;
        case DualSide::Q: u = f.W; v = f.S; ctr = f.cQ; flux = c.gamma; break;
        case DualSide::R: u = f.S; v = f.E; ctr = f.cR; flux = c.delta; break;
    }
    const Vec2 n = perp_cw((v - u) / norm(v - u));
    return (dot(ctr - u, n) * flux) * n;
}

} // namespace pgfv
