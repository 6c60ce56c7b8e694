#include "pgfv/geometry.hpp"

#include <algorithm>

#include "pgfv/mesh.hpp"

namespace pgfv {

TriGeom tri_geom(Vec2 p0, Vec2 p1, Vec2 p2) {
    TriGeom t;
    t.v = {p0, p1, p2};

    const double s01 = norm(p1 - p0);
    const double s12 = norm(p2 - p1);
    const double s20 = norm(p0 - p2);
    t.diameter = std::max({s01, s12, s20});

    const double signed_area = 0.5 * cross(p1 - p0, p2 - p0);
    if (std::abs(signed_area) < 1e-14 * t.diameter * t.diameter)
        throw GeometryError("degenerate triangle (zero area)");
    t.area = std::abs(signed_area);

    t.centroid = (p0 + p1 + p2) / 3.0;
    t.inradius_diameter = 4.0 * t.area / (s01 + s12 + s20);
    t.gyration_radius = std::sqrt((s01 * s01 + s12 * s12 + s20 * s20) / 36.0);

    // circumcenter from the perpendicular-bisector linear system
    const Vec2 a = p1 - p0;
    const Vec2 b = p2 - p0;
    const double d = 2.0 * cross(a, b);
    const double na = norm_sq(a);
    const double nb = norm_sq(b);
    t.circumcenter = p0 + Vec2{(b.y * na - a.y * nb) / d, (a.x * nb - b.x * na) / d};
    return t;
}

double second_moment_about(const TriGeom& tri, Vec2 p) {
    return tri.gyration_radius * tri.gyration_radius + norm_sq(tri.centroid - p);
}

double quality_theta(const Mesh& mesh) {
    double theta = 0.0;
    for (const Cell& c : mesh.cells) {
        const TriGeom t = mesh.cell_geom(c);
        theta = std::max(theta, t.diameter / t.inradius_diameter);
    }
    return theta;
}

namespace detail {

const BaryPoint* triangle_rule(int degree, int& n_points) {
    static const BaryPoint deg1[] = {
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0},
    };
    // edge midpoints, exact for quadratics
    static const BaryPoint deg2[] = {
        {0.5, 0.5, 0.0, 1.0 / 3.0},
        {0.0, 0.5, 0.5, 1.0 / 3.0},
        {0.5, 0.0, 0.5, 1.0 / 3.0},
    };
    static const BaryPoint deg3[] = {
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -27.0 / 48.0},
        {0.6, 0.2, 0.2, 25.0 / 48.0},
        {0.2, 0.6, 0.2, 25.0 / 48.0},
        {0.2, 0.2, 0.6, 25.0 / 48.0},
    };
    static const double g1 = (6.0 + std::sqrt(15.0)) / 21.0;
    static const double g2 = (6.0 - std::sqrt(15.0)) / 21.0;
    static const double w1 = (155.0 + std::sqrt(15.0)) / 1200.0;
    static const double w2 = (155.0 - std::sqrt(15.0)) / 1200.0;
    static const BaryPoint deg5[] = {
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
        {1.0 - 2.0 * g1, g1, g1, w1},
        {g1, 1.0 - 2.0 * g1, g1, w1},
        {g1, g1, 1.0 - 2.0 * g1, w1},
        {1.0 - 2.0 * g2, g2, g2, w2},
        {g2, 1.0 - 2.0 * g2, g2, w2},
        {g2, g2, 1.0 - 2.0 * g2, w2},
    };
    switch (degree) {
        case 1: n_points = 1; return deg1;
        case 2: n_points = 3; return deg2;
        case 3: n_points = 4; return deg3;
        case 5: n_points = 7; return deg5;
        default:
            throw GeometryError("unsupported triangle quadrature degree " +
                                std::to_string(degree));
    }
}

} // namespace detail

} // namespace pgfv
