#pragma once

#include <array>
#include <cmath>

#include "pgfv/errors.hpp"

namespace pgfv {

struct Mesh; // mesh.hpp

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// 2x2 determinant det[a | b].
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
/// Rotation by -90 degrees: applied to the unit vector of an oriented edge
/// this gives the normal forming a direct pair with the edge.
inline Vec2 perp_cw(Vec2 a) { return {a.y, -a.x}; }

/// Per-triangle geometric quantities used throughout assembly.
///
/// inradius_diameter is the diameter (twice the radius) of the inscribed
/// ball; gyration_radius^2 is the sum of squared side lengths over 36 and
/// governs second moments about the centroid.
struct TriGeom {
    std::array<Vec2, 3> v;
    double area = 0.0;
    Vec2 centroid;
    double inradius_diameter = 0.0; // rho_K
    double diameter = 0.0;          // h_K, longest side
    Vec2 circumcenter;
    double gyration_radius = 0.0;   // rho_M
};

/// Builds the full TriGeom record. Throws GeometryError when the signed
/// area magnitude is below 1e-14 * diameter^2 (scale-invariant degeneracy
/// guard). Vertices may be given in either orientation.
TriGeom tri_geom(Vec2 p0, Vec2 p1, Vec2 p2);

/// (1/|T|) * integral over T of |x - p|^2 dx, evaluated by the
/// parallel-axis identity gyration^2 + |centroid - p|^2.
double second_moment_about(const TriGeom& tri, Vec2 p);

/// max over cells of h_K / rho_K.
double quality_theta(const Mesh& mesh);

namespace detail {

struct BaryPoint {
    double b0, b1, b2, w; // barycentric coordinates and weight (sums to 1)
};

/// Symmetric rule exact for polynomials up to `degree` in {1,2,3,5}.
/// Throws GeometryError for other degrees.
const BaryPoint* triangle_rule(int degree, int& n_points);

} // namespace detail

/// Integrates f over the triangle; exact for polynomial integrands up to
/// `degree` in {1,2,3,5}. Works for scalar- or vector-valued f.
template <class F>
auto quadrature_triangle(F&& f, const TriGeom& tri, int degree) {
    int n = 0;
    const detail::BaryPoint* pts = detail::triangle_rule(degree, n);
    auto eval_at = [&](const detail::BaryPoint& q) {
        Vec2 x = q.b0 * tri.v[0] + q.b1 * tri.v[1] + q.b2 * tri.v[2];
        return f(x);
    };
    auto acc = (pts[0].w * tri.area) * eval_at(pts[0]);
    for (int i = 1; i < n; ++i) acc += (pts[i].w * tri.area) * eval_at(pts[i]);
    return acc;
}

/// Integrates f along the segment [p,q] with arclength measure; exact for
/// polynomial traces up to `degree` in {1,2,3}.
template <class F>
double quadrature_edge(F&& f, Vec2 p, Vec2 q, int degree) {
    const double len = norm(q - p);
    const Vec2 mid = 0.5 * (p + q);
    if (degree == 1) {
        return len * f(mid);
    }
    if (degree == 2 || degree == 3) {
        // two-point Gauss, exact through degree 3
        const Vec2 off = (0.5 / std::sqrt(3.0)) * (q - p);
        return 0.5 * len * (f(mid - off) + f(mid + off));
    }
    throw GeometryError("unsupported edge quadrature degree " + std::to_string(degree));
}

} // namespace pgfv
