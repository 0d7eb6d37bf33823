#pragma once

#include "symrec/symbol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symrec {

enum class ConnectionType { L, X, T, P, S };

inline constexpr std::array<ConnectionType, 5> kConnectionTypes = {
    ConnectionType::L, ConnectionType::X, ConnectionType::T, ConnectionType::P, ConnectionType::S};

char to_char(ConnectionType t);
std::optional<ConnectionType> connection_type_from_char(char c);

// Junction tolerances as fractions of the symbol extent (largest endpoint
// distance), so that they scale with the symbol.
struct ToleranceConfig {
    double eps_ratio = 0.02;
    double angle_eps = 10.0;  // degrees
    double par_dist_ratio = 0.05;
};

// Absolute tolerances for one symbol.
struct JunctionTolerance {
    double eps = 0.0;
    double angle_eps = 10.0;
    double par_dist = 0.0;
};

JunctionTolerance resolve_tolerance(const Symbol& s, const ToleranceConfig& cfg);

namespace geom {

template <typename Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return a.x() * b.y() - a.y() * b.x();
}

// Parameter of the orthogonal projection of pt onto the segment's line, clamped to [0,1].
template <typename Scalar>
Scalar project_clamped(const PrimitiveT<Scalar>& seg, const Point2<Scalar>& pt) {
    const Point2<Scalar> d = seg.direction();
    const Scalar t = (pt - seg.axis_start).dot(d) / d.squaredNorm();
    return std::clamp(t, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& pt, const PrimitiveT<Scalar>& seg) {
    const Scalar t = project_clamped(seg, pt);
    return (seg.axis_start + t * seg.direction() - pt).norm();
}

template <typename Scalar>
Scalar point_line_distance(const Point2<Scalar>& pt, const PrimitiveT<Scalar>& seg) {
    const Point2<Scalar> d = seg.direction();
    return std::abs(cross(d, Point2<Scalar>(pt - seg.axis_start))) / d.norm();
}

// Intersection point of the two open segments, if their interiors cross.
template <typename Scalar>
std::optional<Point2<Scalar>> interior_intersection(const PrimitiveT<Scalar>& p, const PrimitiveT<Scalar>& q) {
    const Point2<Scalar> r = p.direction();
    const Point2<Scalar> s = q.direction();
    const Scalar denom = cross(r, s);
    if (std::abs(denom) <= Scalar(1e-12) * r.norm() * s.norm()) return std::nullopt;
    const Point2<Scalar> qp = q.axis_start - p.axis_start;
    const Scalar t = cross(qp, s) / denom;
    const Scalar u = cross(qp, r) / denom;
    if (t <= Scalar(0) || t >= Scalar(1) || u <= Scalar(0) || u >= Scalar(1)) return std::nullopt;
    return Point2<Scalar>(p.axis_start + t * r);
}

// Length of the overlap of the two axes projected on their mean direction;
// negative when the projections are disjoint.
template <typename Scalar>
Scalar projection_overlap(const PrimitiveT<Scalar>& p, const PrimitiveT<Scalar>& q) {
    const Point2<Scalar> u = p.direction().normalized();
    Point2<Scalar> v = q.direction().normalized();
    if (u.dot(v) < Scalar(0)) v = -v;
    const Point2<Scalar> axis = (u + v).normalized();
    const auto span = [&](const PrimitiveT<Scalar>& s) {
        const Scalar a = axis.dot(s.axis_start), b = axis.dot(s.axis_end);
        return std::pair{std::min(a, b), std::max(a, b)};
    };
    const auto [plo, phi] = span(p);
    const auto [qlo, qhi] = span(q);
    return std::min(phi, qhi) - std::max(plo, qlo);
}

// Larger of the two midpoint-to-other-line distances.
template <typename Scalar>
Scalar parallel_distance(const PrimitiveT<Scalar>& p, const PrimitiveT<Scalar>& q) {
    return std::max(point_line_distance(q.midpoint(), p), point_line_distance(p.midpoint(), q));
}

}  // namespace geom

// Acute angle between the two axis directions, in degrees within [0, 90].
double relative_angle(const Primitive& p, const Primitive& q);

// Axis length of s.primitives[index] over the longest axis length in s.
double relative_length(const Symbol& s, std::size_t index);

// Topological relation between two primitives; first matching predicate in
// the order X, T, S, L, P. Symmetric in (p, q).
std::optional<ConnectionType> classify_junction(const Primitive& p, const Primitive& q, const JunctionTolerance& tol);

struct ArgNode {
    std::size_t primitive_index = 0;
    double relative_length = 0.0;
    PrimitiveKind kind = PrimitiveKind::Quadrilateral;
};

struct ArgEdge {
    std::size_t node_a = 0;
    std::size_t node_b = 0;
    ConnectionType connection_type = ConnectionType::L;
    double relative_angle = 0.0;
};

struct Arg {
    std::vector<ArgNode> nodes;
    std::vector<ArgEdge> edges;

    std::vector<int> degrees() const;
    std::size_t connected_components() const;
};

Arg build_arg(const Symbol& s, const ToleranceConfig& cfg = {});

// One node or edge per line, for debugging.
std::string dump_arg(const Arg& g);

}  // namespace symrec
