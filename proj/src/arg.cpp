#include "symrec/arg.hpp"

#include <numbers>
#include <numeric>
#include <sstream>

namespace symrec {

char to_char(ConnectionType t) {
    switch (t) {
        case ConnectionType::L: return 'L';
        case ConnectionType::X: return 'X';
        case ConnectionType::T: return 'T';
        case ConnectionType::P: return 'P';
        case ConnectionType::S: return 'S';
    }
    return '?';
}

std::optional<ConnectionType> connection_type_from_char(char c) {
    for (auto t : kConnectionTypes)
        if (to_char(t) == c) return t;
    return std::nullopt;
}

JunctionTolerance resolve_tolerance(const Symbol& s, const ToleranceConfig& cfg) {
    const double extent = symbol_extent(s);
    return {cfg.eps_ratio * extent, cfg.angle_eps, cfg.par_dist_ratio * extent};
}

double relative_angle(const Primitive& p, const Primitive& q) {
    const Point u = p.direction();
    const Point v = q.direction();
    // atan2 keeps precision near 0 and 90 degrees where acos does not.
    const double rad = std::atan2(std::abs(geom::cross(u, v)), std::abs(u.dot(v)));
    return std::clamp(rad * 180.0 / std::numbers::pi, 0.0, 90.0);
}

double relative_length(const Symbol& s, std::size_t index) {
    double longest = 0.0;
    for (const auto& p : s.primitives) longest = std::max(longest, p.length());
    return s.primitives.at(index).length() / longest;
}

namespace {

bool endpoints_touch(const Primitive& p, const Primitive& q, double eps) {
    for (const Point& a : {p.axis_start, p.axis_end})
        for (const Point& b : {q.axis_start, q.axis_end})
            if ((a - b).norm() <= eps) return true;
    return false;
}

// An endpoint of `a` rests on the interior of `b`, away from b's endpoints.
bool endpoint_on_interior(const Primitive& a, const Primitive& b, double eps) {
    for (const Point& e : {a.axis_start, a.axis_end}) {
        if (geom::point_segment_distance(e, b) > eps) continue;
        if ((e - b.axis_start).norm() > eps && (e - b.axis_end).norm() > eps) return true;
    }
    return false;
}

bool crosses(const Primitive& p, const Primitive& q, double eps) {
    const auto hit = geom::interior_intersection(p, q);
    if (!hit) return false;
    for (const Point& e : {p.axis_start, p.axis_end, q.axis_start, q.axis_end})
        if ((*hit - e).norm() <= eps) return false;
    return true;
}

bool parallel_overlap(const Primitive& p, const Primitive& q, double par_dist) {
    return geom::parallel_distance(p, q) <= par_dist && geom::projection_overlap(p, q) > 0.0;
}

}  // namespace

std::optional<ConnectionType> classify_junction(const Primitive& p, const Primitive& q, const JunctionTolerance& tol) {
    if (crosses(p, q, tol.eps)) return ConnectionType::X;
    if (endpoint_on_interior(p, q, tol.eps) || endpoint_on_interior(q, p, tol.eps)) return ConnectionType::T;
    const double angle = relative_angle(p, q);
    if (endpoints_touch(p, q, tol.eps)) return angle <= tol.angle_eps ? ConnectionType::S : ConnectionType::L;
    if (angle <= tol.angle_eps && parallel_overlap(p, q, tol.par_dist)) return ConnectionType::P;
    return std::nullopt;
}

Arg build_arg(const Symbol& s, const ToleranceConfig& cfg) {
    Arg g;
    const JunctionTolerance tol = resolve_tolerance(s, cfg);
    const std::size_t n = s.size();
    g.nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({i, relative_length(s, i), s.primitives[i].kind});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (const auto type = classify_junction(s.primitives[i], s.primitives[j], tol))
                g.edges.push_back({i, j, *type, relative_angle(s.primitives[i], s.primitives[j])});
    return g;
}

std::vector<int> Arg::degrees() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& e : edges) {
        ++deg[e.node_a];
        ++deg[e.node_b];
    }
    return deg;
}

std::size_t Arg::connected_components() const {
    std::vector<std::size_t> root(nodes.size());
    std::iota(root.begin(), root.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    std::size_t components = nodes.size();
    for (const auto& e : edges) {
        const auto a = find(e.node_a), b = find(e.node_b);
        if (a != b) {
            root[a] = b;
            --components;
        }
    }
    return components;
}

std::string dump_arg(const Arg& g) {
    std::ostringstream out;
    out.precision(6);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        out << "node " << i << " primitive=" << n.primitive_index << " kind="
            << (n.kind == PrimitiveKind::Vector ? 'V' : 'Q') << " rel_length=" << n.relative_length << '\n';
    }
    for (const auto& e : g.edges)
        out << "edge " << e.node_a << ' ' << e.node_b << " type=" << to_char(e.connection_type)
            << " rel_angle=" << e.relative_angle << '\n';
    return out.str();
}

}  // namespace symrec
