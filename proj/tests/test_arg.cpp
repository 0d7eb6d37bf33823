#include "support.hpp"

#include "symrec/arg.hpp"
#include "symrec/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace symrec;
using symrec::test::segment;

namespace {

const JunctionTolerance kTol{0.2, 10.0, 3.0};

std::optional<ConnectionType> junction(const Primitive& p, const Primitive& q, const JunctionTolerance& tol = kTol) {
    return classify_junction(p, q, tol);
}

// Dense sampling estimate of the distance between two segments.
double sampled_distance(const Primitive& p, const Primitive& q) {
    double best = INFINITY;
    for (int i = 0; i <= 400; ++i) {
        const Point a = p.axis_start + (i / 400.0) * p.direction();
        best = std::min(best, geom::point_segment_distance(a, q));
    }
    return best;
}

}  // namespace

TEST_SUITE("arg") {
    TEST_CASE("connection type chars") {
        for (auto t : kConnectionTypes) CHECK(connection_type_from_char(to_char(t)) == t);
        CHECK_FALSE(connection_type_from_char('Z').has_value());
    }

    TEST_CASE("relative length") {
        Symbol s;
        s.primitives.push_back(segment(0, 0, 10, 0));
        CHECK(relative_length(s, 0) == 1.0);
        s.primitives.push_back(segment(0, 0, 0, 5));
        CHECK(relative_length(s, 0) == 1.0);
        CHECK(relative_length(s, 1) == doctest::Approx(0.5));
    }

    TEST_CASE("relative angle") {
        CHECK(relative_angle(segment(0, 0, 10, 0), segment(0, 3, 10, 3)) == doctest::Approx(0.0));
        CHECK(relative_angle(segment(0, 0, 10, 0), segment(10, 0, 0, 0)) == doctest::Approx(0.0));
        CHECK(relative_angle(segment(0, 0, 10, 0), segment(0, 0, 0, 4)) == doctest::Approx(90.0));
        const double c = std::cos(120.0 * M_PI / 180.0), s = std::sin(120.0 * M_PI / 180.0);
        CHECK(relative_angle(segment(0, 0, 1, 0), segment(0, 0, c, s)) == doctest::Approx(60.0));

        Rng rng(5);
        for (int i = 0; i < 500; ++i) {
            const double a = rng.uniform(0, 360), b = rng.uniform(0, 360);
            const auto dir = [](double deg) { return Point(std::cos(deg * M_PI / 180), std::sin(deg * M_PI / 180)); };
            const Primitive p = segment(0, 0, dir(a).x(), dir(a).y());
            const Primitive q = segment(1, 1, 1 + 3 * dir(b).x(), 1 + 3 * dir(b).y());
            double diff = std::fmod(std::abs(a - b), 180.0);
            diff = std::min(diff, 180.0 - diff);
            CHECK(relative_angle(p, q) == doctest::Approx(diff).epsilon(1e-9));
            CHECK(relative_angle(p, q) == relative_angle(q, p));
        }
    }

    TEST_CASE("junction examples") {
        CHECK(junction(segment(0, 0, 10, 0), segment(10, 0, 10, 10)) == ConnectionType::L);
        CHECK(junction(segment(0, 0, 10, 0), segment(5, -5, 5, 5)) == ConnectionType::X);
        CHECK(junction(segment(0, 0, 10, 0), segment(0, 3, 10, 3)) == ConnectionType::P);
        JunctionTolerance narrow = kTol;
        narrow.par_dist = 2.9;
        CHECK_FALSE(junction(segment(0, 0, 10, 0), segment(0, 3, 10, 3), narrow).has_value());
    }

    TEST_CASE("each predicate") {
        // T: endpoint on the interior, away from the other's endpoints
        CHECK(junction(segment(0, 0, 10, 0), segment(4, 0.1, 4, 8)) == ConnectionType::T);
        // S: end to end, nearly collinear
        CHECK(junction(segment(0, 0, 10, 0), segment(10, 0, 20, 1)) == ConnectionType::S);
        // L at a shallow angle just beyond angle_eps
        const double t = std::tan(12.0 * M_PI / 180.0);
        CHECK(junction(segment(0, 0, 10, 0), segment(10, 0, 20, 10 * t)) == ConnectionType::L);
        // crossing near an endpoint is not X; the endpoint lies on the other's interior
        CHECK(junction(segment(0, 0, 10, 0), segment(5, -0.1, 5, 8)) == ConnectionType::T);
        // parallel but no overlap along the common direction
        CHECK_FALSE(junction(segment(0, 0, 10, 0), segment(12, 2, 20, 2)).has_value());
        // far apart
        CHECK_FALSE(junction(segment(0, 0, 10, 0), segment(0, 20, 10, 30)).has_value());
        // endpoint near the other's endpoint but perpendicular: L wins over T
        CHECK(junction(segment(0, 0, 10, 0), segment(0.1, 0.1, 0.1, 6)) == ConnectionType::L);
    }

    TEST_CASE("junction symmetric and order independent") {
        Rng rng(17);
        JunctionTolerance tol{2.0, 10.0, 5.0};
        for (int i = 0; i < 3000; ++i) {
            Primitive p = segment(rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(0, 40));
            Primitive q = segment(rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(0, 40));
            if (p.length() < 1 || q.length() < 1) continue;
            const auto a = junction(p, q, tol);
            CHECK(a == junction(q, p, tol));
            Primitive rp = p;
            std::swap(rp.axis_start, rp.axis_end);
            CHECK(a == junction(rp, q, tol));
            // kind never matters
            p.kind = PrimitiveKind::Vector;
            q.kind = PrimitiveKind::Quadrilateral;
            CHECK(a == junction(p, q, tol));
        }
    }

    TEST_CASE("junction agrees with sampled geometry") {
        Rng rng(99);
        JunctionTolerance tol{1.0, 10.0, 3.0};
        int related = 0;
        for (int i = 0; i < 2000; ++i) {
            const Primitive p = segment(rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 30));
            const Primitive q = segment(rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 30));
            if (p.length() < 1 || q.length() < 1) continue;
            const auto type = junction(p, q, tol);
            const double gap = std::min(sampled_distance(p, q), sampled_distance(q, p));
            if (type && *type != ConnectionType::P) {
                ++related;
                // every contact relation requires the segments to come within eps
                CHECK(gap <= tol.eps + 0.1);
            }
            if (gap > tol.eps + 0.1 && type) CHECK(*type == ConnectionType::P);
            if (type == ConnectionType::X) CHECK(geom::interior_intersection(p, q).has_value());
        }
        CHECK(related > 50);
    }

    TEST_CASE("geometry helpers") {
        const Primitive h = segment(0, 0, 10, 0);
        CHECK(geom::point_segment_distance(Point(5, 3), h) == doctest::Approx(3.0));
        CHECK(geom::point_segment_distance(Point(13, 4), h) == doctest::Approx(5.0));
        CHECK(geom::point_line_distance(Point(13, 4), h) == doctest::Approx(4.0));
        CHECK(geom::project_clamped(h, Point(-3, 1)) == 0.0);
        const auto hit = geom::interior_intersection(h, segment(5, -5, 5, 5));
        REQUIRE(hit.has_value());
        CHECK((*hit - Point(5, 0)).norm() < 1e-12);
        CHECK_FALSE(geom::interior_intersection(h, segment(0, 3, 10, 3)).has_value());
        CHECK_FALSE(geom::interior_intersection(h, segment(10, 0, 10, 5)).has_value());
        CHECK(geom::projection_overlap(h, segment(4, 2, 14, 2)) == doctest::Approx(6.0));
        CHECK(geom::projection_overlap(h, segment(12, 2, 20, 2)) == doctest::Approx(-2.0));
        CHECK(geom::parallel_distance(h, segment(0, 3, 10, 3)) == doctest::Approx(3.0));
    }

    TEST_CASE("build_arg examples") {
        Symbol one;
        one.primitives.push_back(segment(0, 0, 10, 0));
        const Arg g1 = build_arg(one);
        CHECK(g1.nodes.size() == 1);
        CHECK(g1.edges.empty());
        CHECK(g1.nodes[0].relative_length == 1.0);

        Symbol corner;
        corner.primitives.push_back(segment(0, 0, 10, 0));
        corner.primitives.push_back(segment(10, 0, 10, 10));
        const Arg g2 = build_arg(corner);
        REQUIRE(g2.edges.size() == 1);
        CHECK(g2.edges[0].connection_type == ConnectionType::L);
        CHECK(g2.edges[0].relative_angle == doctest::Approx(90.0));
        CHECK(g2.degrees() == std::vector<int>{1, 1});

        Symbol apart;
        apart.primitives.push_back(segment(0, 0, 1, 0));
        apart.primitives.push_back(segment(0, 50, 1, 52));
        apart.primitives.push_back(segment(60, 0, 60, 2));
        const Arg g3 = build_arg(apart);
        CHECK(g3.nodes.size() == 3);
        CHECK(g3.edges.empty());
        CHECK(g3.connected_components() == 3);
    }

    TEST_CASE("tolerances follow the symbol extent") {
        Symbol s;
        s.primitives.push_back(segment(0, 0, 30, 40));
        const auto tol = resolve_tolerance(s, {0.02, 10.0, 0.05});
        CHECK(tol.eps == doctest::Approx(1.0));
        CHECK(tol.par_dist == doctest::Approx(2.5));
        CHECK(tol.angle_eps == 10.0);
    }

    TEST_CASE("arg invariants on random symbols") {
        Rng rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            const Symbol s = test::scatter_symbol(rng, 1 + static_cast<int>(rng.below(14)));
            const Arg g = build_arg(s);
            const std::size_t n = s.size();
            CHECK(g.edges.size() <= n * (n - 1) / 2);
            std::set<std::pair<std::size_t, std::size_t>> pairs;
            bool has_full = false;
            for (const auto& node : g.nodes) {
                CHECK(node.relative_length >= 0.0);
                CHECK(node.relative_length <= 1.0);
                has_full |= node.relative_length == 1.0;
            }
            CHECK(has_full);
            for (const auto& e : g.edges) {
                CHECK(e.node_a != e.node_b);
                CHECK(e.node_a < n);
                CHECK(e.node_b < n);
                CHECK(pairs.insert({std::min(e.node_a, e.node_b), std::max(e.node_a, e.node_b)}).second);
                CHECK(e.relative_angle >= 0.0);
                CHECK(e.relative_angle <= 90.0);
                CHECK(e.relative_angle == relative_angle(s.primitives[e.node_a], s.primitives[e.node_b]));
            }
            std::size_t sum = 0;
            for (int d : g.degrees()) sum += static_cast<std::size_t>(d);
            CHECK(sum == 2 * g.edges.size());
        }
    }

    TEST_CASE("arg invariant under rotation and scaling") {
        Rng rng(4242);
        for (int trial = 0; trial < 40; ++trial) {
            const Symbol s = random_model_symbol(rng, 4, 12);
            const Arg ref = build_arg(s);
            const auto compare = [&](const Symbol& t) {
                const Arg g = build_arg(t);
                REQUIRE(g.nodes.size() == ref.nodes.size());
                for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                    CHECK(g.nodes[i].kind == ref.nodes[i].kind);
                    CHECK(std::abs(g.nodes[i].relative_length - ref.nodes[i].relative_length) < 1e-6);
                }
                REQUIRE(g.edges.size() == ref.edges.size());
                for (std::size_t i = 0; i < g.edges.size(); ++i) {
                    CHECK(g.edges[i].node_a == ref.edges[i].node_a);
                    CHECK(g.edges[i].node_b == ref.edges[i].node_b);
                    CHECK(g.edges[i].connection_type == ref.edges[i].connection_type);
                    CHECK(std::abs(g.edges[i].relative_angle - ref.edges[i].relative_angle) < 1e-6);
                }
            };
            for (int deg = 10; deg < 360; deg += 10) compare(rotate_symbol(s, static_cast<double>(deg)));
            for (double f : {0.5, 0.8, 1.7, 2.0, 13.0}) compare(scale_symbol(s, f));
        }
    }

    TEST_CASE("dump lists nodes and edges") {
        Symbol corner;
        corner.primitives.push_back(segment(0, 0, 10, 0, PrimitiveKind::Vector));
        corner.primitives.push_back(segment(10, 0, 10, 5));
        const std::string text = dump_arg(build_arg(corner));
        CHECK(text.find("node 0 primitive=0 kind=V rel_length=1") != std::string::npos);
        CHECK(text.find("node 1 primitive=1 kind=Q rel_length=0.5") != std::string::npos);
        CHECK(text.find("edge 0 1 type=L rel_angle=90") != std::string::npos);
    }
}
