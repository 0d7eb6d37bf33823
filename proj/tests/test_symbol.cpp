#include "support.hpp"

#include "symrec/error.hpp"
#include "symrec/symbol.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace symrec;
using symrec::test::segment;

namespace {

bool near(const Point& a, const Point& b, double tol) { return (a - b).norm() <= tol; }

bool same_geometry(const Symbol& a, const Symbol& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& p = a.primitives[i];
        const auto& q = b.primitives[i];
        if (p.kind != q.kind || !near(p.axis_start, q.axis_start, tol) || !near(p.axis_end, q.axis_end, tol) ||
            std::abs(p.thickness - q.thickness) > tol)
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("symbol") {
    TEST_CASE("parse single quadrilateral") {
        const Symbol s = parse_symbol("Q 0 0 10 0 1");
        REQUIRE(s.size() == 1);
        const auto& p = s.primitives[0];
        CHECK(p.kind == PrimitiveKind::Quadrilateral);
        CHECK(p.axis_start == Point(0, 0));
        CHECK(p.axis_end == Point(10, 0));
        CHECK(p.thickness == 1.0);
        CHECK_FALSE(s.label.has_value());
    }

    TEST_CASE("parse keeps primitive order") {
        const Symbol s = parse_symbol("Q 0 0 10 0 1\nV 0 0 0 10 2\n");
        REQUIRE(s.size() == 2);
        CHECK(s.primitives[0].kind == PrimitiveKind::Quadrilateral);
        CHECK(s.primitives[1].kind == PrimitiveKind::Vector);
        CHECK(s.primitives[1].axis_end == Point(0, 10));
        CHECK(s.primitives[1].thickness == 2.0);
    }

    TEST_CASE("parse skips comments, blank lines and CRLF") {
        const Symbol s = parse_symbol("# a comment\r\n\r\n  V 1 2 3 4 0.5  \r\n# label door\r\n");
        REQUIRE(s.size() == 1);
        CHECK(s.primitives[0].axis_start == Point(1, 2));
        REQUIRE(s.label.has_value());
        CHECK(*s.label == "door");
    }

    TEST_CASE("parse errors carry line numbers") {
        CHECK_THROWS_AS(parse_symbol("Q 0 0 0 0 1"), ParseError);
        try {
            parse_symbol("Q 0 0 10 0 1\n\nQ 0 0 0 0 1\n");
            FAIL("zero-length axis accepted");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
        CHECK_THROWS_AS(parse_symbol("Q 0 0 10 0"), ParseError);
        CHECK_THROWS_AS(parse_symbol("Q 0 0 10 0 1 7"), ParseError);
        CHECK_THROWS_AS(parse_symbol("R 0 0 10 0 1"), ParseError);
        CHECK_THROWS_AS(parse_symbol("Q 0 0 ten 0 1"), ParseError);
        CHECK_THROWS_AS(parse_symbol("Q 0 0 10 0 -1"), ParseError);
        CHECK_THROWS_AS(parse_symbol("Q 0 0 inf 0 1"), ParseError);
    }

    TEST_CASE("empty text is rejected") {
        CHECK_THROWS_AS(parse_symbol(""), ParseError);
        CHECK_THROWS_AS(parse_symbol("# only a comment\n\n"), ParseError);
    }

    TEST_CASE("validate_symbol") {
        Symbol s;
        CHECK_THROWS_AS(validate_symbol(s), InputError);
        s.primitives.push_back(segment(0, 0, 1, 0));
        CHECK_NOTHROW(validate_symbol(s));
        s.primitives.push_back(segment(2, 2, 2, 2));
        CHECK_THROWS_AS(validate_symbol(s), InputError);
        s.primitives.back() = segment(0, 0, NAN, 1);
        CHECK_THROWS_AS(validate_symbol(s), InputError);
        s.primitives.back() = segment(0, 0, 1, 1, PrimitiveKind::Vector, -0.5);
        CHECK_THROWS_AS(validate_symbol(s), InputError);
    }

    TEST_CASE("rotation examples") {
        Symbol s;
        s.primitives.push_back(segment(0, 0, 10, 0));
        CHECK(rotate_symbol(s, 0.0) == s);

        const Symbol r = rotate_symbol(s, 90.0);
        // centroid (5,0); (x,y) -> (5 - y, x - 5)
        CHECK(near(r.primitives[0].axis_start, Point(5, -5), 1e-12));
        CHECK(near(r.primitives[0].axis_end, Point(5, 5), 1e-12));

        Rng rng(7);
        const Symbol many = test::scatter_symbol(rng, 6);
        CHECK(same_geometry(rotate_symbol(many, 360.0), many, 1e-9));
        CHECK(same_geometry(rotate_symbol(rotate_symbol(many, 130.0), -130.0), many, 1e-9));
    }

    TEST_CASE("rotation preserves lengths and centroid") {
        Rng rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            const Symbol s = test::scatter_symbol(rng, 1 + static_cast<int>(rng.below(8)));
            const double theta = rng.uniform(-720, 720);
            const Symbol r = rotate_symbol(s, theta);
            for (std::size_t i = 0; i < s.size(); ++i)
                CHECK(std::abs(r.primitives[i].length() - s.primitives[i].length()) < 1e-9);
            CHECK(near(endpoint_centroid(r), endpoint_centroid(s), 1e-9));
            CHECK(std::abs(symbol_extent(r) - symbol_extent(s)) < 1e-9);
        }
    }

    TEST_CASE("scaling examples") {
        Symbol s;
        s.primitives.push_back(segment(0, 0, 10, 0, PrimitiveKind::Vector, 2.0));
        CHECK(scale_symbol(s, 1.0) == s);
        const Symbol big = scale_symbol(s, 3.0);
        CHECK(big.primitives[0].length() == doctest::Approx(30.0).epsilon(1e-12));
        CHECK(big.primitives[0].thickness == doctest::Approx(6.0));

        Rng rng(3);
        const Symbol many = test::scatter_symbol(rng, 5);
        CHECK(same_geometry(scale_symbol(scale_symbol(many, 2.0), 0.5), many, 1e-9));

        CHECK_THROWS_AS(scale_symbol(s, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(scale_symbol(s, -1.0), std::invalid_argument);
    }

    TEST_CASE("extent and bounding box") {
        Symbol s;
        s.primitives.push_back(segment(0, 0, 3, 0));
        s.primitives.push_back(segment(3, 0, 3, 4));
        CHECK(symbol_extent(s) == doctest::Approx(5.0));
        CHECK(bounding_box_diagonal(s) == doctest::Approx(5.0));
        // the box diagonal grows under a 45 degree turn, the extent does not
        const Symbol r = rotate_symbol(s, 45.0);
        CHECK(symbol_extent(r) == doctest::Approx(5.0));
        CHECK(bounding_box_diagonal(r) > 5.5);
    }

    TEST_CASE("templated on scalar") {
        SymbolT<float> s;
        PrimitiveT<float> p;
        p.axis_start = {0.f, 0.f};
        p.axis_end = {2.f, 0.f};
        s.primitives.push_back(p);
        const auto r = rotate_symbol(s, 90.f);
        CHECK(r.primitives[0].axis_start.y() == doctest::Approx(-1.0f));
        CHECK(symbol_extent(scale_symbol(s, 2.f)) == doctest::Approx(4.0f));
    }

    TEST_CASE("serialize / parse round trip") {
        Rng rng(2024);
        for (int trial = 0; trial < 200; ++trial) {
            Symbol s = test::scatter_symbol(rng, 1 + static_cast<int>(rng.below(12)));
            if (trial % 3 == 0) s.label = "class_" + std::to_string(trial);
            const std::string text = serialize_symbol(s);
            const Symbol back = parse_symbol(text);
            CHECK(same_geometry(back, s, 1e-6));
            CHECK(back.label == s.label);
            CHECK(serialize_symbol(back) == text);
        }
    }

    TEST_CASE("symbol files") {
        test::TempDir dir("symfile");
        Symbol s;
        s.primitives.push_back(segment(1, 2, 3, 4, PrimitiveKind::Vector, 0.25));
        write_symbol_file(dir / "a.sym", s);
        CHECK(read_symbol_file(dir / "a.sym") == s);

        std::ofstream(dir / "empty.sym").close();
        CHECK_THROWS_AS(read_symbol_file(dir / "empty.sym"), InputError);
        CHECK_THROWS_AS(read_symbol_file(dir / "missing.sym"), InputError);
    }
}

TEST_SUITE("manifest") {
    TEST_CASE("parse resolves relative paths and lists classes") {
        const auto m = parse_manifest("a/x.sym\tchair\n# note\n\nb.sym\tdoor\n/abs/c.sym\tchair\n", "/data");
        REQUIRE(m.entries.size() == 3);
        CHECK(m.entries[0].path == std::filesystem::path("/data/a/x.sym"));
        CHECK(m.entries[1].label == "door");
        CHECK(m.entries[2].path == std::filesystem::path("/abs/c.sym"));
        CHECK(m.class_labels() == std::vector<std::string>{"chair", "door"});
    }

    TEST_CASE("malformed manifests") {
        CHECK_THROWS_AS(parse_manifest("a.sym\tx\na.sym\ty\n"), ParseError);
        CHECK_THROWS_AS(parse_manifest("./a.sym\tx\na.sym\ty\n"), ParseError);
        CHECK_THROWS_AS(parse_manifest("a.sym x\n"), ParseError);
        CHECK_THROWS_AS(parse_manifest("a.sym\tx\textra\n"), ParseError);
        CHECK_THROWS_AS(parse_manifest("a.sym\t\n"), ParseError);
        CHECK(parse_manifest("").entries.empty());
    }

    TEST_CASE("write then read") {
        test::TempDir dir("manifest");
        DatasetManifest m;
        m.entries.push_back({dir / "train/a.sym", "k1"});
        m.entries.push_back({dir / "train/b.sym", "k2"});
        write_manifest(dir / "train.tsv", m);

        std::ifstream in(dir / "train.tsv");
        std::string first;
        std::getline(in, first);
        CHECK(first == "train/a.sym\tk1");

        const auto back = read_manifest(dir / "train.tsv");
        REQUIRE(back.entries.size() == 2);
        CHECK(back.entries[0].path == (dir / "train/a.sym").lexically_normal());
        CHECK(back.entries[1].label == "k2");
    }
}
