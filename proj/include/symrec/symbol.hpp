#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace symrec {

enum class PrimitiveKind { Vector, Quadrilateral };

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

// One vectorized stroke, stored as its medial axis plus a thickness.
template <typename Scalar>
struct PrimitiveT {
    PrimitiveKind kind = PrimitiveKind::Quadrilateral;
    Point2<Scalar> axis_start = Point2<Scalar>::Zero();
    Point2<Scalar> axis_end = Point2<Scalar>::Zero();
    Scalar thickness = Scalar(0);

    Point2<Scalar> direction() const { return axis_end - axis_start; }
    Scalar length() const { return direction().norm(); }
    Point2<Scalar> midpoint() const { return (axis_start + axis_end) / Scalar(2); }

    bool operator==(const PrimitiveT& o) const {
        return kind == o.kind && axis_start == o.axis_start && axis_end == o.axis_end && thickness == o.thickness;
    }
};

template <typename Scalar>
struct SymbolT {
    std::vector<PrimitiveT<Scalar>> primitives;
    std::optional<std::string> label;

    std::size_t size() const { return primitives.size(); }
    bool operator==(const SymbolT& o) const { return primitives == o.primitives && label == o.label; }
};

using Primitive = PrimitiveT<double>;
using Symbol = SymbolT<double>;
using Point = Point2<double>;

// Mean of all axis endpoints; pivot for rotation and scaling.
template <typename Scalar>
Point2<Scalar> endpoint_centroid(const SymbolT<Scalar>& s) {
    Point2<Scalar> sum = Point2<Scalar>::Zero();
    for (const auto& p : s.primitives) sum += p.axis_start + p.axis_end;
    return sum / Scalar(2 * s.primitives.size());
}

// Largest distance between any two axis endpoints. Unlike the axis-aligned
// bounding-box diagonal this does not change under rotation.
template <typename Scalar>
Scalar symbol_extent(const SymbolT<Scalar>& s) {
    std::vector<Point2<Scalar>> pts;
    pts.reserve(2 * s.size());
    for (const auto& p : s.primitives) {
        pts.push_back(p.axis_start);
        pts.push_back(p.axis_end);
    }
    Scalar best = Scalar(0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
    return best;
}

template <typename Scalar>
Scalar bounding_box_diagonal(const SymbolT<Scalar>& s) {
    Eigen::AlignedBox<Scalar, 2> box;
    for (const auto& p : s.primitives) {
        box.extend(p.axis_start);
        box.extend(p.axis_end);
    }
    return box.diagonal().norm();
}

// Affine map x -> pivot + linear * (x - pivot) applied to every endpoint.
template <typename Scalar>
SymbolT<Scalar> transform_about(const SymbolT<Scalar>& s, const Eigen::Matrix<Scalar, 2, 2>& linear,
                                const Point2<Scalar>& pivot, Scalar thickness_factor = Scalar(1)) {
    SymbolT<Scalar> out = s;
    for (auto& p : out.primitives) {
        p.axis_start = pivot + linear * (p.axis_start - pivot);
        p.axis_end = pivot + linear * (p.axis_end - pivot);
        p.thickness *= thickness_factor;
    }
    return out;
}

template <typename Scalar>
SymbolT<Scalar> rotate_symbol(const SymbolT<Scalar>& s, Scalar degrees) {
    const Scalar radians = degrees * Scalar(EIGEN_PI) / Scalar(180);
    const Eigen::Matrix<Scalar, 2, 2> r = Eigen::Rotation2D<Scalar>(radians).toRotationMatrix();
    return transform_about(s, r, endpoint_centroid(s));
}

template <typename Scalar>
SymbolT<Scalar> scale_symbol(const SymbolT<Scalar>& s, Scalar factor) {
    if (!(factor > Scalar(0))) throw std::invalid_argument("scale factor must be positive");
    const Eigen::Matrix<Scalar, 2, 2> m = Eigen::Matrix<Scalar, 2, 2>::Identity() * factor;
    return transform_about(s, m, endpoint_centroid(s), factor);
}

// Checks the Symbol invariants; throws InputError on violation.
void validate_symbol(const Symbol& s);

// Line format: "<V|Q> x1 y1 x2 y2 thickness"; '#' starts a comment line.
Symbol parse_symbol(std::string_view text);
std::string serialize_symbol(const Symbol& s);

Symbol read_symbol_file(const std::filesystem::path& path);
void write_symbol_file(const std::filesystem::path& path, const Symbol& s);

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<std::string> class_labels() const;  // sorted, unique
};

// Tab-separated "path<TAB>class". Relative paths are resolved against base_dir.
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
DatasetManifest read_manifest(const std::filesystem::path& path);
// Paths are written relative to the manifest's directory when possible.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);

}  // namespace symrec
