#pragma once

#include "symrec/rng.hpp"
#include "symrec/symbol.hpp"

#include <filesystem>
#include <string>

namespace symrec::test {

inline Primitive segment(double x1, double y1, double x2, double y2, PrimitiveKind kind = PrimitiveKind::Quadrilateral,
                         double thickness = 1.0) {
    Primitive p;
    p.kind = kind;
    p.axis_start = {x1, y1};
    p.axis_end = {x2, y2};
    p.thickness = thickness;
    return p;
}

// Arbitrary primitives in a 100x100 box, no structure implied.
inline Symbol scatter_symbol(Rng& rng, int count) {
    Symbol s;
    while (static_cast<int>(s.size()) < count) {
        Primitive p = segment(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100),
                              rng.bernoulli(0.5) ? PrimitiveKind::Vector : PrimitiveKind::Quadrilateral,
                              rng.uniform(0, 5));
        if (p.length() > 1.0) s.primitives.push_back(p);
    }
    return s;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("symrec_" + tag + "_" + std::to_string(derive_seed(reinterpret_cast<std::uintptr_t>(this), tag.size())));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace symrec::test
