#include "symrec/noise.hpp"

#include "symrec/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace symrec {

namespace {

constexpr double kPi = std::numbers::pi;

Point rotate_about(const Point& x, const Point& pivot, double degrees) {
    const double r = degrees * kPi / 180.0;
    const Eigen::Matrix2d m = Eigen::Rotation2Dd(r).toRotationMatrix();
    return pivot + m * (x - pivot);
}

// Points of the 7x7 lattice used for model symbols.
constexpr int kGrid = 7;
constexpr double kSpacing = 10.0;

constexpr std::array<std::array<int, 2>, 16> kDirections = {{{1, 0},
                                                             {0, 1},
                                                             {1, 1},
                                                             {1, -1},
                                                             {2, 1},
                                                             {1, 2},
                                                             {2, -1},
                                                             {1, -2},
                                                             {-1, 0},
                                                             {0, -1},
                                                             {-1, -1},
                                                             {-1, 1},
                                                             {-2, -1},
                                                             {-1, -2},
                                                             {-2, 1},
                                                             {-1, 2}}};

bool collinear_overlap(const Primitive& a, const Primitive& b) {
    if (relative_angle(a, b) > 1e-9) return false;
    if (geom::parallel_distance(a, b) > 1e-9) return false;
    return geom::projection_overlap(a, b) > 1e-9;
}

std::vector<double> interior_boundaries(const IntervalScheme& s) {
    std::vector<double> out;
    for (const auto& iv : s.intervals) {
        if (iv.low > s.domain_low) out.push_back(iv.low);
        if (iv.high < s.domain_high) out.push_back(iv.high);
    }
    return out;
}

bool near_boundary(double v, const std::vector<double>& boundaries, double margin) {
    return std::any_of(boundaries.begin(), boundaries.end(), [&](double b) { return std::abs(v - b) < margin; });
}

}  // namespace

DeformationLevel DeformationLevel::preset(int level) {
    switch (level) {
        case 1: return {1, 0.005, 0.05, 1.0};
        case 2: return {2, 0.01, 0.15, 3.0};
        case 3: return {3, 0.02, 0.30, 6.0};
    }
    throw ConfigError("deformation level must be 1, 2 or 3");
}

ContextNoiseLevel ContextNoiseLevel::preset(int level) {
    switch (level) {
        case 1: return {1, 2, 0.05, 0.2, 0.5};
        case 2: return {2, 5, 0.05, 0.2, 0.5};
        case 3: return {3, 10, 0.05, 0.2, 0.5};
    }
    throw ConfigError("context noise level must be 1, 2 or 3");
}

Symbol deform(const Symbol& s, const DeformationLevel& d, std::uint64_t seed) {
    Rng rng(seed);
    const double diag = bounding_box_diagonal(s);
    const double sigma = d.jitter_sigma * diag;
    Symbol out;
    out.label = s.label;
    for (const auto& src : s.primitives) {
        Primitive p = src;
        if (d.angle_jitter_sigma > 0) {
            const double a = rng.normal(0.0, d.angle_jitter_sigma);
            const Point mid = p.midpoint();
            p.axis_start = rotate_about(p.axis_start, mid, a);
            p.axis_end = rotate_about(p.axis_end, mid, a);
        }
        if (d.split_probability > 0 && rng.bernoulli(d.split_probability)) {
            const Point m = p.axis_start + rng.uniform(0.35, 0.65) * p.direction();
            Primitive first = p, second = p;
            first.axis_end = m;
            second.axis_start = m;
            out.primitives.push_back(first);
            out.primitives.push_back(second);
        } else {
            out.primitives.push_back(p);
        }
    }
    if (sigma > 0) {
        for (auto& p : out.primitives) {
            const Point a = p.axis_start, b = p.axis_end;
            do {
                p.axis_start = a + Point(rng.normal(0.0, sigma), rng.normal(0.0, sigma));
                p.axis_end = b + Point(rng.normal(0.0, sigma), rng.normal(0.0, sigma));
            } while (p.length() <= 1e-9 * diag);
        }
    }
    return out;
}

namespace {

// Signed distance to the box outline: negative inside, positive outside.
double border_distance(const Eigen::AlignedBox2d& box, const Point& x) {
    if (box.contains(x)) {
        const Point lo = x - box.min(), hi = box.max() - x;
        return -std::min({lo.x(), lo.y(), hi.x(), hi.y()});
    }
    return box.exteriorDistance(x);
}

}  // namespace

Symbol add_context_noise(const Symbol& s, const ContextNoiseLevel& c, std::uint64_t seed) {
    Rng rng(seed);
    Symbol out = s;
    if (c.clutter_count <= 0) return out;
    const double diag = bounding_box_diagonal(s);
    const double band = 0.1 * diag;
    Eigen::AlignedBox2d box;
    for (const auto& p : s.primitives) {
        box.extend(p.axis_start);
        box.extend(p.axis_end);
    }
    const Point size = box.sizes();
    const double perimeter = 2.0 * (size.x() + size.y());

    std::vector<Point> border_endpoints;
    for (const auto& p : s.primitives)
        for (const Point& e : {p.axis_start, p.axis_end})
            if (std::abs(border_distance(box, e)) <= band) border_endpoints.push_back(e);

    const auto random_border_point = [&] {
        double t = rng.uniform() * perimeter;
        Point pt, normal;
        if (t < size.x()) {
            pt = {box.min().x() + t, box.min().y()};
            normal = {0, -1};
        } else if ((t -= size.x()) < size.y()) {
            pt = {box.max().x(), box.min().y() + t};
            normal = {1, 0};
        } else if ((t -= size.y()) < size.x()) {
            pt = {box.max().x() - t, box.max().y()};
            normal = {0, 1};
        } else {
            t -= size.x();
            pt = {box.min().x(), box.max().y() - t};
            normal = {-1, 0};
        }
        return Point(pt + rng.uniform(-1.0, 1.0) * band * normal);
    };

    for (int k = 0; k < c.clutter_count; ++k) {
        Primitive clutter;
        clutter.kind = PrimitiveKind::Quadrilateral;
        clutter.thickness = s.primitives[rng.below(s.size())].thickness;
        const bool touch = !border_endpoints.empty() && rng.bernoulli(c.touch_probability);
        // both endpoints stay within the band around the box outline
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double length = rng.uniform(c.clutter_length_min, c.clutter_length_max) * diag;
            const Point start = touch ? border_endpoints[rng.below(border_endpoints.size())] : random_border_point();
            const double h = rng.uniform(0.0, 2.0 * kPi);
            clutter.axis_start = start;
            clutter.axis_end = start + length * Point(std::cos(h), std::sin(h));
            if (std::abs(border_distance(box, clutter.axis_end)) <= band) break;
        }
        out.primitives.push_back(clutter);
    }
    return out;
}

bool well_conditioned(const Symbol& s, const ToleranceConfig& tol, const SchemaConfig& schema) {
    const JunctionTolerance nominal = resolve_tolerance(s, tol);
    const double extent = symbol_extent(s);
    std::vector<JunctionTolerance> variants;
    for (double f : {0.6, 1.5}) variants.push_back({nominal.eps * f, nominal.angle_eps, nominal.par_dist});
    for (double f : {0.75, 1.3}) variants.push_back({nominal.eps, nominal.angle_eps, nominal.par_dist * f});
    for (double da : {-2.0, 2.0}) variants.push_back({nominal.eps, nominal.angle_eps + da, nominal.par_dist});

    const auto length_marks = interior_boundaries(schema.length_scheme);
    const auto angle_marks = interior_boundaries(schema.angle_scheme);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (near_boundary(relative_length(s, i), length_marks, 0.02)) return false;
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const auto& p = s.primitives[i];
            const auto& q = s.primitives[j];
            const auto label = classify_junction(p, q, nominal);
            for (const auto& v : variants)
                if (classify_junction(p, q, v) != label) return false;
            const double angle = relative_angle(p, q);
            if (label && near_boundary(angle, angle_marks, 1.5)) return false;
            if (angle <= nominal.angle_eps + 2.0 && geom::parallel_distance(p, q) <= 1.3 * nominal.par_dist &&
                std::abs(geom::projection_overlap(p, q)) < 0.03 * extent)
                return false;
        }
    }
    return true;
}

Symbol random_model_symbol(Rng& rng, int min_primitives, int max_primitives, const ToleranceConfig& tol) {
    if (min_primitives < 1 || max_primitives < min_primitives) throw ConfigError("invalid primitive count range");
    const auto on_grid = [](int x, int y) { return x >= 0 && y >= 0 && x < kGrid && y < kGrid; };
    for (int attempt = 0; attempt < 2000; ++attempt) {
        const int n = rng.between(min_primitives, max_primitives);
        std::vector<std::array<int, 2>> used_points;
        Symbol s;
        for (int tries = 0; static_cast<int>(s.size()) < n && tries < 500; ++tries) {
            std::array<int, 2> start;
            if (!used_points.empty() && rng.bernoulli(0.7))
                start = used_points[rng.below(used_points.size())];
            else
                start = {static_cast<int>(rng.below(kGrid)), static_cast<int>(rng.below(kGrid))};
            const auto dir = kDirections[rng.below(kDirections.size())];
            const int steps = rng.between(1, 4);
            const std::array<int, 2> end = {start[0] + steps * dir[0], start[1] + steps * dir[1]};
            if (!on_grid(end[0], end[1])) continue;
            Primitive p;
            p.kind = rng.bernoulli(0.25) ? PrimitiveKind::Vector : PrimitiveKind::Quadrilateral;
            p.thickness = p.kind == PrimitiveKind::Vector ? 4.0 : 1.0;
            p.axis_start = Point(start[0], start[1]) * kSpacing;
            p.axis_end = Point(end[0], end[1]) * kSpacing;
            if (std::any_of(s.primitives.begin(), s.primitives.end(),
                            [&](const Primitive& q) { return collinear_overlap(p, q); }))
                continue;
            s.primitives.push_back(p);
            used_points.push_back(start);
            used_points.push_back(end);
        }
        if (static_cast<int>(s.size()) < n) continue;

        // occasionally a double line, offset inside the parallel tolerance
        if (static_cast<int>(s.size()) < max_primitives && rng.bernoulli(0.3)) {
            const JunctionTolerance t = resolve_tolerance(s, tol);
            const Primitive& base = s.primitives[rng.below(s.size())];
            const Point d = base.direction();
            const Point normal = Point(-d.y(), d.x()).normalized() * (rng.bernoulli(0.5) ? 1.0 : -1.0);
            Primitive twin = base;
            twin.axis_start = base.axis_start + 0.15 * d + 0.6 * t.par_dist * normal;
            twin.axis_end = base.axis_end - 0.15 * d + 0.6 * t.par_dist * normal;
            s.primitives.push_back(twin);
        }
        if (well_conditioned(s, tol)) return s;
    }
    throw std::runtime_error("could not synthesize a well-conditioned symbol");
}

double junction_preservation(const Symbol& a, const Symbol& b, const ToleranceConfig& tol) {
    if (a.size() != b.size()) throw std::invalid_argument("symbols differ in primitive count");
    const JunctionTolerance ta = resolve_tolerance(a, tol), tb = resolve_tolerance(b, tol);
    std::size_t same = 0, pairs = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            ++pairs;
            if (classify_junction(a.primitives[i], a.primitives[j], ta) ==
                classify_junction(b.primitives[i], b.primitives[j], tb))
                ++same;
        }
    return pairs == 0 ? 1.0 : static_cast<double>(same) / static_cast<double>(pairs);
}

std::string NoiseRegime::name() const {
    switch (kind) {
        case NoiseKind::Clean: return "clean";
        case NoiseKind::Deformation: return "deform-L" + std::to_string(level);
        case NoiseKind::Context: return "context-L" + std::to_string(level);
    }
    return "?";
}

NoiseRegime NoiseRegime::parse(const std::string& name) {
    if (name == "clean") return {NoiseKind::Clean, 0};
    const auto level_of = [&](std::size_t prefix) {
        const std::string rest = name.substr(prefix);
        if (rest != "1" && rest != "2" && rest != "3") throw ConfigError("bad noise level in '" + name + "'");
        return std::stoi(rest);
    };
    if (name.starts_with("deform-L")) return {NoiseKind::Deformation, level_of(8)};
    if (name.starts_with("context-L")) return {NoiseKind::Context, level_of(9)};
    throw ConfigError("unknown noise regime '" + name + "' (expected clean, deform-L<n> or context-L<n>)");
}

std::string class_name(int index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
    return "class_" + digits;
}

namespace {

Signature provisional_signature(const Symbol& s, const ToleranceConfig& tol) {
    SignatureSchema schema;
    const SchemaConfig defaults;
    schema.length_scheme = defaults.length_scheme;
    schema.angle_scheme = defaults.angle_scheme;
    schema.density_scheme = {{{0.0, 1.5}, {1.5, 3.5}, {3.5, 32.0}}, 0.0, 32.0};
    return compute_signature(build_arg(s, tol), schema);
}

}  // namespace

Corpus generate_corpus(const CorpusConfig& cfg) {
    if (cfg.class_count < 2) throw ConfigError("class_count must be >= 2");
    if (cfg.per_class_tests < 0) throw ConfigError("per_class_tests must be >= 0");
    if (!(cfg.scale_min > 0) || cfg.scale_max < cfg.scale_min) throw ConfigError("invalid scale range");

    Corpus corpus;
    Rng model_rng(derive_seed(cfg.rng_seed, 0));
    std::vector<Signature> accepted;
    int retries = 0;
    while (static_cast<int>(corpus.models.size()) < cfg.class_count) {
        Symbol candidate = random_model_symbol(model_rng, cfg.min_primitives, cfg.max_primitives, cfg.tolerance);
        const Signature sig = provisional_signature(candidate, cfg.tolerance);
        const bool distinct = std::all_of(accepted.begin(), accepted.end(), [&](const Signature& o) {
            return (o.features - sig.features).lpNorm<1>() >= cfg.min_signature_distance;
        });
        if (!distinct) {
            if (++retries > cfg.retry_budget)
                throw ConfigError("could not find " + std::to_string(cfg.class_count) +
                                  " mutually distinct model symbols; try fewer classes");
            continue;
        }
        candidate.label = class_name(static_cast<int>(corpus.models.size()));
        accepted.push_back(sig);
        corpus.models.push_back(std::move(candidate));
    }

    for (std::size_t c = 0; c < corpus.models.size(); ++c) {
        const Symbol& model = corpus.models[c];
        corpus.train.push_back(model);
        for (int r = 0; r < cfg.rotations; ++r) corpus.train.push_back(rotate_symbol(model, 10.0 * r));
        Rng scale_rng(derive_seed(cfg.rng_seed, 1000 + c));
        for (int k = 0; k < cfg.scalings; ++k)
            corpus.train.push_back(scale_symbol(model, scale_rng.uniform(cfg.scale_min, cfg.scale_max)));
    }

    for (std::size_t ri = 0; ri < cfg.regimes.size(); ++ri) {
        const NoiseRegime regime = cfg.regimes[ri];
        std::vector<Symbol> queries;
        for (std::size_t c = 0; c < corpus.models.size(); ++c) {
            for (int q = 0; q < cfg.per_class_tests; ++q) {
                const std::uint64_t seed = derive_seed(derive_seed(derive_seed(cfg.rng_seed, 2000 + ri), c), static_cast<std::uint64_t>(q));
                Rng rng(seed);
                Symbol query = rotate_symbol(corpus.models[c], rng.uniform(0.0, 360.0));
                query = scale_symbol(query, rng.uniform(cfg.scale_min, cfg.scale_max));
                const std::uint64_t noise_seed = rng.next();
                switch (regime.kind) {
                    case NoiseKind::Clean: break;
                    case NoiseKind::Deformation: query = deform(query, DeformationLevel::preset(regime.level), noise_seed); break;
                    case NoiseKind::Context: query = add_context_noise(query, ContextNoiseLevel::preset(regime.level), noise_seed); break;
                }
                query.label = corpus.models[c].label;
                queries.push_back(std::move(query));
            }
        }
        corpus.tests.emplace_back(regime, std::move(queries));
    }
    return corpus;
}

namespace {

DatasetManifest write_set(const std::vector<Symbol>& symbols, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    DatasetManifest m;
    std::map<std::string, int> per_class;
    for (const auto& s : symbols) {
        const std::string label = s.label.value_or("unlabelled");
        const int k = per_class[label]++;
        std::string idx = std::to_string(k);
        idx.insert(0, idx.size() < 3 ? 3 - idx.size() : 0, '0');
        const auto path = dir / (label + "_" + idx + ".sym");
        write_symbol_file(path, s);
        m.entries.push_back({path, label});
    }
    return m;
}

}  // namespace

void write_corpus(const Corpus& corpus, const CorpusConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_manifest(out_dir / "train.tsv", write_set(corpus.train, out_dir / "train"));
    write_manifest(out_dir / "models.tsv", write_set(corpus.models, out_dir / "models"));
    nlohmann::ordered_json tests = nlohmann::ordered_json::array();
    for (const auto& [regime, symbols] : corpus.tests) {
        write_manifest(out_dir / (regime.name() + ".tsv"), write_set(symbols, out_dir / regime.name()));
        nlohmann::ordered_json r;
        r["name"] = regime.name();
        r["manifest"] = regime.name() + ".tsv";
        if (regime.kind == NoiseKind::Deformation) {
            const auto d = DeformationLevel::preset(regime.level);
            r["jitter_sigma"] = d.jitter_sigma;
            r["split_probability"] = d.split_probability;
            r["angle_jitter_sigma"] = d.angle_jitter_sigma;
        } else if (regime.kind == NoiseKind::Context) {
            const auto c = ContextNoiseLevel::preset(regime.level);
            r["clutter_count"] = c.clutter_count;
            r["clutter_length_range"] = {c.clutter_length_min, c.clutter_length_max};
            r["touch_probability"] = c.touch_probability;
        }
        tests.push_back(r);
    }
    nlohmann::ordered_json meta;
    meta["class_count"] = cfg.class_count;
    meta["per_class_tests"] = cfg.per_class_tests;
    meta["rng_seed"] = cfg.rng_seed;
    meta["primitives"] = {cfg.min_primitives, cfg.max_primitives};
    meta["min_signature_distance"] = cfg.min_signature_distance;
    meta["rotations"] = cfg.rotations;
    meta["rotation_step_degrees"] = 10.0;
    meta["scalings"] = cfg.scalings;
    meta["scale_range"] = {cfg.scale_min, cfg.scale_max};
    meta["tolerance"] = {{"eps_ratio", cfg.tolerance.eps_ratio},
                         {"angle_eps", cfg.tolerance.angle_eps},
                         {"par_dist_ratio", cfg.tolerance.par_dist_ratio}};
    meta["train_manifest"] = "train.tsv";
    meta["tests"] = tests;
    std::ofstream out(out_dir / "corpus.json");
    if (!out) throw InputError("cannot write corpus metadata in " + out_dir.string());
    out << meta.dump(2) << '\n';
}

}  // namespace symrec
