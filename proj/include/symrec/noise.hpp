#pragma once

#include "symrec/arg.hpp"
#include "symrec/rng.hpp"
#include "symrec/signature.hpp"
#include "symrec/symbol.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace symrec {

// Hand-drawn style perturbation. Sigmas are fractions of the bounding-box diagonal.
struct DeformationLevel {
    int level = 0;
    double jitter_sigma = 0.0;
    double split_probability = 0.0;
    double angle_jitter_sigma = 0.0;  // degrees

    static DeformationLevel preset(int level);  // 1..3
};

// Clutter strokes near the symbol border, mimicking a crop from a full drawing.
struct ContextNoiseLevel {
    int level = 0;
    int clutter_count = 0;
    double clutter_length_min = 0.05;  // fraction of diagonal
    double clutter_length_max = 0.2;
    double touch_probability = 0.5;

    static ContextNoiseLevel preset(int level);  // 1..3
};

Symbol deform(const Symbol& s, const DeformationLevel& d, std::uint64_t seed);
Symbol add_context_noise(const Symbol& s, const ContextNoiseLevel& c, std::uint64_t seed);

// True when every pairwise junction label is unchanged under moderate changes
// of the tolerances, and no relative length or edge angle sits near a fuzzy
// interval boundary. Such symbols keep their signature under rotation and
// scaling and under small deformations.
bool well_conditioned(const Symbol& s, const ToleranceConfig& tol = {}, const SchemaConfig& schema = {});

// Random grid-based line symbol with primitive count in [min_primitives, max_primitives].
Symbol random_model_symbol(Rng& rng, int min_primitives, int max_primitives, const ToleranceConfig& tol = {});

// Fraction of primitive pairs with identical junction label in two symbols
// with the same primitive count.
double junction_preservation(const Symbol& a, const Symbol& b, const ToleranceConfig& tol = {});

enum class NoiseKind { Clean, Deformation, Context };

struct NoiseRegime {
    NoiseKind kind = NoiseKind::Clean;
    int level = 0;

    std::string name() const;  // "clean", "deform-L1", "context-L2", ...
    static NoiseRegime parse(const std::string& name);
    bool operator==(const NoiseRegime&) const = default;
};

struct CorpusConfig {
    int class_count = 20;
    int per_class_tests = 10;
    std::vector<NoiseRegime> regimes;
    std::uint64_t rng_seed = 1;
    int min_primitives = 4;
    int max_primitives = 12;
    double min_signature_distance = 4.0;
    int retry_budget = 5000;
    int rotations = 36;  // 10 degree steps starting at 0
    int scalings = 12;
    double scale_min = 0.5;
    double scale_max = 2.0;
    ToleranceConfig tolerance;
};

struct Corpus {
    std::vector<Symbol> models;
    std::vector<Symbol> train;  // per class: model, rotations, scalings
    std::vector<std::pair<NoiseRegime, std::vector<Symbol>>> tests;
};

// Every symbol carries its class label ("class_00", ...).
Corpus generate_corpus(const CorpusConfig& cfg);

std::string class_name(int index);

// Writes train/, one directory per regime, the matching TSV manifests and a
// corpus.json with every parameter and seed.
void write_corpus(const Corpus& corpus, const CorpusConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace symrec
