// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "symrec/model_io.hpp"
#include "symrec/noise.hpp"
#include "symrec/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace symrec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

CorpusConfig corpus_config(int classes, std::initializer_list<const char*> regimes) {
    CorpusConfig cfg;
    cfg.class_count = classes;
    for (const char* r : regimes) cfg.regimes.push_back(NoiseRegime::parse(r));
    return cfg;
}

// Trained models are shared between criteria that use the same corpus.
struct Experiment {
    Corpus corpus;
    TrainedModel model;
    double seconds = 0.0;
};

const Experiment& experiment(int classes, const char* family) {
    static std::map<std::pair<int, std::string>, Experiment> cache;
    const auto key = std::make_pair(classes, std::string(family));
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    const auto start = Clock::now();
    Experiment e;
    e.corpus = std::string(family) == "deform"
                   ? generate_corpus(corpus_config(classes, {"deform-L1"}))
                   : generate_corpus(corpus_config(classes, {"context-L1", "context-L2", "context-L3"}));
    e.model = train_model(e.corpus.train, PipelineConfig{});
    e.seconds = seconds_since(start);
    return cache.emplace(key, std::move(e)).first->second;
}

double rate_for(const Experiment& e, const std::string& regime) {
    for (const auto& [r, queries] : e.corpus.tests)
        if (r.name() == regime) return evaluate(e.model, queries, regime).rate();
    throw std::logic_error("regime missing: " + regime);
}

Outcome clean_invariance() {
    const auto start = Clock::now();
    const Corpus corpus = generate_corpus(corpus_config(20, {}));
    const TrainedModel model = train_model(corpus.train, PipelineConfig{});
    std::vector<Symbol> variants;
    const std::size_t per_class = 1 + 36 + 12;
    for (std::size_t i = 0; i < corpus.train.size(); ++i)
        if (i % per_class != 0) variants.push_back(corpus.train[i]);
    const EvaluationSection s = evaluate(model, variants, "clean");
    const double secs = seconds_since(start);
    return {s.correct() == s.total() && s.total() == 20 * 48 && secs < 120.0,
            fmt("%ld/%ld variants recognized (%.1f%%), %.1f s", s.correct(), s.total(), s.rate(), secs)};
}

Outcome deformation_robustness() {
    const auto start = Clock::now();
    const Experiment& e = experiment(20, "deform");
    const double rate = rate_for(e, "deform-L1");
    const double secs = seconds_since(start);
    return {rate >= 85.0 && secs < 300.0, fmt("deform-L1, 20 classes x 10 queries: %.1f%% (threshold 85%%), %.1f s", rate, secs)};
}

Outcome scalability_trend() {
    std::vector<double> rates;
    for (int classes : {10, 20, 40}) rates.push_back(rate_for(experiment(classes, "deform"), "deform-L1"));
    const bool non_increasing = rates[1] <= rates[0] && rates[2] <= rates[1];
    return {non_increasing && rates[2] > 70.0,
            fmt("deform-L1 at 10/20/40 classes: %.1f%% / %.1f%% / %.1f%%", rates[0], rates[1], rates[2])};
}

Outcome context_ordering() {
    const Experiment& e = experiment(16, "context");
    const double l1 = rate_for(e, "context-L1"), l2 = rate_for(e, "context-L2"), l3 = rate_for(e, "context-L3");
    const bool ordered = l2 <= l1 + 2.0 && l3 <= l2 + 2.0;
    return {ordered && l1 >= 70.0, fmt("context L1/L2/L3 at 16 classes: %.1f%% / %.1f%% / %.1f%%", l1, l2, l3)};
}

Outcome inference_oracle() {
    const auto start = Clock::now();
    Rng rng(2024);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const BayesNet net = oracle::random_network(rng, 10, 4);
        const std::vector<int> evidence = oracle::random_evidence(rng, net);
        const Eigen::VectorXd expected = oracle::enumerate_posterior(net, evidence).posterior;
        const Eigen::VectorXd got = posterior(net, evidence).probabilities;
        worst = std::max(worst, (expected - got).cwiseAbs().maxCoeff());
    }
    const double secs = seconds_since(start);
    return {worst <= 1e-9 && secs < 30.0, fmt("100 random networks, max |difference| %.3g, %.2f s", worst, secs)};
}

Outcome aic_oracle() {
    Rng rng(606);
    int within = 0, below_initial = 0, datasets = 0;
    double worst = 0.0;
    while (datasets < 50) {
        const std::size_t bins = 2 + rng.below(11);
        std::vector<double> samples(5 + rng.below(80));
        const int modes = 1 + static_cast<int>(rng.below(3));
        for (auto& v : samples) v = 10.0 * static_cast<double>(rng.below(static_cast<std::uint64_t>(modes))) + rng.normal(0, 2.0);
        const AicBinning b = aic_merge(samples, bins);
        if (b.degenerate) continue;
        ++datasets;
        std::vector<double> widths;
        for (std::size_t i = 0; i + 1 < b.initial.edges.size(); ++i) widths.push_back(b.initial.edges[i + 1] - b.initial.edges[i]);
        std::vector<double> counts(b.initial.counts.begin(), b.initial.counts.end());
        const double initial = oracle::aic_of(counts, widths);
        const double best = oracle::min_partition_aic(b.initial.counts, widths);
        const double gap = (b.aic() - best) / std::abs(best);
        worst = std::max(worst, gap);
        within += gap <= 0.05;
        below_initial += b.aic() <= initial + 1e-9;
    }
    return {within == 50 && below_initial == 50,
            fmt("50 datasets: %d within 5%% of the optimum (worst %.3f%%), %d not above the initial AIC", within, 100.0 * worst,
                below_initial)};
}

// Each entry: name, failures found.
Outcome property_suites() {
    std::vector<std::pair<std::string, int>> suites;
    const Experiment& e = experiment(20, "deform");

    {
        Rng rng(71);
        std::vector<Symbol> symbols;
        std::vector<Arg> args;
        for (int i = 0; i < 25; ++i) {
            symbols.push_back(random_model_symbol(rng, 4, 12));
            args.push_back(build_arg(symbols.back()));
        }
        const SignatureSchema schema = fit_schema(args);
        int bad = 0;
        for (const auto& s : symbols) {
            const Signature base = compute_signature(build_arg(s), schema);
            for (int deg = 10; deg < 360; deg += 10)
                bad += !(compute_signature(build_arg(rotate_symbol(s, static_cast<double>(deg))), schema) == base);
            for (double f : {0.5, 0.8, 1.25, 2.0, 3.5}) bad += !(compute_signature(build_arg(scale_symbol(s, f)), schema) == base);
        }
        suites.emplace_back("signature invariance", bad);
    }
    {
        int bad = 0;
        for (const auto& cpt : e.model.net.cpts)
            for (std::int64_t j = 0; j < cpt.parent_config_count(); ++j) {
                const Eigen::VectorXd row = cpt.row(j);
                bad += std::abs(row.sum() - 1.0) > 1e-9 || row.minCoeff() <= 0.0;
            }
        suites.emplace_back("cpt rows", bad);
    }
    {
        std::vector<Signature> sigs;
        std::vector<Arg> args;
        std::vector<int> classes;
        for (const auto& s : e.corpus.train) args.push_back(build_arg(s));
        for (std::size_t i = 0; i < args.size(); ++i) {
            sigs.push_back(compute_signature(args[i], e.model.schema));
            classes.push_back(static_cast<int>(i / 49));
        }
        const DiscreteData data = build_training_data(sigs, classes, e.model.discretization, 20);
        GaConfig ga;
        ga.generations = 60;
        ga.local_search = false;
        int bad = 0;
        const StructureResult r = learn_structure(data, ga, [&](const Dag& d) {
            bad += !d.is_acyclic();
            for (int v = 0; v < d.size(); ++v) bad += d.parent_count(v) > ga.max_parents;
        });
        for (std::size_t g = 1; g < r.best_per_generation.size(); ++g) bad += r.best_per_generation[g] < r.best_per_generation[g - 1];
        suites.emplace_back("ga elitism and acyclicity", bad);
    }
    {
        Rng rng(72);
        int bad = 0;
        for (const auto& col : e.model.discretization.columns)
            for (int k = 0; k < 200; ++k) {
                const double a = rng.uniform(-5, 60), b = rng.uniform(-5, 60);
                bad += std::min(a, b) == a ? col.state_of(a) > col.state_of(b) : col.state_of(b) > col.state_of(a);
            }
        suites.emplace_back("discretization monotonicity", bad);
    }
    {
        int bad = 0;
        for (const auto& s : e.corpus.train) {
            const std::string text = serialize_symbol(s);
            const Symbol back = parse_symbol(text);
            bad += serialize_symbol(back) != text || back.size() != s.size();
            for (std::size_t i = 0; i < s.size() && i < back.size(); ++i)
                bad += (back.primitives[i].axis_start - s.primitives[i].axis_start).norm() > 1e-6 ||
                       (back.primitives[i].axis_end - s.primitives[i].axis_end).norm() > 1e-6;
        }
        const std::string model_text = save_model(e.model);
        bad += save_model(load_model(model_text)) != model_text;
        suites.emplace_back("round trip", bad);
    }
    {
        const bool same = save_model(train_model(e.corpus.train, PipelineConfig{})) == save_model(e.model);
        suites.emplace_back("byte-identical model", same ? 0 : 1);
    }

    Outcome o;
    for (const auto& [name, failures] : suites) {
        o.pass &= failures == 0;
        o.detail += (o.detail.empty() ? "" : ", ") + name + (failures == 0 ? " ok" : " " + std::to_string(failures) + " failures");
    }
    return o;
}

Outcome fuzzy_boundary() {
    const IntervalScheme& scheme = SchemaConfig{}.length_scheme;
    double overlap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < scheme.size(); ++i)
        overlap = std::min(overlap, scheme.intervals[i].high - scheme.intervals[i + 1].low);
    const SignatureSchema schema{{{{0.0, 32.0}}, 0.0, 32.0}, scheme, SchemaConfig{}.angle_scheme};
    Rng rng(808);
    int worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Arg g;
        const std::size_t n = 1 + rng.below(12);
        for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({i, rng.uniform(), PrimitiveKind::Vector});
        const std::size_t pick = rng.below(n);
        // half the trials start inside an overlap zone
        if (rng.bernoulli(0.5)) {
            const std::size_t k = rng.below(scheme.size() - 1);
            g.nodes[pick].relative_length = rng.uniform(scheme.intervals[k + 1].low, scheme.intervals[k].high);
        }
        const Signature before = compute_signature(g, schema);
        const double delta = rng.uniform(-overlap, overlap) * (1.0 - 1e-9);
        g.nodes[pick].relative_length = std::clamp(g.nodes[pick].relative_length + delta, 0.0, 1.0);
        const Signature after = compute_signature(g, schema);
        int l1 = 0;
        for (int f = 13; f <= 15; ++f) l1 += static_cast<int>(std::abs(after.feature(f) - before.feature(f)));
        worst = std::max(worst, l1);
    }
    return {worst <= 1, fmt("1000 perturbations below the overlap width %.3f: largest Group-4 L1 change %d", overlap, worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"clean-symbol invariance", clean_invariance},
        {"deformation robustness", deformation_robustness},
        {"scalability trend", scalability_trend},
        {"context-noise ordering", context_ordering},
        {"inference oracle", inference_oracle},
        {"aic binning oracle", aic_oracle},
        {"property suites", property_suites},
        {"fuzzy-boundary robustness", fuzzy_boundary},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
