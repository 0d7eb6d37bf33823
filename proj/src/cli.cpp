#include "symrec/cli.hpp"

#include "symrec/error.hpp"
#include "symrec/model_io.hpp"
#include "symrec/noise.hpp"
#include "symrec/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

namespace symrec {

namespace {

struct ConfigOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "key = value configuration file (default: $" + std::string(kConfigEnvVar) + ")");
        for (const auto& key : config_keys()) {
            cmd.add_option_function<std::string>(
                "--" + key.name, [this, name = key.name](const std::string& v) { overrides[name] = v; }, key.help);
        }
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        std::string path = config_path;
        if (path.empty())
            if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
        if (!path.empty()) apply_config_file(cfg, path);
        for (const auto& key : config_keys())
            if (const auto it = overrides.find(key.name); it != overrides.end()) apply_setting(cfg, key.name, it->second);
        validate_config(cfg);
        return cfg;
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structural symbol recognition with fuzzy-interval signatures and Bayesian networks", "symrec"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a training corpus and noisy test sets");
    std::string gen_out;
    CorpusConfig corpus_cfg;
    std::string regimes = "clean,deform-L1,deform-L2,deform-L3,context-L1,context-L2,context-L3";
    gen->add_option("out_dir", gen_out, "output directory")->required();
    gen->add_option("--classes", corpus_cfg.class_count, "number of model symbols")->capture_default_str();
    gen->add_option("--tests-per-class", corpus_cfg.per_class_tests, "queries per class and regime")->capture_default_str();
    gen->add_option("--regimes", regimes, "comma list of clean, deform-L1..3, context-L1..3")->capture_default_str();
    gen->add_option("--seed", corpus_cfg.rng_seed, "corpus seed")->capture_default_str();
    gen->add_option("--min-primitives", corpus_cfg.min_primitives)->capture_default_str();
    gen->add_option("--max-primitives", corpus_cfg.max_primitives)->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "learn a model from a labelled manifest");
    std::string train_manifest, model_out = "model.json";
    ConfigOptions train_cfg;
    train->add_option("manifest", train_manifest, "training manifest (path<TAB>class)")->required();
    train->add_option("-o,--out", model_out, "model file to write")->capture_default_str();
    train_cfg.attach(*train);

    // classify
    auto* cls = app.add_subcommand("classify", "classify one symbol file");
    std::string cls_model, cls_symbol;
    cls->add_option("model", cls_model)->required();
    cls->add_option("symbol", cls_symbol)->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "recognition rates and confusion matrices for test manifests");
    std::string eval_model, report_path = "report.json";
    std::vector<std::string> eval_manifests;
    bool with_timing = false;
    eval->add_option("model", eval_model)->required();
    eval->add_option("manifests", eval_manifests, "one or more test manifests")->required();
    eval->add_option("--report", report_path, "JSON report file")->capture_default_str();
    eval->add_flag("--with-timing", with_timing, "include wall-clock timing in the JSON report");

    // dump-model
    auto* dump = app.add_subcommand("dump-model", "print a model in readable form");
    std::string dump_model;
    dump->add_option("model", dump_model)->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (*gen) {
            corpus_cfg.regimes.clear();
            std::stringstream ss(regimes);
            for (std::string r; std::getline(ss, r, ',');)
                if (!r.empty()) corpus_cfg.regimes.push_back(NoiseRegime::parse(r));
            const Corpus corpus = generate_corpus(corpus_cfg);
            write_corpus(corpus, corpus_cfg, gen_out);
            out << "wrote " << corpus.train.size() << " training symbols for " << corpus.models.size() << " classes to "
                << gen_out << '\n';
            for (const auto& [regime, symbols] : corpus.tests)
                out << "  " << regime.name() << ": " << symbols.size() << " queries\n";
        } else if (*train) {
            const PipelineConfig cfg = train_cfg.resolve();
            const auto symbols = load_labelled(read_manifest(train_manifest));
            const auto start = std::chrono::steady_clock::now();
            const TrainedModel model = train_model(symbols, cfg);
            const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
            write_model_file(model_out, model);
            out << "network edges (" << model.net.dag.edge_count() << "):\n";
            for (const auto& [p, c] : model.net.dag.edges()) {
                const auto name = [&](int v) { return v == model.class_node() ? std::string("C") : "f" + std::to_string(v + 1); };
                out << "  " << name(p) << " -> " << name(c) << '\n';
            }
            out << std::setprecision(10) << "BIC " << model.bic << '\n';
            out << std::setprecision(3) << "trained on " << symbols.size() << " symbols in " << secs.count() << " s; wrote "
                << model_out << '\n';
        } else if (*cls) {
            const TrainedModel model = read_model_file(cls_model);
            const Symbol s = read_symbol_file(cls_symbol);
            const Classification c = classify(model, s);
            out << c.label << '\n';
            std::vector<int> order(model.classes.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return c.posterior.probabilities[a] > c.posterior.probabilities[b];
            });
            out << std::setprecision(6);
            for (int i : order) out << "  " << model.classes[static_cast<std::size_t>(i)] << ' ' << c.posterior.probabilities[i] << '\n';
        } else if (*eval) {
            const TrainedModel model = read_model_file(eval_model);
            EvaluationReport report;
            report.classes = model.classes;
            for (const auto& path : eval_manifests) {
                const auto queries = load_labelled(read_manifest(path));
                report.sections.push_back(evaluate(model, queries, std::filesystem::path(path).stem().string()));
            }
            out << format_report(report);
            std::ofstream rep(report_path);
            if (!rep) throw InputError("cannot write report " + report_path);
            rep << report_to_json(report, with_timing);
            out << "\nreport written to " << report_path << '\n';
        } else if (*dump) {
            out << describe_model(read_model_file(dump_model));
        }
    } catch (const ModelVersionError& e) {
        err << "model version error: " << e.what() << '\n';
        return kExitModelVersionError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace symrec
