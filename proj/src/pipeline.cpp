#include "symrec/pipeline.hpp"

#include "symrec/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace symrec {

DiscreteData build_training_data(std::span<const Signature> signatures, std::span<const int> class_states,
                                 const DiscretizationMap& map, int class_count) {
    DiscreteData data;
    data.cards = map.cardinalities();
    data.cards.push_back(class_count);
    data.states.resize(static_cast<Eigen::Index>(signatures.size()), kSignatureSize + 1);
    for (std::size_t r = 0; r < signatures.size(); ++r) {
        const StateVector states = discretize(signatures[r], map);
        for (int f = 0; f < kSignatureSize; ++f) data.states(static_cast<Eigen::Index>(r), f) = states[static_cast<std::size_t>(f)];
        data.states(static_cast<Eigen::Index>(r), kSignatureSize) = class_states[r];
    }
    return data;
}

TrainedModel train_model(std::span<const Symbol> labelled, const PipelineConfig& cfg) {
    validate_config(cfg);
    if (labelled.empty()) throw InputError("training set is empty");
    std::set<std::string> label_set;
    for (const auto& s : labelled) {
        if (!s.label) throw InputError("training symbol without class label");
        label_set.insert(*s.label);
    }
    if (label_set.size() < 2) throw InputError("training needs at least two classes");

    TrainedModel model;
    model.config = cfg;
    model.classes.assign(label_set.begin(), label_set.end());

    std::vector<Arg> args;
    args.reserve(labelled.size());
    for (const auto& s : labelled) {
        validate_symbol(s);
        args.push_back(build_arg(s, cfg.tolerance));
    }
    model.schema = fit_schema(args, cfg.schema);

    std::vector<Signature> signatures;
    std::vector<int> class_states;
    for (std::size_t i = 0; i < labelled.size(); ++i) {
        signatures.push_back(compute_signature(args[i], model.schema));
        const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), *labelled[i].label);
        class_states.push_back(static_cast<int>(it - model.classes.begin()));
    }
    model.discretization = fit_discretization(signatures, cfg.discretize_bins);
    const DiscreteData data =
        build_training_data(signatures, class_states, model.discretization, static_cast<int>(model.classes.size()));

    const StructureResult structure = learn_structure(data, cfg.ga);
    model.net = learn_parameters(structure.dag, data, cfg.alpha, model.class_node());
    model.bic = structure.score;
    model.training_rows = labelled.size();
    return model;
}

Classification classify(const TrainedModel& model, const Symbol& s) {
    validate_symbol(s);
    const Signature sig = compute_signature(build_arg(s, model.config.tolerance), model.schema);
    const StateVector evidence = discretize(sig, model.discretization);
    Classification out;
    out.posterior = posterior(model.net, evidence);
    out.class_index = out.posterior.argmax();
    out.label = model.classes[static_cast<std::size_t>(out.class_index)];
    return out;
}

std::vector<double> EvaluationSection::per_class_accuracy() const {
    std::vector<double> acc;
    for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
        const long n = confusion.row(c).sum();
        acc.push_back(n == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : static_cast<double>(confusion(c, c)) / static_cast<double>(n));
    }
    return acc;
}

EvaluationSection evaluate(const TrainedModel& model, std::span<const Symbol> queries, const std::string& name) {
    if (queries.empty()) throw InputError("test set '" + name + "' is empty");
    std::set<std::string> unknown;
    for (const auto& q : queries) {
        if (!q.label) throw InputError("test symbol without class label");
        if (!std::binary_search(model.classes.begin(), model.classes.end(), *q.label)) unknown.insert(*q.label);
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& l : unknown) list += (list.empty() ? "" : ", ") + l;
        throw InputError("test labels unknown to the model: " + list);
    }

    EvaluationSection section;
    section.name = name;
    const auto k = static_cast<Eigen::Index>(model.classes.size());
    section.confusion = Eigen::MatrixXi::Zero(k, k);
    const auto start = std::chrono::steady_clock::now();
    for (const auto& q : queries) {
        const auto truth = std::lower_bound(model.classes.begin(), model.classes.end(), *q.label) - model.classes.begin();
        const Classification c = classify(model, q);
        ++section.confusion(truth, c.class_index);
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    section.mean_classify_ms = elapsed.count() / static_cast<double>(queries.size());
    return section;
}

std::string format_report(const EvaluationReport& report, bool with_timing) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << "Recognition rates\n";
    for (const auto& s : report.sections)
        out << "  " << std::left << std::setw(16) << s.name << std::right << std::setw(6) << s.rate() << "%  ("
            << s.correct() << "/" << s.total() << ")\n";
    for (const auto& s : report.sections) {
        out << "\nConfusion matrix [" << s.name << "] (rows: true, columns: predicted)\n";
        std::size_t width = 5;
        for (const auto& c : report.classes) width = std::max(width, c.size() + 1);
        out << std::setw(static_cast<int>(width)) << "";
        for (std::size_t j = 0; j < report.classes.size(); ++j) out << std::setw(4) << j;
        out << "   acc\n";
        const auto acc = s.per_class_accuracy();
        for (Eigen::Index i = 0; i < s.confusion.rows(); ++i) {
            out << std::left << std::setw(static_cast<int>(width)) << report.classes[static_cast<std::size_t>(i)] << std::right;
            for (Eigen::Index j = 0; j < s.confusion.cols(); ++j) out << std::setw(4) << s.confusion(i, j);
            if (std::isnan(acc[static_cast<std::size_t>(i)]))
                out << "     -\n";
            else
                out << std::setw(6) << 100.0 * acc[static_cast<std::size_t>(i)] << '\n';
        }
    }
    if (with_timing) {
        out << "\nTiming\n";
        if (report.train_seconds) out << "  train seconds: " << std::setprecision(3) << *report.train_seconds << '\n';
        for (const auto& s : report.sections)
            out << "  " << s.name << ": mean classify " << std::setprecision(3) << s.mean_classify_ms << " ms\n";
    }
    return out.str();
}

std::string report_to_json(const EvaluationReport& report, bool with_timing) {
    nlohmann::ordered_json j;
    j["classes"] = report.classes;
    nlohmann::ordered_json sections = nlohmann::ordered_json::array();
    for (const auto& s : report.sections) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["correct"] = s.correct();
        js["total"] = s.total();
        js["recognition_rate"] = s.rate();
        nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < s.confusion.rows(); ++r) {
            std::vector<int> row;
            for (Eigen::Index c = 0; c < s.confusion.cols(); ++c) row.push_back(s.confusion(r, c));
            matrix.push_back(row);
        }
        js["confusion"] = matrix;
        nlohmann::ordered_json acc = nlohmann::ordered_json::array();
        for (double a : s.per_class_accuracy()) acc.push_back(std::isnan(a) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(a));
        js["per_class_accuracy"] = acc;
        if (with_timing) js["mean_classify_ms"] = s.mean_classify_ms;
        sections.push_back(js);
    }
    j["sections"] = sections;
    if (with_timing && report.train_seconds) j["train_seconds"] = *report.train_seconds;
    return j.dump(2) + "\n";
}

std::vector<Symbol> load_labelled(const DatasetManifest& manifest) {
    std::vector<Symbol> out;
    out.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        Symbol s = read_symbol_file(e.path);
        s.label = e.label;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace symrec
