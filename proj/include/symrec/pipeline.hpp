#pragma once

#include "symrec/bayesnet.hpp"
#include "symrec/config.hpp"
#include "symrec/discretizer.hpp"
#include "symrec/signature.hpp"
#include "symrec/symbol.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symrec {

struct TrainedModel {
    PipelineConfig config;
    SignatureSchema schema;
    DiscretizationMap discretization;
    std::vector<std::string> classes;  // sorted; index = class state
    BayesNet net;
    double bic = 0.0;
    std::size_t training_rows = 0;

    int class_node() const { return kSignatureSize; }
};

// Symbols must carry labels; at least two distinct classes.
TrainedModel train_model(std::span<const Symbol> labelled, const PipelineConfig& cfg);

// Discretized training table: 21 feature columns then the class column.
DiscreteData build_training_data(std::span<const Signature> signatures, std::span<const int> class_states,
                                 const DiscretizationMap& map, int class_count);

struct Classification {
    std::string label;
    int class_index = 0;
    PosteriorDistribution posterior;
};

Classification classify(const TrainedModel& model, const Symbol& s);

struct EvaluationSection {
    std::string name;
    Eigen::MatrixXi confusion;  // rows: true class, columns: predicted class
    double mean_classify_ms = 0.0;

    long correct() const { return confusion.trace(); }
    long total() const { return confusion.sum(); }
    double rate() const { return total() == 0 ? 0.0 : 100.0 * static_cast<double>(correct()) / static_cast<double>(total()); }
    // NaN for classes without test symbols.
    std::vector<double> per_class_accuracy() const;
};

struct EvaluationReport {
    std::vector<std::string> classes;
    std::vector<EvaluationSection> sections;
    std::optional<double> train_seconds;
};

// Throws InputError for an empty query set or labels the model does not know.
EvaluationSection evaluate(const TrainedModel& model, std::span<const Symbol> queries, const std::string& name);

std::string format_report(const EvaluationReport& report, bool with_timing = true);
// Timing fields are wall-clock dependent and only emitted when asked for.
std::string report_to_json(const EvaluationReport& report, bool with_timing = false);

// Loads every manifest entry and attaches its class label.
std::vector<Symbol> load_labelled(const DatasetManifest& manifest);

}  // namespace symrec
