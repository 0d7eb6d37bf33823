#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symrec {

inline constexpr int kMaxVariables = 32;

// Discrete dataset: one row per sample, one column per variable.
struct DiscreteData {
    Eigen::MatrixXi states;
    std::vector<int> cards;

    int variables() const { return static_cast<int>(cards.size()); }
    Eigen::Index rows() const { return states.rows(); }
};

// Throws std::invalid_argument if states fall outside their cardinalities.
void validate_data(const DiscreteData& data);

// Directed graph over at most kMaxVariables nodes, stored as one parent
// bitmask per node.
class Dag {
public:
    Dag() = default;
    explicit Dag(int nodes) : parents_(static_cast<std::size_t>(nodes), 0u) {}

    int size() const { return static_cast<int>(parents_.size()); }
    std::uint32_t parent_mask(int child) const { return parents_[static_cast<std::size_t>(child)]; }
    void set_parent_mask(int child, std::uint32_t mask) { parents_[static_cast<std::size_t>(child)] = mask; }

    bool has_edge(int parent, int child) const { return (parent_mask(child) >> parent) & 1u; }
    void add_edge(int parent, int child) { parents_[static_cast<std::size_t>(child)] |= 1u << parent; }
    void remove_edge(int parent, int child) { parents_[static_cast<std::size_t>(child)] &= ~(1u << parent); }
    void flip_edge(int parent, int child) { parents_[static_cast<std::size_t>(child)] ^= 1u << parent; }

    std::vector<int> parents(int child) const;
    int parent_count(int child) const;
    std::vector<std::pair<int, int>> edges() const;  // (parent, child), sorted
    std::size_t edge_count() const;

    // Nodes of one directed cycle in traversal order, or empty when acyclic.
    std::vector<int> find_cycle() const;
    bool is_acyclic() const { return find_cycle().empty(); }
    std::vector<int> topological_order() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<std::uint32_t> parents_;
};

// Cached BIC family scores over a dataset. Identical rows are collapsed into
// weighted unique rows first.
class FamilyScorer {
public:
    explicit FamilyScorer(const DiscreteData& data);

    // sum_jk N_jk ln(N_jk / N_j) - (ln N / 2) * q * (r - 1)
    double local(int node, std::uint32_t parent_mask);
    double total(const Dag& dag);
    // Loss in the child's family score when the edge parent -> child is removed.
    double edge_contribution(const Dag& dag, int parent, int child);

    std::size_t samples() const { return samples_; }
    std::size_t cache_size() const { return cache_.size(); }

private:
    double compute(int node, std::uint32_t parent_mask) const;

    std::vector<std::vector<int>> rows_;
    std::vector<double> weights_;
    std::vector<int> cards_;
    std::size_t samples_ = 0;
    std::unordered_map<std::uint64_t, double> cache_;
};

// BIC of a DAG: sum over nodes of the family scores. Higher is better.
double bic_score(const Dag& dag, const DiscreteData& data);

struct GaConfig {
    int population_size = 64;
    int generations = 200;
    double mutation_rate = 0.05;   // per node, chance of one random edge-bit flip
    double crossover_rate = 0.8;
    int elitism = 2;
    int max_parents = 4;
    int tournament_size = 3;
    bool local_search = true;  // greedy seed in the initial population, greedy refinement of the final best
    std::uint64_t rng_seed = 1;
};

// Throws ConfigError on out-of-range values.
void validate_ga_config(const GaConfig& cfg);

struct StructureResult {
    Dag dag;
    double score = 0.0;
    std::vector<double> best_per_generation;  // index 0 is the initial population
    std::size_t offspring_created = 0;
};

// Removes cycle edges (lowest family-score contribution first) and trims
// parent sets above max_parents the same way.
void repair_dag(Dag& dag, FamilyScorer& scorer, int max_parents);

// Greedy single-edge additions, removals and reversals while the score improves; keeps the
// graph acyclic and within max_parents. Returns the final score.
double hill_climb(Dag& dag, FamilyScorer& scorer, int max_parents);

// Called with every offspring after repair; used by tests to audit acyclicity.
using OffspringObserver = std::function<void(const Dag&)>;

StructureResult learn_structure(const DiscreteData& data, const GaConfig& cfg, const OffspringObserver& observer = {});

// P(node | parents) for one node. Rows are indexed by the mixed-radix parent
// configuration (first parent least significant). Rows never observed in
// training are implicitly uniform and not stored.
struct Cpt {
    int node = 0;
    int card = 1;
    std::vector<int> parents;
    std::vector<int> parent_cards;
    std::map<std::int64_t, Eigen::VectorXd> rows;

    std::int64_t parent_config_count() const;
    // Configuration index from a full assignment of all variables.
    std::int64_t config_of(std::span<const int> assignment) const;
    double prob(std::int64_t config, int state) const;
    Eigen::VectorXd row(std::int64_t config) const;
};

struct BayesNet {
    Dag dag;
    std::vector<int> cards;
    std::vector<Cpt> cpts;
    int class_index = 0;

    int variables() const { return static_cast<int>(cards.size()); }
    int class_count() const { return cards[static_cast<std::size_t>(class_index)]; }
    // Product of all CPT entries for a complete assignment.
    double joint(std::span<const int> assignment) const;
};

// Dirichlet-smoothed MLE: (N_jk + alpha) / (N_j + alpha * r).
BayesNet learn_parameters(const Dag& dag, const DiscreteData& data, double alpha, int class_index);

struct PosteriorDistribution {
    Eigen::VectorXd probabilities;

    // Lowest index wins ties.
    int argmax() const;
};

// ln P(e, c_i) for every class state; evidence holds the states of every
// non-class variable in index order.
Eigen::VectorXd log_class_joint(const BayesNet& net, std::span<const int> evidence);

// exp-normalizes a vector of log joints; adding a constant to all entries
// leaves the result unchanged.
PosteriorDistribution normalize_log_joint(const Eigen::VectorXd& log_joint);

PosteriorDistribution posterior(const BayesNet& net, std::span<const int> evidence);

}  // namespace symrec
