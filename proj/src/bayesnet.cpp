#include "symrec/bayesnet.hpp"

#include "symrec/error.hpp"
#include "symrec/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace symrec {

void validate_data(const DiscreteData& data) {
    if (data.variables() == 0 || data.variables() > kMaxVariables)
        throw std::invalid_argument("variable count must be in 1.." + std::to_string(kMaxVariables));
    if (data.states.cols() != data.variables()) throw std::invalid_argument("data columns do not match cardinalities");
    for (int v = 0; v < data.variables(); ++v) {
        if (data.cards[static_cast<std::size_t>(v)] < 1) throw std::invalid_argument("cardinality must be >= 1");
        for (Eigen::Index r = 0; r < data.rows(); ++r) {
            const int s = data.states(r, v);
            if (s < 0 || s >= data.cards[static_cast<std::size_t>(v)])
                throw std::invalid_argument("state out of range in column " + std::to_string(v));
        }
    }
}

// ---------------------------------------------------------------- Dag

std::vector<int> Dag::parents(int child) const {
    std::vector<int> out;
    for (std::uint32_t m = parent_mask(child); m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

int Dag::parent_count(int child) const { return std::popcount(parent_mask(child)); }

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int p = 0; p < size(); ++p)
        for (int c = 0; c < size(); ++c)
            if (has_edge(p, c)) out.emplace_back(p, c);
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t n = 0;
    for (auto m : parents_) n += static_cast<std::size_t>(std::popcount(m));
    return n;
}

std::vector<int> Dag::find_cycle() const {
    const int n = size();
    std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 on stack, 2 done
    std::vector<int> path;
    std::vector<int> cycle;

    // children lists, ascending
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c)
        for (int p : parents(c)) children[static_cast<std::size_t>(p)].push_back(c);

    std::function<bool(int)> visit = [&](int v) {
        color[static_cast<std::size_t>(v)] = 1;
        path.push_back(v);
        for (int w : children[static_cast<std::size_t>(v)]) {
            if (color[static_cast<std::size_t>(w)] == 1) {
                const auto it = std::find(path.begin(), path.end(), w);
                cycle.assign(it, path.end());
                return true;
            }
            if (color[static_cast<std::size_t>(w)] == 0 && visit(w)) return true;
        }
        path.pop_back();
        color[static_cast<std::size_t>(v)] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (color[static_cast<std::size_t>(v)] == 0 && visit(v)) break;
    return cycle;
}

std::vector<int> Dag::topological_order() const {
    const int n = size();
    std::vector<int> order;
    std::uint32_t placed = 0;
    while (static_cast<int>(order.size()) < n) {
        bool progressed = false;
        for (int v = 0; v < n; ++v) {
            if ((placed >> v) & 1u) continue;
            if ((parent_mask(v) & ~placed) == 0) {
                order.push_back(v);
                placed |= 1u << v;
                progressed = true;
                break;
            }
        }
        if (!progressed) throw std::logic_error("graph has a cycle");
    }
    return order;
}

// ---------------------------------------------------------------- scoring

FamilyScorer::FamilyScorer(const DiscreteData& data) : cards_(data.cards) {
    validate_data(data);
    if (data.rows() == 0) throw std::invalid_argument("cannot score an empty dataset");
    samples_ = static_cast<std::size_t>(data.rows());
    std::map<std::vector<int>, double> unique;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        std::vector<int> row(static_cast<std::size_t>(data.variables()));
        for (int v = 0; v < data.variables(); ++v) row[static_cast<std::size_t>(v)] = data.states(r, v);
        unique[row] += 1.0;
    }
    for (auto& [row, w] : unique) {
        rows_.push_back(row);
        weights_.push_back(w);
    }
}

double FamilyScorer::compute(int node, std::uint32_t parent_mask) const {
    std::vector<int> parents;
    double configs = 1.0;
    for (std::uint32_t m = parent_mask; m; m &= m - 1) {
        const int p = std::countr_zero(m);
        parents.push_back(p);
        configs *= cards_[static_cast<std::size_t>(p)];
    }
    const int r = cards_[static_cast<std::size_t>(node)];
    std::map<std::vector<int>, std::vector<double>> counts;
    std::vector<int> key(parents.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t k = 0; k < parents.size(); ++k) key[k] = rows_[i][static_cast<std::size_t>(parents[k])];
        auto& c = counts[key];
        if (c.empty()) c.assign(static_cast<std::size_t>(r), 0.0);
        c[static_cast<std::size_t>(rows_[i][static_cast<std::size_t>(node)])] += weights_[i];
    }
    double loglik = 0.0;
    for (const auto& [cfg, c] : counts) {
        const double nj = std::accumulate(c.begin(), c.end(), 0.0);
        for (double njk : c)
            if (njk > 0) loglik += njk * std::log(njk / nj);
    }
    const double penalty = 0.5 * std::log(static_cast<double>(samples_)) * configs * (r - 1);
    return loglik - penalty;
}

double FamilyScorer::local(int node, std::uint32_t parent_mask) {
    const std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | parent_mask;
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    const double s = compute(node, parent_mask);
    cache_.emplace(key, s);
    return s;
}

double FamilyScorer::total(const Dag& dag) {
    double s = 0.0;
    for (int v = 0; v < dag.size(); ++v) s += local(v, dag.parent_mask(v));
    return s;
}

double FamilyScorer::edge_contribution(const Dag& dag, int parent, int child) {
    const std::uint32_t mask = dag.parent_mask(child);
    return local(child, mask) - local(child, mask & ~(1u << parent));
}

double bic_score(const Dag& dag, const DiscreteData& data) {
    FamilyScorer scorer(data);
    return scorer.total(dag);
}

// ---------------------------------------------------------------- GA

void validate_ga_config(const GaConfig& cfg) {
    if (cfg.population_size < 2) throw ConfigError("population_size must be >= 2");
    if (cfg.generations < 0) throw ConfigError("generations must be >= 0");
    if (cfg.mutation_rate < 0 || cfg.mutation_rate > 1) throw ConfigError("mutation_rate must be in [0,1]");
    if (cfg.crossover_rate < 0 || cfg.crossover_rate > 1) throw ConfigError("crossover_rate must be in [0,1]");
    if (cfg.elitism < 0 || cfg.elitism > cfg.population_size) throw ConfigError("elitism must be in [0, population_size]");
    if (cfg.max_parents < 0) throw ConfigError("max_parents must be >= 0");
    if (cfg.tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
}

void repair_dag(Dag& dag, FamilyScorer& scorer, int max_parents) {
    const auto weakest = [&](const std::vector<std::pair<int, int>>& candidates) {
        auto best = candidates.front();
        double best_gain = scorer.edge_contribution(dag, best.first, best.second);
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            const double g = scorer.edge_contribution(dag, candidates[i].first, candidates[i].second);
            if (g < best_gain) {
                best_gain = g;
                best = candidates[i];
            }
        }
        return best;
    };

    for (int c = 0; c < dag.size(); ++c) {
        while (dag.parent_count(c) > max_parents) {
            std::vector<std::pair<int, int>> candidates;
            for (int p : dag.parents(c)) candidates.emplace_back(p, c);
            const auto [p, child] = weakest(candidates);
            dag.remove_edge(p, child);
        }
    }
    for (auto cycle = dag.find_cycle(); !cycle.empty(); cycle = dag.find_cycle()) {
        std::vector<std::pair<int, int>> candidates;
        for (std::size_t i = 0; i < cycle.size(); ++i) candidates.emplace_back(cycle[i], cycle[(i + 1) % cycle.size()]);
        const auto [p, child] = weakest(candidates);
        dag.remove_edge(p, child);
    }
}

namespace {

Dag random_dag(int n, Rng& rng) {
    Dag dag(n);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    const double p = n > 1 ? std::min(1.0, 2.0 / (n - 1)) : 0.0;
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (rng.bernoulli(p)) dag.add_edge(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(i)]);
    return dag;
}

Dag uniform_crossover(const Dag& a, const Dag& b, Rng& rng) {
    Dag child(a.size());
    for (int c = 0; c < a.size(); ++c) {
        std::uint32_t mask = 0;
        for (int p = 0; p < a.size(); ++p) {
            if (p == c) continue;
            const bool bit = rng.bernoulli(0.5) ? a.has_edge(p, c) : b.has_edge(p, c);
            if (bit) mask |= 1u << p;
        }
        child.set_parent_mask(c, mask);
    }
    return child;
}

void mutate(Dag& dag, double rate, Rng& rng) {
    const int n = dag.size();
    if (n < 2) return;
    for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(rate)) continue;
        const int parent = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int child = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        if (child >= parent) ++child;
        dag.flip_edge(parent, child);
    }
}

}  // namespace

double hill_climb(Dag& dag, FamilyScorer& scorer, int max_parents) {
    const int n = dag.size();
    for (;;) {
        double best_gain = 1e-9;
        int best_p = -1, best_c = -1;
        bool reverse = false;
        for (int c = 0; c < n; ++c) {
            const std::uint32_t mask = dag.parent_mask(c);
            const double current = scorer.local(c, mask);
            for (int p = 0; p < n; ++p) {
                if (p == c) continue;
                const std::uint32_t flipped = mask ^ (1u << p);
                const double gain = scorer.local(c, flipped) - current;
                if (!dag.has_edge(p, c)) {
                    if (gain <= best_gain || dag.parent_count(c) >= max_parents) continue;
                    Dag trial = dag;
                    trial.add_edge(p, c);
                    if (!trial.is_acyclic()) continue;
                    best_gain = gain, best_p = p, best_c = c, reverse = false;
                    continue;
                }
                if (gain > best_gain) best_gain = gain, best_p = p, best_c = c, reverse = false;
                if (dag.parent_count(p) >= max_parents) continue;
                const std::uint32_t pmask = dag.parent_mask(p);
                const double rgain = gain + scorer.local(p, pmask | (1u << c)) - scorer.local(p, pmask);
                if (rgain <= best_gain) continue;
                Dag trial = dag;
                trial.remove_edge(p, c);
                trial.add_edge(c, p);
                if (!trial.is_acyclic()) continue;
                best_gain = rgain, best_p = p, best_c = c, reverse = true;
            }
        }
        if (best_p < 0) break;
        dag.flip_edge(best_p, best_c);
        if (reverse) dag.add_edge(best_c, best_p);
    }
    return scorer.total(dag);
}

StructureResult learn_structure(const DiscreteData& data, const GaConfig& cfg, const OffspringObserver& observer) {
    validate_ga_config(cfg);
    if (data.rows() < 2) throw std::invalid_argument("structure learning needs at least 2 rows");
    FamilyScorer scorer(data);
    Rng rng(cfg.rng_seed);
    const int n = data.variables();

    const auto audit = [&](const Dag& d) {
        if (!d.is_acyclic()) throw std::logic_error("offspring is cyclic after repair");
        if (observer) observer(d);
    };

    std::vector<Dag> population;
    population.reserve(static_cast<std::size_t>(cfg.population_size));
    population.emplace_back(n);
    if (cfg.local_search && cfg.population_size > 1) {
        Dag greedy(n);
        hill_climb(greedy, scorer, cfg.max_parents);
        population.push_back(std::move(greedy));
    }
    while (static_cast<int>(population.size()) < cfg.population_size) {
        Dag d = random_dag(n, rng);
        repair_dag(d, scorer, cfg.max_parents);
        population.push_back(std::move(d));
    }
    std::vector<double> scores(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) scores[i] = scorer.total(population[i]);

    StructureResult result;
    const auto ranking = [&] {
        std::vector<std::size_t> idx(population.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        return idx;
    };
    const auto tournament = [&]() -> const Dag& {
        std::size_t best = rng.below(population.size());
        for (int k = 1; k < cfg.tournament_size; ++k) {
            const std::size_t c = rng.below(population.size());
            if (scores[c] > scores[best] || (scores[c] == scores[best] && c < best)) best = c;
        }
        return population[best];
    };

    result.best_per_generation.push_back(scores[ranking().front()]);
    for (int gen = 0; gen < cfg.generations; ++gen) {
        const auto order = ranking();
        std::vector<Dag> next;
        next.reserve(population.size());
        for (int e = 0; e < cfg.elitism; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);
        while (next.size() < population.size()) {
            const Dag& a = tournament();
            const Dag& b = tournament();
            Dag child = rng.bernoulli(cfg.crossover_rate) ? uniform_crossover(a, b, rng) : a;
            mutate(child, cfg.mutation_rate, rng);
            repair_dag(child, scorer, cfg.max_parents);
            audit(child);
            ++result.offspring_created;
            next.push_back(std::move(child));
        }
        population = std::move(next);
        for (std::size_t i = 0; i < population.size(); ++i) scores[i] = scorer.total(population[i]);
        result.best_per_generation.push_back(scores[ranking().front()]);
    }

    const std::size_t best = ranking().front();
    result.dag = population[best];
    result.score = scores[best];
    if (cfg.local_search) result.score = hill_climb(result.dag, scorer, cfg.max_parents);
    return result;
}

// ---------------------------------------------------------------- parameters

std::int64_t Cpt::parent_config_count() const {
    std::int64_t q = 1;
    for (int c : parent_cards) {
        if (q > std::numeric_limits<std::int64_t>::max() / std::max(c, 1))
            throw std::overflow_error("parent configuration count overflows");
        q *= c;
    }
    return q;
}

std::int64_t Cpt::config_of(std::span<const int> assignment) const {
    std::int64_t idx = 0, stride = 1;
    for (std::size_t k = 0; k < parents.size(); ++k) {
        idx += stride * assignment[static_cast<std::size_t>(parents[k])];
        stride *= parent_cards[k];
    }
    return idx;
}

double Cpt::prob(std::int64_t config, int state) const {
    if (const auto it = rows.find(config); it != rows.end()) return it->second[state];
    return 1.0 / card;
}

Eigen::VectorXd Cpt::row(std::int64_t config) const {
    if (const auto it = rows.find(config); it != rows.end()) return it->second;
    return Eigen::VectorXd::Constant(card, 1.0 / card);
}

double BayesNet::joint(std::span<const int> assignment) const {
    double p = 1.0;
    for (const auto& cpt : cpts) p *= cpt.prob(cpt.config_of(assignment), assignment[static_cast<std::size_t>(cpt.node)]);
    return p;
}

BayesNet learn_parameters(const Dag& dag, const DiscreteData& data, double alpha, int class_index) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    validate_data(data);
    if (data.rows() == 0) throw std::invalid_argument("cannot learn parameters from empty data");
    if (dag.size() != data.variables()) throw std::invalid_argument("DAG size does not match data");
    if (!dag.is_acyclic()) throw std::invalid_argument("structure is cyclic");
    if (class_index < 0 || class_index >= data.variables()) throw std::invalid_argument("class index out of range");

    BayesNet net;
    net.dag = dag;
    net.cards = data.cards;
    net.class_index = class_index;
    std::vector<int> assignment(static_cast<std::size_t>(data.variables()));
    for (int v = 0; v < data.variables(); ++v) {
        Cpt cpt;
        cpt.node = v;
        cpt.card = data.cards[static_cast<std::size_t>(v)];
        cpt.parents = dag.parents(v);
        for (int p : cpt.parents) cpt.parent_cards.push_back(data.cards[static_cast<std::size_t>(p)]);
        (void)cpt.parent_config_count();

        std::map<std::int64_t, Eigen::VectorXd> counts;
        for (Eigen::Index r = 0; r < data.rows(); ++r) {
            for (int u = 0; u < data.variables(); ++u) assignment[static_cast<std::size_t>(u)] = data.states(r, u);
            auto [it, inserted] = counts.try_emplace(cpt.config_of(assignment));
            if (inserted) it->second = Eigen::VectorXd::Zero(cpt.card);
            it->second[data.states(r, v)] += 1.0;
        }
        for (auto& [config, c] : counts) {
            const double nj = c.sum();
            cpt.rows[config] = (c.array() + alpha) / (nj + alpha * cpt.card);
        }
        net.cpts.push_back(std::move(cpt));
    }
    return net;
}

// ---------------------------------------------------------------- inference

int PosteriorDistribution::argmax() const {
    int best = 0;
    for (int i = 1; i < probabilities.size(); ++i)
        if (probabilities[i] > probabilities[best]) best = i;
    return best;
}

Eigen::VectorXd log_class_joint(const BayesNet& net, std::span<const int> evidence) {
    const int n = net.variables();
    if (static_cast<int>(evidence.size()) != n - 1)
        throw InputError("evidence must hold " + std::to_string(n - 1) + " states, got " + std::to_string(evidence.size()));
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int v = 0, e = 0; v < n; ++v) {
        if (v == net.class_index) continue;
        const int s = evidence[static_cast<std::size_t>(e++)];
        if (s < 0 || s >= net.cards[static_cast<std::size_t>(v)])
            throw InputError("evidence state out of range for variable " + std::to_string(v));
        assignment[static_cast<std::size_t>(v)] = s;
    }
    Eigen::VectorXd out(net.class_count());
    for (int c = 0; c < net.class_count(); ++c) {
        assignment[static_cast<std::size_t>(net.class_index)] = c;
        double lp = 0.0;
        for (const auto& cpt : net.cpts) lp += std::log(cpt.prob(cpt.config_of(assignment), assignment[static_cast<std::size_t>(cpt.node)]));
        out[c] = lp;
    }
    return out;
}

PosteriorDistribution normalize_log_joint(const Eigen::VectorXd& log_joint) {
    PosteriorDistribution post;
    const Eigen::ArrayXd shifted = (log_joint.array() - log_joint.maxCoeff()).exp();
    post.probabilities = shifted / shifted.sum();
    return post;
}

PosteriorDistribution posterior(const BayesNet& net, std::span<const int> evidence) {
    return normalize_log_joint(log_class_joint(net, evidence));
}

}  // namespace symrec
