#include "symrec/config.hpp"

#include "symrec/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace symrec {

namespace {

struct Binding {
    ConfigKey key;
    std::function<void(PipelineConfig&, std::string_view)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
    return v;
}

template <>
bool parse_value<bool>(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key) + " (expected true or false)");
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

template <typename T, typename Access>
Binding bind(std::string name, std::string help, Access access) {
    Binding b;
    b.key = {name, std::move(help)};
    b.set = [name, access](PipelineConfig& c, std::string_view text) { access(c) = parse_value<T>(name, text); };
    b.get = [access](const PipelineConfig& c) {
        if constexpr (std::is_same_v<T, bool>)
            return std::string(access(c) ? "true" : "false");
        else if constexpr (std::is_floating_point_v<T>)
            return format_double(access(c));
        else
            return std::to_string(access(c));
    };
    return b;
}

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        std::vector<Binding> t;
        t.push_back(bind<double>("eps_ratio", "junction distance tolerance, fraction of symbol extent",
                                 [](auto& c) -> auto& { return c.tolerance.eps_ratio; }));
        t.push_back(bind<double>("angle_eps", "parallel/collinear angle tolerance in degrees",
                                 [](auto& c) -> auto& { return c.tolerance.angle_eps; }));
        t.push_back(bind<double>("par_dist_ratio", "parallel line distance tolerance, fraction of symbol extent",
                                 [](auto& c) -> auto& { return c.tolerance.par_dist_ratio; }));
        t.push_back(bind<std::size_t>("initial_bins", "initial histogram bins for connection-density intervals",
                                      [](auto& c) -> auto& { return c.schema.initial_bins; }));
        t.push_back(bind<double>("overlap_ratio", "fuzzy overlap of density intervals, in [0, 0.5)",
                                 [](auto& c) -> auto& { return c.schema.overlap_ratio; }));
        t.push_back(bind<double>("length_small_high", "upper bound of the small relative-length interval",
                                 [](auto& c) -> auto& { return c.schema.length_scheme.intervals[0].high; }));
        t.push_back(bind<double>("length_medium_low", "lower bound of the medium relative-length interval",
                                 [](auto& c) -> auto& { return c.schema.length_scheme.intervals[1].low; }));
        t.push_back(bind<double>("length_medium_high", "upper bound of the medium relative-length interval",
                                 [](auto& c) -> auto& { return c.schema.length_scheme.intervals[1].high; }));
        t.push_back(bind<double>("length_full_low", "lower bound of the full relative-length interval",
                                 [](auto& c) -> auto& { return c.schema.length_scheme.intervals[2].low; }));
        t.push_back(bind<double>("angle_small_high", "upper bound of the small relative-angle interval (degrees)",
                                 [](auto& c) -> auto& { return c.schema.angle_scheme.intervals[0].high; }));
        t.push_back(bind<double>("angle_medium_low", "lower bound of the medium relative-angle interval (degrees)",
                                 [](auto& c) -> auto& { return c.schema.angle_scheme.intervals[1].low; }));
        t.push_back(bind<double>("angle_medium_high", "upper bound of the medium relative-angle interval (degrees)",
                                 [](auto& c) -> auto& { return c.schema.angle_scheme.intervals[1].high; }));
        t.push_back(bind<double>("angle_full_low", "lower bound of the full relative-angle interval (degrees)",
                                 [](auto& c) -> auto& { return c.schema.angle_scheme.intervals[2].low; }));
        t.push_back(bind<std::size_t>("discretize_bins", "initial histogram bins for feature discretization",
                                      [](auto& c) -> auto& { return c.discretize_bins; }));
        t.push_back(bind<int>("population_size", "GA population size",
                              [](auto& c) -> auto& { return c.ga.population_size; }));
        t.push_back(bind<int>("generations", "GA generations", [](auto& c) -> auto& { return c.ga.generations; }));
        t.push_back(bind<double>("mutation_rate", "GA per-node edge flip probability",
                                 [](auto& c) -> auto& { return c.ga.mutation_rate; }));
        t.push_back(bind<double>("crossover_rate", "GA crossover probability",
                                 [](auto& c) -> auto& { return c.ga.crossover_rate; }));
        t.push_back(bind<int>("elitism", "GA elite individuals copied per generation",
                              [](auto& c) -> auto& { return c.ga.elitism; }));
        t.push_back(bind<int>("max_parents", "maximum parents per network node",
                              [](auto& c) -> auto& { return c.ga.max_parents; }));
        t.push_back(bind<int>("tournament_size", "GA tournament size",
                              [](auto& c) -> auto& { return c.ga.tournament_size; }));
        t.push_back(bind<bool>("local_search", "seed and finish the GA with greedy edge search",
                               [](auto& c) -> auto& { return c.ga.local_search; }));
        t.push_back(bind<std::uint64_t>("rng_seed", "seed for structure learning",
                                        [](auto& c) -> auto& { return c.ga.rng_seed; }));
        t.push_back(bind<double>("alpha", "Dirichlet pseudo-count for parameter learning",
                                 [](auto& c) -> auto& { return c.alpha; }));
        return t;
    }();
    return table;
}

const Binding& find_binding(std::string_view key) {
    for (const auto& b : bindings())
        if (b.key.name == key) return b;
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        for (const auto& b : bindings()) k.push_back(b.key);
        return k;
    }();
    return keys;
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value) {
    find_binding(key).set(cfg, trim(value));
}

std::string get_setting(const PipelineConfig& cfg, std::string_view key) { return find_binding(key).get(cfg); }

void apply_config_text(PipelineConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::string config_to_text(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& b : bindings()) out += "# " + b.key.help + "\n" + b.key.name + " = " + b.get(cfg) + "\n";
    return out;
}

void validate_config(const PipelineConfig& cfg) {
    if (!(cfg.tolerance.eps_ratio > 0)) throw ConfigError("eps_ratio must be positive");
    if (cfg.tolerance.angle_eps < 0 || cfg.tolerance.angle_eps > 90) throw ConfigError("angle_eps must be in [0, 90]");
    if (cfg.tolerance.par_dist_ratio < 0) throw ConfigError("par_dist_ratio must be >= 0");
    if (cfg.schema.initial_bins < 1) throw ConfigError("initial_bins must be >= 1");
    if (cfg.schema.overlap_ratio < 0 || cfg.schema.overlap_ratio >= 0.5) throw ConfigError("overlap_ratio must be in [0, 0.5)");
    if (cfg.discretize_bins < 1) throw ConfigError("discretize_bins must be >= 1");
    if (!(cfg.alpha > 0)) throw ConfigError("alpha must be positive");
    for (const auto* scheme : {&cfg.schema.length_scheme, &cfg.schema.angle_scheme}) {
        try {
            validate_scheme(*scheme);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("interval defaults: ") + e.what());
        }
        if (scheme->size() != 3) throw ConfigError("length and angle schemes need exactly 3 intervals");
    }
    validate_ga_config(cfg.ga);
}

}  // namespace symrec
