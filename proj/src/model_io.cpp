#include "symrec/model_io.hpp"

#include "symrec/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace symrec {

using json = nlohmann::ordered_json;

namespace {

json scheme_to_json(const IntervalScheme& s) {
    json iv = json::array();
    for (const auto& i : s.intervals) iv.push_back({i.low, i.high});
    return {{"domain", {s.domain_low, s.domain_high}}, {"intervals", iv}};
}

IntervalScheme scheme_from_json(const json& j) {
    IntervalScheme s;
    s.domain_low = j.at("domain").at(0).get<double>();
    s.domain_high = j.at("domain").at(1).get<double>();
    for (const auto& iv : j.at("intervals")) s.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    return s;
}

TrainedModel from_json(const json& j) {
    if (j.value("format", std::string{}) != kModelFormat) throw InputError("not a symrec model file");
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion)
        throw ModelVersionError("model schema version " + std::to_string(version) + " is not supported (expected " +
                                std::to_string(kModelSchemaVersion) + ")");
    if (j.at("signature_layout").get<std::string>() != kSignatureLayout)
        throw ModelVersionError("unsupported signature layout '" + j.at("signature_layout").get<std::string>() + "'");

    TrainedModel m;
    for (const auto& [key, value] : j.at("config").items()) apply_setting(m.config, key, value.get<std::string>());
    validate_config(m.config);

    const json& schema = j.at("signature_schema");
    m.schema.density_scheme = scheme_from_json(schema.at("density"));
    m.schema.length_scheme = scheme_from_json(schema.at("length"));
    m.schema.angle_scheme = scheme_from_json(schema.at("angle"));

    const json& disc = j.at("discretization");
    if (disc.size() != kSignatureSize) throw InputError("model must hold 21 discretized columns");
    for (std::size_t f = 0; f < kSignatureSize; ++f) {
        auto& col = m.discretization.columns[f];
        col.feature_index = disc.at(f).at("feature").get<int>();
        col.cutpoints = disc.at(f).at("cutpoints").get<std::vector<double>>();
        if (col.feature_index != static_cast<int>(f) + 1) throw InputError("discretization columns out of order");
    }

    m.classes = j.at("classes").get<std::vector<std::string>>();

    const json& net = j.at("network");
    m.net.cards = net.at("cards").get<std::vector<int>>();
    m.net.class_index = net.at("class_index").get<int>();
    m.net.dag = Dag(static_cast<int>(m.net.cards.size()));
    for (const auto& e : net.at("edges")) m.net.dag.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    if (!m.net.dag.is_acyclic()) throw InputError("model network is cyclic");
    for (const auto& jc : net.at("cpts")) {
        Cpt c;
        c.node = jc.at("node").get<int>();
        c.card = jc.at("card").get<int>();
        c.parents = jc.at("parents").get<std::vector<int>>();
        c.parent_cards = jc.at("parent_cards").get<std::vector<int>>();
        for (const auto& row : jc.at("rows")) {
            const auto p = row.at("p").get<std::vector<double>>();
            if (static_cast<int>(p.size()) != c.card) throw InputError("CPT row width mismatch");
            c.rows[row.at("config").get<std::int64_t>()] = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
        }
        m.net.cpts.push_back(std::move(c));
    }
    if (m.net.cpts.size() != m.net.cards.size() || m.net.class_count() != static_cast<int>(m.classes.size()))
        throw InputError("model network does not match its class list");

    m.bic = j.at("training").at("bic").get<double>();
    m.training_rows = j.at("training").at("rows").get<std::size_t>();
    return m;
}

}  // namespace

std::string save_model(const TrainedModel& m) {
    json j;
    j["format"] = kModelFormat;
    j["schema_version"] = kModelSchemaVersion;
    j["signature_layout"] = kSignatureLayout;

    json cfg;
    for (const auto& key : config_keys()) cfg[key.name] = get_setting(m.config, key.name);
    j["config"] = cfg;

    j["signature_schema"] = {{"density", scheme_to_json(m.schema.density_scheme)},
                             {"length", scheme_to_json(m.schema.length_scheme)},
                             {"angle", scheme_to_json(m.schema.angle_scheme)}};

    json disc = json::array();
    for (const auto& col : m.discretization.columns)
        disc.push_back({{"feature", col.feature_index}, {"cutpoints", col.cutpoints}});
    j["discretization"] = disc;
    j["classes"] = m.classes;

    json edges = json::array();
    for (const auto& [p, c] : m.net.dag.edges()) edges.push_back({p, c});
    json cpts = json::array();
    for (const auto& c : m.net.cpts) {
        json rows = json::array();
        for (const auto& [config, p] : c.rows)
            rows.push_back({{"config", config}, {"p", std::vector<double>(p.data(), p.data() + p.size())}});
        cpts.push_back({{"node", c.node},
                        {"card", c.card},
                        {"parents", c.parents},
                        {"parent_cards", c.parent_cards},
                        {"rows", rows}});
    }
    j["network"] = {{"variables", m.net.variables()},
                    {"class_index", m.net.class_index},
                    {"cards", m.net.cards},
                    {"edges", edges},
                    {"cpts", cpts}};
    j["training"] = {{"rows", m.training_rows}, {"bic", m.bic}};
    return j.dump(1) + "\n";
}

TrainedModel load_model(std::string_view json_text) {
    try {
        return from_json(json::parse(json_text));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed model file: ") + e.what());
    }
}

void write_model_file(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << save_model(model);
}

TrainedModel read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

std::string describe_model(const TrainedModel& m) {
    std::ostringstream out;
    out << "format " << kModelFormat << " v" << kModelSchemaVersion << ", signature " << kSignatureLayout << "\n";
    out << "trained on " << m.training_rows << " symbols, " << m.classes.size() << " classes, BIC " << m.bic << "\n\n";
    out << "[config]\n" << config_to_text(m.config) << "\n";
    const auto print_scheme = [&](const char* name, const IntervalScheme& s) {
        out << name << ":";
        for (const auto& iv : s.intervals) out << " [" << iv.low << ", " << iv.high << "]";
        out << '\n';
    };
    out << "[signature schema]\n";
    print_scheme("density", m.schema.density_scheme);
    print_scheme("length", m.schema.length_scheme);
    print_scheme("angle", m.schema.angle_scheme);
    out << "\n[discretization]\n";
    for (const auto& col : m.discretization.columns) {
        out << "f" << col.feature_index << " states=" << col.state_count() << " cutpoints:";
        for (double c : col.cutpoints) out << ' ' << c;
        out << '\n';
    }
    out << "\n[classes]\n";
    for (std::size_t i = 0; i < m.classes.size(); ++i) out << i << ' ' << m.classes[i] << '\n';
    const auto node_name = [&](int v) { return v == m.net.class_index ? std::string("C") : "f" + std::to_string(v + 1); };
    out << "\n[network] " << m.net.dag.edge_count() << " edges\n";
    for (const auto& [p, c] : m.net.dag.edges()) out << node_name(p) << " -> " << node_name(c) << '\n';
    out << "\n[cpts]\n";
    for (const auto& c : m.net.cpts)
        out << node_name(c.node) << " card=" << c.card << " parent_configs=" << c.parent_config_count()
            << " observed_rows=" << c.rows.size() << '\n';
    return out.str();
}

}  // namespace symrec
