#include "rgspur/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace rgspur {

namespace {

using nlohmann::json;

void require_object(const json &node, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!node.is_object()) {
        throw ConfigError(fmt::format("'{}' must be an object", where));
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto &item : node.items()) {
        if (!keys.contains(item.key())) {
            throw ConfigError(fmt::format("unknown key '{}' in '{}'", item.key(), where));
        }
    }
}

template <class T> void read(const json &node, const char *key, T &out, const std::string &where) {
    if (!node.contains(key)) {
        return;
    }
    const json &value = node.at(key);
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!value.is_number()) {
                throw ConfigError("expected a number");
            }
        } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!value.is_number_unsigned()) {
                throw ConfigError("expected a non-negative integer");
            }
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!value.is_boolean()) {
                throw ConfigError("expected true or false");
            }
        }
        out = value.get<T>();
    } catch (const std::exception &e) {
        throw ConfigError(fmt::format("'{}.{}': {}", where, key, e.what()));
    }
}

template <class T> void read(const json &node, const char *key, std::optional<T> &out, const std::string &where) {
    if (!node.contains(key) || node.at(key).is_null()) {
        return;
    }
    T value{};
    read(node, key, value, where);
    out = value;
}

std::size_t to_count(double v, const std::string &param) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 0.0) {
        throw ConfigError(fmt::format("sweep parameter '{}' needs non-negative integers, got {}", param, v));
    }
    return static_cast<std::size_t>(r);
}

} // namespace

std::vector<double> SweepGrid::values() const {
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(start);
        return out;
    }
    for (std::size_t i = 0; i < points; ++i) {
        if (i + 1 == points) {
            out.push_back(stop);
        } else {
            const double t = static_cast<double>(i) / static_cast<double>(points - 1);
            out.push_back(start + (stop - start) * t);
        }
    }
    return out;
}

const std::vector<std::string> &sweep_parameters() {
    static const std::vector<std::string> names{"p_depol",  "eps_logical_x", "eps_logical_z", "eps_logical",
                                                "tau_half", "tau_join",      "tau_pur_circ",  "hop_length_km",
                                                "baseline_rounds"};
    return names;
}

void RunConfig::validate() const {
    try {
        chain.validate();
        TimingParams t = timing.params;
        if (timing.L_total) {
            t.L_total = *timing.L_total;
        }
        if (timing.n_pur) {
            t.n_pur = *timing.n_pur;
        }
        t.validate();
    } catch (const ParameterError &e) {
        throw ConfigError(e.what());
    }
    if (baseline.target_fidelity && !(*baseline.target_fidelity >= 0.0 && *baseline.target_fidelity < 1.0)) {
        throw ConfigError("baseline.target_fidelity must be in [0, 1)");
    }
    if (baseline.target_fidelity && baseline.rounds < 1) {
        throw ConfigError("baseline.rounds must be at least 1 when a target fidelity is set");
    }
    if (scenarios.empty()) {
        throw ConfigError("no scenarios selected");
    }
    for (const std::string &s : scenarios) {
        if (s != "raw" && s != "baseline" && s != "fig5" && !(s.starts_with("custom:") && s.size() > 7)) {
            throw UnknownScenarioError(fmt::format("unknown scenario '{}'", s));
        }
    }
    if (sweep.points < 1) {
        throw ConfigError("sweep grid is empty");
    }
    const auto &names = sweep_parameters();
    if (std::find(names.begin(), names.end(), sweep.param) == names.end()) {
        throw ConfigError(fmt::format("unknown sweep parameter '{}'", sweep.param));
    }
    if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop)) {
        throw ConfigError("sweep bounds must be finite");
    }
    for (double v : sweep.values()) {
        const RunConfig point = with_parameter(*this, sweep.param, v);
        try {
            resolved_timing(point).validate();
        } catch (const ParameterError &e) {
            throw ConfigError(fmt::format("sweep value {} = {}: {}", sweep.param, v, e.what()));
        }
    }
    if (!link_success.monte_carlo && !(link_success.fixed >= 0.0 && link_success.fixed <= 1.0)) {
        throw ConfigError("p_link_success must be in [0, 1] or \"mc\"");
    }
    if (link_success.eta && !(*link_success.eta >= 0.0 && *link_success.eta <= 1.0)) {
        throw ConfigError("loss.eta must be in [0, 1]");
    }
    if (!(link_success.bsm_intrinsic >= 0.0 && link_success.bsm_intrinsic <= 1.0)) {
        throw ConfigError("loss.bsm_intrinsic must be in [0, 1]");
    }
    if (link_success.samples < 1) {
        throw ConfigError("loss.samples must be at least 1");
    }
}

RunConfig with_parameter(const RunConfig &config, const std::string &param, double value) {
    RunConfig out = config;
    if (param == "p_depol") {
        out.chain.p_depol = value;
    } else if (param == "eps_logical_x") {
        out.chain.eps_logical_x = value;
    } else if (param == "eps_logical_z") {
        out.chain.eps_logical_z = value;
    } else if (param == "eps_logical") {
        out.chain.eps_logical_x = value;
        out.chain.eps_logical_z = value;
    } else if (param == "tau_half") {
        out.timing.params.tau_half = value;
    } else if (param == "tau_join") {
        out.timing.params.tau_join = value;
    } else if (param == "tau_pur_circ") {
        out.timing.params.tau_pur_circ = value;
    } else if (param == "hop_length_km") {
        out.chain.hop_length_km = value;
    } else if (param == "baseline_rounds") {
        out.baseline.rounds = to_count(value, param);
    } else {
        throw ConfigError(fmt::format("unknown sweep parameter '{}'", param));
    }
    try {
        out.chain.validate();
    } catch (const ParameterError &e) {
        throw ConfigError(fmt::format("sweep value {} = {}: {}", param, value, e.what()));
    }
    return out;
}

TimingParams resolved_timing(const RunConfig &config) {
    TimingParams t = config.timing.params;
    t.L_total = config.timing.L_total.value_or(config.chain.total_length_m());
    if (config.timing.n_pur) {
        t.n_pur = *config.timing.n_pur;
    }
    return t;
}

RunConfig config_from_json(const json &doc) {
    RunConfig c;
    require_object(doc, "config",
                   {"chain", "timing", "baseline", "scenarios", "sweep", "p_link_success", "loss", "seed", "threads",
                    "output"});

    if (doc.contains("chain")) {
        const json &n = doc.at("chain");
        require_object(n, "chain",
                       {"hops", "hop_length_km", "loss_db_per_km", "m_arms", "branching", "p_depol", "eps_logical_x",
                        "eps_logical_z", "depolarizing_convention", "inner_channel"});
        read(n, "hops", c.chain.hops, "chain");
        read(n, "hop_length_km", c.chain.hop_length_km, "chain");
        read(n, "loss_db_per_km", c.chain.loss_db_per_km, "chain");
        read(n, "m_arms", c.chain.m_arms, "chain");
        if (n.contains("branching")) {
            const json &b = n.at("branching");
            if (!b.is_array() || !std::all_of(b.begin(), b.end(), [](const json &v) { return v.is_number_integer(); })) {
                throw ConfigError("'chain.branching' must be an array of integers");
            }
            c.chain.branching = b.get<std::vector<int>>();
        }
        read(n, "p_depol", c.chain.p_depol, "chain");
        read(n, "eps_logical_x", c.chain.eps_logical_x, "chain");
        read(n, "eps_logical_z", c.chain.eps_logical_z, "chain");
        try {
            if (n.contains("depolarizing_convention")) {
                c.chain.depolarizing_convention =
                    parse_depolarizing_convention(n.at("depolarizing_convention").get<std::string>());
            }
            if (n.contains("inner_channel")) {
                c.chain.inner_channel = parse_inner_channel_mode(n.at("inner_channel").get<std::string>());
            }
        } catch (const std::exception &e) {
            throw ConfigError(fmt::format("chain: {}", e.what()));
        }
    }

    if (doc.contains("timing")) {
        const json &n = doc.at("timing");
        require_object(n, "timing",
                       {"tau_half", "tau_join", "tau_pur_circ", "n_pur", "L_total", "c", "baseline_drop_pur_circ"});
        read(n, "tau_half", c.timing.params.tau_half, "timing");
        read(n, "tau_join", c.timing.params.tau_join, "timing");
        read(n, "tau_pur_circ", c.timing.params.tau_pur_circ, "timing");
        read(n, "c", c.timing.params.c, "timing");
        read(n, "n_pur", c.timing.n_pur, "timing");
        read(n, "L_total", c.timing.L_total, "timing");
        read(n, "baseline_drop_pur_circ", c.timing.baseline_drop_pur_circ, "timing");
    }

    if (doc.contains("baseline")) {
        const json &n = doc.at("baseline");
        require_object(n, "baseline", {"rounds", "target_fidelity"});
        read(n, "rounds", c.baseline.rounds, "baseline");
        read(n, "target_fidelity", c.baseline.target_fidelity, "baseline");
    }

    if (doc.contains("scenarios")) {
        const json &n = doc.at("scenarios");
        if (!n.is_array() || !std::all_of(n.begin(), n.end(), [](const json &v) { return v.is_string(); })) {
            throw ConfigError("'scenarios' must be an array of strings");
        }
        c.scenarios = n.get<std::vector<std::string>>();
    }

    if (doc.contains("sweep")) {
        const json &n = doc.at("sweep");
        require_object(n, "sweep", {"param", "start", "stop", "points"});
        if (n.contains("param") && !n.at("param").is_string()) {
            throw ConfigError("'sweep.param' must be a string");
        }
        read(n, "param", c.sweep.param, "sweep");
        read(n, "start", c.sweep.start, "sweep");
        read(n, "stop", c.sweep.stop, "sweep");
        read(n, "points", c.sweep.points, "sweep");
    }

    if (doc.contains("p_link_success")) {
        const json &n = doc.at("p_link_success");
        if (n.is_string() && n.get<std::string>() == "mc") {
            c.link_success.monte_carlo = true;
        } else if (n.is_number()) {
            c.link_success.fixed = n.get<double>();
        } else {
            throw ConfigError("'p_link_success' must be a number or \"mc\"");
        }
    }

    if (doc.contains("loss")) {
        const json &n = doc.at("loss");
        require_object(n, "loss", {"eta", "bsm_intrinsic", "samples"});
        read(n, "eta", c.link_success.eta, "loss");
        read(n, "bsm_intrinsic", c.link_success.bsm_intrinsic, "loss");
        read(n, "samples", c.link_success.samples, "loss");
    }

    read(doc, "seed", c.seed, "config");
    read(doc, "threads", c.threads, "config");
    if (doc.contains("output") && !doc.at("output").is_null()) {
        if (!doc.at("output").is_string()) {
            throw ConfigError("'output' must be a string");
        }
        c.output = std::filesystem::path(doc.at("output").get<std::string>());
    }

    c.validate();
    return c;
}

json config_to_json(const RunConfig &c) {
    json chain{{"hops", c.chain.hops},
               {"hop_length_km", c.chain.hop_length_km},
               {"loss_db_per_km", c.chain.loss_db_per_km},
               {"m_arms", c.chain.m_arms},
               {"branching", c.chain.branching},
               {"p_depol", c.chain.p_depol},
               {"eps_logical_x", c.chain.eps_logical_x},
               {"eps_logical_z", c.chain.eps_logical_z},
               {"depolarizing_convention", std::string(to_string(c.chain.depolarizing_convention))},
               {"inner_channel", std::string(to_string(c.chain.inner_channel))}};
    json timing{{"tau_half", c.timing.params.tau_half},
                {"tau_join", c.timing.params.tau_join},
                {"tau_pur_circ", c.timing.params.tau_pur_circ},
                {"c", c.timing.params.c},
                {"baseline_drop_pur_circ", c.timing.baseline_drop_pur_circ}};
    timing["n_pur"] = c.timing.n_pur ? json(*c.timing.n_pur) : json(nullptr);
    timing["L_total"] = c.timing.L_total ? json(*c.timing.L_total) : json(nullptr);
    json baseline{{"rounds", c.baseline.rounds}};
    baseline["target_fidelity"] = c.baseline.target_fidelity ? json(*c.baseline.target_fidelity) : json(nullptr);
    json loss{{"bsm_intrinsic", c.link_success.bsm_intrinsic}, {"samples", c.link_success.samples}};
    loss["eta"] = c.link_success.eta ? json(*c.link_success.eta) : json(nullptr);

    json out{{"chain", chain},
             {"timing", timing},
             {"baseline", baseline},
             {"scenarios", c.scenarios},
             {"sweep", {{"param", c.sweep.param}, {"start", c.sweep.start}, {"stop", c.sweep.stop}, {"points", c.sweep.points}}},
             {"loss", loss},
             {"seed", c.seed},
             {"threads", c.threads}};
    out["p_link_success"] = c.link_success.monte_carlo ? json("mc") : json(c.link_success.fixed);
    out["output"] = c.output ? json(c.output->string()) : json(nullptr);
    return out;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return config_from_json(doc);
}

} // namespace rgspur
