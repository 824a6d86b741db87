#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rgspur/config.hpp"
#include "rgspur/schedule_io.hpp"
#include "rgspur/sweep.hpp"

namespace rgspur {
namespace {

using nlohmann::json;

std::filesystem::path scratch(const std::string &name) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "rgspur_config_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<std::string> split(const std::string &line, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream in(line);
    std::string item;
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

// Minimal reader for the sweep CSV: '#' lines skipped, first line is the header.
struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;
};

Csv read_csv(const std::string &text) {
    Csv csv;
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) {
            csv.comments.push_back(line);
            continue;
        }
        if (csv.header.empty()) {
            csv.header = split(line);
            continue;
        }
        const std::vector<std::string> cells = split(line);
        EXPECT_EQ(cells.size(), csv.header.size()) << line;
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < cells.size() && i < csv.header.size(); ++i) {
            row[csv.header[i]] = cells[i];
        }
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

std::string csv_text(const RunConfig &config) {
    std::ostringstream out;
    write_csv(out, config, run_sweep(config));
    return out.str();
}

TEST(SweepGrid, EndpointsIncluded) {
    SweepGrid g;
    const std::vector<double> v = g.values();
    ASSERT_EQ(v.size(), 11u);
    EXPECT_EQ(v.front(), 0.0);
    EXPECT_EQ(v.back(), 0.01);
    EXPECT_NEAR(v[5], 0.005, 1e-18);
    g.points = 1;
    g.start = 0.3;
    EXPECT_EQ(g.values(), std::vector<double>{0.3});
}

TEST(ConfigJson, DefaultsRoundTrip) {
    const RunConfig defaults;
    const json doc = config_to_json(defaults);
    const RunConfig back = config_from_json(doc);
    EXPECT_EQ(config_to_json(back), doc);
    EXPECT_EQ(back.scenarios, defaults.scenarios);
    EXPECT_EQ(back.chain.hops, 10u);
    EXPECT_EQ(back.baseline.rounds, 4u);
}

TEST(ConfigJson, EverySectionParses) {
    const json doc = json::parse(R"({
        "chain": {"hops": 4, "hop_length_km": 1.5, "loss_db_per_km": 0.25, "m_arms": 6,
                  "branching": [4, 3], "p_depol": 0.002, "eps_logical_x": 1e-4, "eps_logical_z": 2e-4,
                  "depolarizing_convention": "pauli_quarters", "inner_channel": "aggregate"},
        "timing": {"tau_half": 2e-6, "tau_join": 0, "tau_pur_circ": 5e-8, "n_pur": 3, "L_total": null,
                   "c": 2e8, "baseline_drop_pur_circ": true},
        "baseline": {"rounds": 2, "target_fidelity": 0.95},
        "scenarios": ["raw", "fig5"],
        "sweep": {"param": "tau_half", "start": 1e-6, "stop": 2e-6, "points": 3},
        "p_link_success": "mc",
        "loss": {"eta": 0.9, "bsm_intrinsic": 0.75, "samples": 1000},
        "seed": 42, "threads": 2, "output": "out.csv"
    })");
    const RunConfig c = config_from_json(doc);
    EXPECT_EQ(c.chain.hops, 4u);
    EXPECT_EQ(c.chain.branching, (std::vector<int>{4, 3}));
    EXPECT_EQ(c.chain.depolarizing_convention, DepolarizingConvention::PauliQuarters);
    EXPECT_EQ(c.chain.inner_channel, InnerChannelMode::Aggregate);
    EXPECT_EQ(c.timing.params.tau_join, 0.0);
    EXPECT_EQ(c.timing.n_pur, 3u);
    EXPECT_FALSE(c.timing.L_total.has_value());
    EXPECT_TRUE(c.timing.baseline_drop_pur_circ);
    EXPECT_EQ(c.baseline.target_fidelity, 0.95);
    EXPECT_TRUE(c.link_success.monte_carlo);
    EXPECT_EQ(c.link_success.eta, 0.9);
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.output, std::filesystem::path("out.csv"));
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(config_from_json(config_to_json(c)).scenarios, c.scenarios);
    EXPECT_EQ(resolved_timing(c).L_total, 6000.0);
}

TEST(ConfigJson, RejectsUnknownKeysAndBadTypes) {
    EXPECT_THROW(config_from_json(json::parse(R"({"chian": {}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"chain": {"hop": 3}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"chain": {"hops": "ten"}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"chain": {"hops": -1}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"chain": {"inner_channel": "sum"}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"p_link_success": "sometimes"})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"p_link_success": 1.5})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"sweep": {"param": 3}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"([1, 2])")), ConfigError);
}

TEST(ConfigValidate, UnknownScenarioHasItsOwnError) {
    RunConfig c;
    c.scenarios = {"raw", "fig6"};
    EXPECT_THROW(c.validate(), UnknownScenarioError);
    c.scenarios = {"custom:"};
    EXPECT_THROW(c.validate(), UnknownScenarioError);
    c.scenarios = {"custom:some/file.json"};
    EXPECT_NO_THROW(c.validate());
}

TEST(ConfigValidate, SweepPointsMustBeValid) {
    RunConfig c;
    c.sweep.param = "p_depol";
    c.sweep.stop = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c.sweep.stop = 0.01;
    c.sweep.param = "hops";
    EXPECT_THROW(c.validate(), ConfigError);
    c.sweep.param = "tau_half";
    c.sweep.start = 0.0;
    c.sweep.stop = 1e-6;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConfigFile, LoadsAndReportsErrors) {
    const std::filesystem::path good = scratch("good.json");
    std::ofstream(good) << R"({"chain": {"hops": 3}, "scenarios": ["raw"]})";
    EXPECT_EQ(load_config(good).chain.hops, 3u);
    const std::filesystem::path bad = scratch("bad.json");
    std::ofstream(bad) << "{ not json";
    EXPECT_THROW(load_config(bad), ConfigError);
    EXPECT_THROW(load_config(scratch("missing.json")), ConfigError);
}

TEST(WithParameter, SetsEachName) {
    const RunConfig c;
    EXPECT_EQ(with_parameter(c, "p_depol", 0.004).chain.p_depol, 0.004);
    const RunConfig both = with_parameter(c, "eps_logical", 0.002);
    EXPECT_EQ(both.chain.eps_logical_x, 0.002);
    EXPECT_EQ(both.chain.eps_logical_z, 0.002);
    EXPECT_EQ(with_parameter(c, "tau_pur_circ", 3e-7).timing.params.tau_pur_circ, 3e-7);
    EXPECT_EQ(with_parameter(c, "hop_length_km", 3.0).chain.hop_length_km, 3.0);
    EXPECT_EQ(with_parameter(c, "baseline_rounds", 2.0).baseline.rounds, 2u);
    EXPECT_THROW(with_parameter(c, "baseline_rounds", 2.5), ConfigError);
    EXPECT_THROW(with_parameter(c, "nope", 1.0), ConfigError);
    for (const std::string &name : sweep_parameters()) {
        EXPECT_NO_THROW(with_parameter(c, name, 1.0)) << name;
    }
}

TEST(RunSweep, DefaultGridShape) {
    RunConfig c;
    c.threads = 1;
    const std::vector<SweepRow> rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 33u);
    EXPECT_EQ(rows[0].scenario, "raw");
    EXPECT_EQ(rows[1].scenario, "baseline");
    EXPECT_EQ(rows[2].scenario, "fig5");
    EXPECT_EQ(rows[32].value, 0.01);
    for (const SweepRow &r : rows) {
        EXPECT_EQ(r.sweep_param, "p_depol");
        EXPECT_TRUE(r.vector.has_value());
        EXPECT_GT(r.rate, 0.0);
    }
}

TEST(RunSweep, ZeroNoiseAllFidelitiesOne) {
    RunConfig c;
    c.chain.eps_logical_x = 0.0;
    c.chain.eps_logical_z = 0.0;
    c.sweep.points = 1;
    c.sweep.start = 0.0;
    const std::vector<SweepRow> rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 3u);
    for (const SweepRow &r : rows) {
        EXPECT_EQ(r.fidelity, 1.0) << r.scenario;
        EXPECT_EQ(r.p_success, 1.0) << r.scenario;
        EXPECT_EQ(*r.vector, ErrorVector::perfect()) << r.scenario;
    }
}

TEST(RunSweep, Fig5BeatsBaselineAtHighNoise) {
    RunConfig c;
    c.sweep.points = 1;
    c.sweep.start = 0.01;
    const std::vector<SweepRow> rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[2].fidelity, rows[1].fidelity);
    EXPECT_GT(rows[1].fidelity, rows[0].fidelity);
}

TEST(RunSweep, RowsCarryTimingAssumptions) {
    RunConfig c;
    c.sweep.points = 1;
    const std::vector<SweepRow> rows = run_sweep(c);
    const SweepRow &raw = rows[0];
    const SweepRow &base = rows[1];
    const SweepRow &fig5 = rows[2];
    EXPECT_EQ(raw.timing.n_pur, 1u);
    EXPECT_EQ(base.timing.n_pur, 5u);
    EXPECT_EQ(fig5.timing.n_pur, fig5.half_rgs_per_hop);
    EXPECT_EQ(raw.timing.L_total, 20000.0);
    EXPECT_EQ(raw.tau_rgs, times_raw(raw.timing).tau_rgs);
    EXPECT_EQ(base.t_mem, times_baseline(base.timing).t_mem);
    EXPECT_EQ(fig5.t_mem, times_optimistic(fig5.timing).t_mem);
    EXPECT_EQ(base.comm_rounds, 8u);
    EXPECT_EQ(fig5.comm_rounds, 1u);

    c.timing.n_pur = 7;
    c.timing.baseline_drop_pur_circ = true;
    const std::vector<SweepRow> pinned = run_sweep(c);
    EXPECT_EQ(pinned[1].timing.n_pur, 7u);
    EXPECT_EQ(pinned[2].timing.n_pur, 7u);
    TimingParams t = pinned[1].timing;
    EXPECT_EQ(pinned[1].t_mem, times_baseline(t, false).t_mem);
}

TEST(RunSweep, RatesFollowTimingModel) {
    RunConfig c;
    c.sweep.points = 1;
    c.link_success.fixed = 0.999;
    const std::vector<SweepRow> rows = run_sweep(c);
    EXPECT_NEAR(rows[0].rate, std::pow(0.999, 10) / rows[0].tau_rgs, 1e-6);
    EXPECT_NEAR(rows[2].p_generation, std::pow(0.999, 10.0 * 5.0), 1e-15);
    EXPECT_NEAR(rows[2].rate, rows[2].p_generation * rows[2].p_success / rows[2].tau_rgs, 1e-6);
    EXPECT_GT(rows[2].rate / rows[1].rate, 1.0);
}

TEST(RunSweep, BaselineRoundsSweep) {
    RunConfig c;
    c.scenarios = {"baseline"};
    c.sweep = SweepGrid{"baseline_rounds", 0.0, 4.0, 5};
    c.chain.p_depol = 0.005;
    const std::vector<SweepRow> rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].comm_rounds, 1u);
    EXPECT_EQ(rows[0].half_rgs_per_hop, 1u);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_EQ(rows[k].comm_rounds, 2 * k);
        EXPECT_EQ(rows[k].half_rgs_per_hop, k + 1);
        EXPECT_LT(rows[k].rate, rows[k - 1].rate);
    }
}

TEST(RunSweep, CustomScheduleMatchesPreset) {
    const std::filesystem::path file = scratch("fig5_copy.json");
    std::ofstream(file) << schedule_to_json(preset_fig5(10)).dump(2);
    RunConfig c;
    c.scenarios = {"fig5", "custom:" + file.string()};
    c.sweep.points = 3;
    const std::vector<SweepRow> rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        EXPECT_EQ(rows[i].fidelity, rows[i + 1].fidelity);
        EXPECT_EQ(rows[i].rate, rows[i + 1].rate);
        EXPECT_EQ(rows[i].half_rgs_per_hop, rows[i + 1].half_rgs_per_hop);
    }
}

TEST(RunSweep, CustomScheduleErrors) {
    RunConfig c;
    c.scenarios = {"custom:" + scratch("does_not_exist.json").string()};
    EXPECT_THROW(run_sweep(c), ScheduleFormatError);
    const std::filesystem::path wrong_hops = scratch("two_hops.json");
    std::ofstream(wrong_hops) << schedule_to_json(preset_fig5(2)).dump();
    c.scenarios = {"custom:" + wrong_hops.string()};
    EXPECT_THROW(run_sweep(c), ScheduleError);
}

TEST(RunSweep, MonteCarloLinkProbability) {
    RunConfig c;
    c.link_success.monte_carlo = true;
    c.link_success.samples = 2000;
    c.link_success.eta = 0.8;
    c.chain.branching = {3, 2};
    c.chain.m_arms = 4;
    c.sweep.points = 2;
    c.seed = 3;
    const double p = link_generation_probability(c);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    const std::vector<SweepRow> rows = run_sweep(c);
    EXPECT_NEAR(rows[0].p_generation, std::pow(p, 10.0), 1e-15);
    EXPECT_EQ(link_generation_probability(c), p);
}

TEST(WriteCsv, HeaderCommentsAndColumns) {
    RunConfig c;
    const Csv csv = read_csv(csv_text(c));
    ASSERT_GE(csv.comments.size(), 2u);
    EXPECT_EQ(csv.comments[0], "# rgspur sweep");
    ASSERT_TRUE(csv.comments[1].starts_with("# config: "));
    const json embedded = json::parse(csv.comments[1].substr(10));
    EXPECT_EQ(embedded, config_to_json(c));
    EXPECT_EQ(csv.header, csv_columns());
    const std::vector<std::string> required{"sweep_param", "value", "scenario",         "fidelity",    "p_success",
                                            "rate",        "tau_rgs", "t_mem",          "half_rgs_per_hop",
                                            "comm_rounds", "w",       "x",              "y",           "z"};
    for (std::size_t i = 0; i < required.size(); ++i) {
        EXPECT_EQ(csv.header[i], required[i]);
    }
    ASSERT_EQ(csv.rows.size(), 33u);
}

TEST(WriteCsv, ValuesRoundTrip) {
    RunConfig c;
    c.sweep.points = 4;
    const std::vector<SweepRow> rows = run_sweep(c);
    std::ostringstream out;
    write_csv(out, c, rows);
    const Csv csv = read_csv(out.str());
    ASSERT_EQ(csv.rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(std::stod(csv.rows[i].at("fidelity")), rows[i].fidelity);
        EXPECT_EQ(std::stod(csv.rows[i].at("rate")), rows[i].rate);
        EXPECT_EQ(std::stod(csv.rows[i].at("value")), rows[i].value);
        EXPECT_EQ(std::stod(csv.rows[i].at("y")), rows[i].vector->y());
        EXPECT_EQ(std::stoul(csv.rows[i].at("n_pur")), rows[i].timing.n_pur);
        EXPECT_EQ(csv.rows[i].at("scenario"), rows[i].scenario);
    }
}

TEST(WriteCsv, RateRatioRecoverableFromRows) {
    RunConfig c;
    const Csv csv = read_csv(csv_text(c));
    std::map<std::string, std::map<std::string, double>> rate;
    for (const auto &row : csv.rows) {
        rate[row.at("value")][row.at("scenario")] = std::stod(row.at("rate"));
    }
    EXPECT_EQ(rate.size(), 11u);
    for (const auto &[value, by_scenario] : rate) {
        EXPECT_GT(by_scenario.at("fig5") / by_scenario.at("baseline"), 1.0) << value;
    }
}

TEST(WriteCsv, MissingVectorWrittenAsNan) {
    RunConfig c;
    SweepRow row;
    row.sweep_param = "p_depol";
    row.scenario = "fig5";
    std::ostringstream out;
    write_csv(out, c, {row});
    const Csv csv = read_csv(out.str());
    ASSERT_EQ(csv.rows.size(), 1u);
    EXPECT_EQ(csv.rows[0].at("w"), "nan");
    EXPECT_EQ(csv.rows[0].at("fidelity"), "0");
}

TEST(WriteCsv, ByteIdenticalAcrossThreadCounts) {
    RunConfig c;
    c.sweep.points = 21;
    c.threads = 1;
    const std::string one = csv_text(c);
    c.threads = 4;
    std::string four = csv_text(c);
    // The embedded config differs only in the thread count.
    const auto strip_threads = [](std::string s) {
        const std::size_t at = s.find("\"threads\":");
        return s.erase(at, s.find_first_of(",}", at) - at);
    };
    EXPECT_EQ(strip_threads(one), strip_threads(four));
    c.threads = 1;
    EXPECT_EQ(csv_text(c), one);
}

} // namespace
} // namespace rgspur

namespace rgspur {
namespace {

TEST(ShippedConfigs, LoadAndValidate) {
    std::size_t seen = 0;
    for (const auto &entry : std::filesystem::directory_iterator(RGSPUR_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        ++seen;
        RunConfig c;
        ASSERT_NO_THROW(c = load_config(entry.path())) << entry.path();
        EXPECT_NO_THROW(c.validate()) << entry.path();
    }
    EXPECT_GE(seen, 3u);
    const RunConfig fig6 = load_config(std::filesystem::path(RGSPUR_CONFIG_DIR) / "fig6.json");
    EXPECT_EQ(run_sweep(fig6).size(), 63u);
}

TEST(ShippedConfigs, ScheduleFileIsTheStagedPreset) {
    const ScheduleExpr e = load_schedule_file(std::filesystem::path(RGSPUR_CONFIG_DIR) / "schedules/fig5_10hop.json");
    EXPECT_EQ(schedule_to_json(e), schedule_to_json(preset_fig5(10)));
}

} // namespace
} // namespace rgspur
