#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "abcpred/core/errors.hpp"
#include "abcpred/harness/config.hpp"
#include "abcpred/harness/csv.hpp"
#include "abcpred/harness/experiment.hpp"

using namespace abcpred;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("abcpred-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json markov_config() { return json::parse(canonical_config("markov-fig1")); }

// every file under a directory, relative path -> bytes
std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
    return out;
}

std::vector<std::string> problems_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

}  // namespace

TEST(Config, CanonicalConfigsParse) {
    ASSERT_EQ(registered_experiments().size(), 7u);
    for (const auto& e : registered_experiments()) {
        const auto cfg = parse_config(json::parse(canonical_config(e.id)));
        EXPECT_EQ(cfg.experiment_id, e.id);
        EXPECT_FALSE(cfg.runs.empty());
        const auto model = make_model(cfg.model);
        EXPECT_EQ(model->kind(), e.model_kind);
        // round trip through to_json
        const auto again = parse_config(to_json(cfg));
        EXPECT_EQ(to_json(again), to_json(cfg));
    }
}

TEST(Config, UnknownExperimentListsRegistered) {
    auto j = markov_config();
    j["experiment_id"] = "markov-fig9";
    const auto p = problems_of(j);
    ASSERT_FALSE(p.empty());
    bool listed = false;
    for (const auto& s : p) listed = listed || s.find("markov-appendix") != std::string::npos;
    EXPECT_TRUE(listed);
    EXPECT_THROW(canonical_config("nope"), UsageError);
}

TEST(Config, CollectsEveryProblem) {
    auto j = markov_config();
    j["theta_true"] = {7.0};                       // outside the prior
    j["runs"][0]["sampler"]["burn_in"] = 2000000;  // more than iterations
    j["runs"][1]["region"]["kernel"] = "box";
    j["runs"][3]["abc_f_from"] = "missing-run";
    const auto p = problems_of(j);
    EXPECT_GE(p.size(), 4u);
}

TEST(Config, RegionNeedsExactlyOneThresholdRule) {
    auto j = markov_config();
    j["runs"][0]["region"]["threshold"] = 0.1;
    EXPECT_FALSE(problems_of(j).empty());
    j["runs"][0]["region"].erase("target_acceptance");
    EXPECT_TRUE(problems_of(j).empty());
    j["runs"][0]["region"]["threshold"] = "inf";
    EXPECT_TRUE(problems_of(j).empty());
    const auto cfg = parse_config(j);
    EXPECT_TRUE(std::isinf(*cfg.runs[0].region.threshold));
}

TEST(Config, DualRegionNeedsPredictiveSummary) {
    auto j = markov_config();
    j["runs"][0]["region"]["predictive"] = {{"norm", "l_infinity"}, {"threshold", 1.0}};
    EXPECT_FALSE(problems_of(j).empty());
}

TEST(Config, AbcFNeedsConditionalSampling) {
    auto j = json::parse(canonical_config("mg1-varying"));
    j["runs"].push_back({{"label", "f"}, {"abc_f_from", "s0-P"}});
    EXPECT_FALSE(problems_of(j).empty());
}

TEST(Config, DuplicateLabels) {
    auto j = markov_config();
    j["runs"][1]["label"] = "s1";
    EXPECT_FALSE(problems_of(j).empty());
}

TEST(Csv, FormatRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9, 0.0}) {
        EXPECT_EQ(std::stod(csv::format(v)), v);
    }
    EXPECT_EQ(csv::format(0.1), "0.1");
}

TEST(Csv, WriteRead) {
    const auto dir = scratch("csv");
    csv::Table t{{"a", "b"}, {{1.0, 1.0 / 3.0}, {-2.0, 1e-20}}};
    csv::write(dir / "t.csv", t);
    const auto back = csv::read(dir / "t.csv");
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
    EXPECT_EQ(csv::column(back, "b"), 1u);
    EXPECT_THROW(csv::column(back, "c"), UsageError);
}

TEST(Fixture, SameSeedSameBytes) {
    const auto cfg = parse_config(json::parse(canonical_config("lv-pred-case2")));
    const auto model = make_model(cfg.model);
    const auto a = scratch("fixture-a");
    const auto b = scratch("fixture-b");
    write_fixture(a, generate_fixture(cfg, *model, 5), cfg);
    write_fixture(b, generate_fixture(cfg, *model, 5), cfg);
    EXPECT_EQ(tree(a), tree(b));
    // prey-only observation, predator track kept aside
    const auto obs = csv::read(a / "observed.csv");
    EXPECT_EQ(obs.header, (std::vector<std::string>{"time", "prey"}));
    EXPECT_TRUE(fs::exists(a / "latent.csv"));
    const auto f = read_fixture(a, *model);
    EXPECT_TRUE(f.observed.has_latents());
    EXPECT_EQ(f.observed.size(), 81u);
}

TEST(Fixture, Mg1HasLatentArrivalsAndFuture) {
    const auto cfg = parse_config(json::parse(canonical_config("mg1-varying")));
    const auto model = make_model(cfg.model);
    const auto fx = generate_fixture(cfg, *model, *cfg.fixture_seed);
    EXPECT_EQ(fx.observed.size(), 100u);
    EXPECT_TRUE(fx.observed.has_latents());
    EXPECT_EQ(fx.latent_state.size(), 2u);
    ASSERT_TRUE(fx.true_future.has_value());
    EXPECT_EQ(fx.true_future->size(), 20u);
}

TEST(Experiment, SmallRunIsReproducible) {
    auto cfg = parse_config(markov_config());
    RunOptions opts;
    opts.iterations = 3000;
    opts.out_dir = scratch("run-a");
    run_experiment(cfg, opts);
    const auto first = tree(opts.out_dir);
    opts.out_dir = scratch("run-b");
    const auto result = run_experiment(cfg, opts);
    auto second = tree(opts.out_dir);
    auto a = first;
    a.erase("timing.json");
    second.erase("timing.json");
    EXPECT_EQ(a, second);
    EXPECT_EQ(result.runs.size(), 5u);
    EXPECT_TRUE(first.count("runs/s1/draws.csv"));
    EXPECT_TRUE(first.count("runs/s1/density/c.csv"));
    EXPECT_TRUE(first.count("runs/s1-F/metadata.json"));
    EXPECT_TRUE(first.count("fixture/observed.csv"));
}

TEST(Experiment, BandsAreMonotone) {
    auto cfg = parse_config(markov_config());
    RunOptions opts;
    opts.iterations = 3000;
    opts.out_dir = scratch("bands");
    run_experiment(cfg, opts);
    for (const auto& e : fs::recursive_directory_iterator(opts.out_dir)) {
        if (e.path().filename().string().rfind("bands_", 0) != 0) continue;
        const auto t = csv::read(e.path());
        for (const auto& row : t.rows) {
            for (std::size_t j = 2; j < row.size(); ++j) EXPECT_LE(row[j - 1], row[j]) << e.path();
        }
    }
}

TEST(Experiment, CompareStatuses) {
    auto cfg = parse_config(markov_config());
    RunOptions opts;
    opts.iterations = 3000;
    opts.out_dir = scratch("compare");
    run_experiment(cfg, opts);
    const auto closed = compare_to_oracle(opts.out_dir, "closed-form");
    EXPECT_EQ(closed.at("status"), "ok");
    EXPECT_FALSE(closed.at("runs").at(0).at("marginals").empty());
    const auto ideal = compare_to_oracle(opts.out_dir, "ideal");
    EXPECT_EQ(ideal.at("status"), "not-comparable");
    EXPECT_THROW(compare_to_oracle(opts.out_dir, "psychic"), UsageError);
}

TEST(Experiment, SeedOverrideChangesDraws) {
    auto cfg = parse_config(markov_config());
    cfg.runs.resize(1);
    RunOptions opts;
    opts.iterations = 2000;
    opts.out_dir = scratch("seed-a");
    run_experiment(cfg, opts);
    const auto a = slurp(opts.out_dir / "runs/s1/draws.csv");
    opts.out_dir = scratch("seed-b");
    opts.seed = 99;
    run_experiment(cfg, opts);
    EXPECT_NE(a, slurp(opts.out_dir / "runs/s1/draws.csv"));
}
