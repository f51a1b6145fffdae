#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "abcpred/core/types.hpp"
#include "abcpred/harness/config.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

struct ColumnNames {
    std::vector<std::string> observed;
    std::vector<std::string> latent;
    std::vector<std::string> future;
};

ColumnNames column_names(const Model& model);
/// "component@time" for every future record, record-major.
std::vector<std::string> prediction_columns(const Model& model);

/// Observed data at theta_true plus the truth the samplers never see.
struct Fixture {
    TimeSeriesData observed;          ///< may carry the true latent track
    std::vector<double> latent_state; ///< true continuation state at the end of the observed segment
    std::optional<TimeSeriesData> true_future;
};

Fixture generate_fixture(const ExperimentConfig& cfg, const Model& model, std::uint64_t seed);
/// observed.csv, latent.csv (when present), future.csv and truth.json.
void write_fixture(const std::filesystem::path& dir, const Fixture& fixture, const ExperimentConfig& cfg);
Fixture read_fixture(const std::filesystem::path& dir, const Model& model);

struct RunOptions {
    std::filesystem::path out_dir;
    std::size_t workers = 1;
    std::optional<std::uint64_t> seed;
    /// shrink every run to this many sampler iterations (pilots and burn-in capped accordingly)
    std::optional<std::size_t> iterations;
};

struct RunResult {
    std::string label;
    SamplerReport report;
    nlohmann::json metadata;
};

struct ExperimentResult {
    ExperimentConfig config;
    Fixture fixture;
    std::vector<RunResult> runs;
    std::vector<TimeSeriesData> ideal;
};

/// Run every configured run and write the result bundle under options.out_dir.
ExperimentResult run_experiment(ExperimentConfig config, const RunOptions& options);

/// Quantile levels of the band files.
const std::vector<double>& band_levels();

/// Per-marginal comparison of a written bundle with the experiment's oracle:
/// "closed-form" (Markov/SSM) or "ideal" (empirical ideal predictive).
nlohmann::json compare_to_oracle(const std::filesystem::path& result_dir, const std::string& oracle);

}  // namespace abcpred
