#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcpred/core/model.hpp"
#include "abcpred/core/prior.hpp"
#include "abcpred/samplers/samplers.hpp"

namespace abcpred {

struct RegionSpec {
    std::string kernel = "uniform";
    std::string norm = "l_infinity";
    std::optional<double> target_acceptance;
    std::optional<double> threshold;  ///< may be +inf
    bool dual = false;
    std::string predictive_norm = "l_infinity";
    double predictive_threshold = 0.0;
};

struct SamplerSpec {
    std::string kind = "mcmc";  ///< mcmc | rejection | importance
    std::size_t iterations = 0;
    std::size_t burn_in = 0;
    std::vector<double> step_scales;  ///< empty: defaults
    std::size_t pilot_iterations = 10000;
    std::size_t prior_draws = 10000;
    std::size_t max_rounds = 8;
    std::size_t init_budget = 100000;
    /// importance sampling: proposal box widened by this factor around the prior box centre
    double proposal_widening = 1.0;
};

struct RunSpec {
    std::string label;
    std::string summary;
    PredictionMode mode = PredictionMode::standard;
    bool defer = false;
    SamplerSpec sampler;
    RegionSpec region;
    std::optional<std::string> abc_f_from;  ///< ABC-F run recycling another run's parameter draws
};

struct ExperimentConfig {
    std::string experiment_id;
    std::uint64_t master_seed = 1;
    nlohmann::json model;
    std::vector<double> theta_true;
    std::vector<Bounds> prior_bounds;
    std::vector<Transform> prior_transforms;
    std::optional<std::uint64_t> fixture_seed;
    std::optional<std::string> fixture_path;
    std::size_t calibration_pilot = 1000;
    std::vector<RunSpec> runs;
    std::size_t histogram_bins = 60;
    std::size_t ideal_draws = 0;
    double ideal_radius = 10.0;
};

/// Parse and validate. All problems are collected into one ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

std::unique_ptr<Model> make_model(const nlohmann::json& model_spec);
Prior make_prior(const ExperimentConfig& cfg, const Model& model);

struct RegisteredExperiment {
    std::string id;
    std::string model_kind;
    std::string description;
};

const std::vector<RegisteredExperiment>& registered_experiments();
/// Canonical config text shipped with the engine.
const std::string& canonical_config(const std::string& id);

}  // namespace abcpred
