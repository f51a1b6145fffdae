// Command-line driver: fixtures, experiment runs, oracle comparison.

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abcpred/core/errors.hpp"
#include "abcpred/harness/config.hpp"
#include "abcpred/harness/experiment.hpp"

using namespace abcpred;
using nlohmann::json;

namespace {

int fail(const json& err) {
    std::cout << err.dump(2) << std::endl;
    return 1;
}

json min_disc(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json("inf"));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-free predictive inference engine"};
    app.require_subcommand(1);

    std::string fixture_id;
    std::uint64_t fixture_seed = 0;
    std::string fixture_out;
    auto* fixtures = app.add_subcommand("fixtures", "Generate the observed data set of a registered experiment");
    fixtures->add_option("id", fixture_id, "experiment id")->required();
    fixtures->add_option("--seed", fixture_seed, "fixture seed")->required();
    fixtures->add_option("--out", fixture_out, "output directory (default fixtures/<id>)");

    std::string config_path;
    std::optional<std::uint64_t> run_seed;
    std::size_t workers = 1;
    std::string run_out;
    std::optional<std::size_t> iterations;
    auto* run = app.add_subcommand("run", "Run an experiment config and write its result bundle");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", run_seed, "override the master seed");
    run->add_option("--workers", workers, "worker threads for rejection and importance sampling")
        ->check(CLI::PositiveNumber);
    run->add_option("--out", run_out, "output directory (default results/<experiment_id>)");
    run->add_option("--iterations", iterations, "cap every run at this many sampler iterations")
        ->check(CLI::PositiveNumber);

    std::string result_dir;
    std::string oracle;
    auto* compare = app.add_subcommand("compare", "Compare a result bundle with the experiment's oracle");
    compare->add_option("result-dir", result_dir, "bundle directory")->required()->check(CLI::ExistingDirectory);
    compare->add_option("--oracle", oracle, "closed-form or ideal")->required();

    auto* list = app.add_subcommand("list-experiments", "List registered experiments");

    std::string show_id;
    auto* show = app.add_subcommand("show-config", "Print the canonical config of a registered experiment");
    show->add_option("id", show_id, "experiment id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail({{"error", "usage"}, {"message", e.what()}});
    }

    try {
        if (*list) {
            for (const auto& e : registered_experiments()) {
                std::cout << e.id << '\t' << e.model_kind << '\t' << e.description << '\n';
            }
        } else if (*show) {
            std::cout << canonical_config(show_id);
        } else if (*fixtures) {
            auto cfg = parse_config(json::parse(canonical_config(fixture_id)));
            cfg.fixture_seed = fixture_seed;
            cfg.fixture_path.reset();
            auto model = make_model(cfg.model);
            const auto fixture = generate_fixture(cfg, *model, fixture_seed);
            const std::filesystem::path out = fixture_out.empty() ? "fixtures/" + fixture_id : fixture_out;
            write_fixture(out, fixture, cfg);
            std::cout << json{{"status", "ok"}, {"fixture", out.string()}}.dump() << std::endl;
        } else if (*run) {
            const auto cfg = load_config(config_path);
            RunOptions opts;
            opts.out_dir = run_out.empty() ? "results/" + cfg.experiment_id : run_out;
            opts.workers = workers;
            opts.seed = run_seed;
            opts.iterations = iterations;
            const auto result = run_experiment(cfg, opts);
            json runs = json::array();
            for (const auto& r : result.runs) {
                runs.push_back({{"label", r.label},
                                {"acceptance_rate", r.metadata.at("acceptance_rate")},
                                {"ess", r.metadata.at("ess")}});
            }
            std::cout << json{{"status", "ok"}, {"out", opts.out_dir.string()}, {"runs", runs}}.dump(2) << std::endl;
        } else if (*compare) {
            const auto report = compare_to_oracle(result_dir, oracle);
            std::cout << report.dump(2) << std::endl;
            if (report.value("status", "") == "not-comparable") return 2;
        }
    } catch (const ConfigError& e) {
        return fail({{"error", "config"}, {"problems", e.problems()}});
    } catch (const InitError& e) {
        return fail({{"error", "init"}, {"message", e.what()}, {"min_discrepancy", min_disc(e.min_discrepancy())}});
    } catch (const DegenerateSampleError& e) {
        return fail({{"error", "degenerate-sample"},
                     {"message", e.what()},
                     {"min_discrepancy", min_disc({e.min_discrepancy()})}});
    } catch (const CalibrationError& e) {
        return fail({{"error", "calibration"}, {"message", e.what()}, {"component", e.component()}});
    } catch (const UsageError& e) {
        return fail({{"error", "usage"}, {"message", e.what()}});
    } catch (const json::exception& e) {
        return fail({{"error", "json"}, {"message", e.what()}});
    } catch (const std::exception& e) {
        return fail({{"error", "internal"}, {"message", e.what()}});
    }
    return 0;
}
