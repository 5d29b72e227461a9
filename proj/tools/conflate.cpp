// conflate: solve, sweep, compare and search exchange economies whose
// tradable commodities come from an interval classification of [0,1].

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "conflation/analysis.hpp"
#include "conflation/errors.hpp"
#include "conflation/io.hpp"
#include "conflation/repro.hpp"
#include "conflation/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw conflation::ValidationError("cannot write to " + out_path);
    out << text;
}

std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) throw conflation::ValidationError("grid needs at least 2 points");
    std::vector<double> grid;
    for (std::size_t j = 1; j <= points; ++j)
        grid.push_back(static_cast<double>(j) / static_cast<double>(points + 1));
    return grid;
}

void print_warnings(const conflation::Economy& economy) {
    for (const std::string& warning : economy.warnings())
        std::cerr << "warning: " << warning << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"competitive equilibria of exchange economies over classified goods"};
    app.require_subcommand(1);

    std::string economy_path, cuts_text, cuts_b_text, family_text, out_path, scenario_id;
    std::size_t grid_points = 99;
    std::size_t k_max = 4;
    double cost = 0.25;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::size_t ratio_a = 0, ratio_b = 0;
    bool with_ratio = false;
    bool run_everything = false;

    auto* solve_cmd = app.add_subcommand("solve", "solve one classified economy");
    solve_cmd->add_option("--economy", economy_path, "economy JSON file")->required();
    solve_cmd->add_option("--cuts", cuts_text, "comma-separated cuts, e.g. 0,0.5,1")->required();
    solve_cmd->add_option("--tol", tol, "verification tolerance");
    solve_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* sweep_cmd = app.add_subcommand("sweep", "solve a one-parameter family of classifications");
    sweep_cmd->add_option("--economy", economy_path)->required();
    sweep_cmd->add_option("--family", family_text,
                          "cut template with affine entries, e.g. 0,0.25,0.25+0.5*t,0.75,1")
        ->required();
    sweep_cmd->add_option("--grid", grid_points, "number of interior grid points");
    auto* ratio_opt = sweep_cmd->add_option("--ratio-cells", cuts_b_text,
                                            "pair of cell indices a,b to report p_a/p_b");
    sweep_cmd->add_option("--out", out_path, "write CSV here instead of stdout");

    auto* pareto_cmd =
        app.add_subcommand("pareto", "search for a dominating competitive configuration");
    pareto_cmd->add_option("--economy", economy_path)->required();
    pareto_cmd->add_option("--cuts", cuts_text, "classification whose equilibrium to dominate")
        ->required();
    pareto_cmd->add_option("--grid", grid_points, "candidate-cut grid resolution");
    pareto_cmd->add_option("--k-max", k_max, "largest cell count to search");
    pareto_cmd->add_option("--out", out_path);

    auto* optimal_cmd = app.add_subcommand("optimal-k", "net-welfare-optimal commodity count");
    optimal_cmd->add_option("--economy", economy_path)->required();
    optimal_cmd->add_option("--cost", cost, "per-commodity cost in (0,1)")->required();
    optimal_cmd->add_option("--grid", grid_points, "uniform candidate-cut resolution");
    optimal_cmd->add_option("--out", out_path);

    auto* metric_cmd = app.add_subcommand("metric", "distance between two classifications");
    metric_cmd->add_option("--economy", economy_path)->required();
    metric_cmd->add_option("--cuts", cuts_text)->required();
    metric_cmd->add_option("--cuts-b", cuts_b_text)->required();

    auto* repro_cmd = app.add_subcommand("repro", "run the bundled reference scenarios");
    repro_cmd->add_option("scenario", scenario_id, "scenario id (see --list)");
    repro_cmd->add_flag("--all", run_everything, "run every scenario");
    bool list_only = false;
    repro_cmd->add_flag("--list", list_only, "list scenario ids");
    repro_cmd->add_option("--out", out_path, "write the JSON report here");

    app.add_option("--seed", seed, "seed for randomized subcommands");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            if (!(tol > 0.0)) throw conflation::ValidationError("--tol must be positive");
            const conflation::Economy economy = conflation::io::load_economy(economy_path);
            print_warnings(economy);
            const conflation::CommodityEconomy ce =
                induce(economy, conflation::io::parse_cuts(cuts_text));
            const conflation::Equilibrium eq = conflation::solve(ce);
            const conflation::VerificationReport report =
                conflation::verify_equilibrium(ce, eq, tol);
            nlohmann::json out = conflation::io::to_json(eq);
            out["verification"] = conflation::io::to_json(report);
            emit(out.dump(2), out_path);
            return report.pass ? kExitOk : kExitNumerical;
        }

        if (sweep_cmd->parsed()) {
            const conflation::Economy economy = conflation::io::load_economy(economy_path);
            print_warnings(economy);
            const conflation::io::CutTemplate family =
                conflation::io::parse_cut_template(family_text);
            if (ratio_opt->count() > 0) {
                const auto comma = cuts_b_text.find(',');
                if (comma == std::string::npos)
                    throw conflation::ValidationError("--ratio-cells wants two indices a,b");
                ratio_a = std::stoul(cuts_b_text.substr(0, comma));
                ratio_b = std::stoul(cuts_b_text.substr(comma + 1));
                with_ratio = true;
            }
            const std::vector<double> grid = uniform_grid(grid_points);
            const auto family_fn = [&family](double t) { return family.at(t); };
            const conflation::SweepResult result =
                with_ratio
                    ? conflation::price_ratio_sweep(economy, family_fn, ratio_a, ratio_b, grid)
                    : conflation::utility_sweep(economy, family_fn, grid);
            if (!with_ratio && result.welfare_argmax >= 0) {
                const auto& top = result.points[static_cast<std::size_t>(result.welfare_argmax)];
                std::fprintf(stderr, "welfare argmax at t=%.12g (welfare %.12g)\n", top.t,
                             top.welfare);
            }
            emit(conflation::io::sweep_csv(result, economy.n_agents()), out_path);
            return kExitOk;
        }

        if (pareto_cmd->parsed()) {
            const conflation::Economy economy = conflation::io::load_economy(economy_path);
            print_warnings(economy);
            const conflation::Classification pi = conflation::io::parse_cuts(cuts_text);
            const conflation::Equilibrium base = conflation::solve(induce(economy, pi));
            const conflation::Configuration cfg{pi, base.allocation};
            const std::vector<double> grid = uniform_grid(grid_points);
            const auto hit = conflation::find_dominating_competitive(economy, cfg, grid, k_max);
            nlohmann::json out{{"base_utilities", conflation::io::to_json(base)["utilities"]},
                               {"found", hit.has_value()}};
            if (hit) {
                out["classification"] = conflation::io::to_json(hit->first);
                out["equilibrium"] = conflation::io::to_json(hit->second);
            }
            emit(out.dump(2), out_path);
            return kExitOk;
        }

        if (optimal_cmd->parsed()) {
            const conflation::Economy economy = conflation::io::load_economy(economy_path);
            print_warnings(economy);
            const conflation::OptimalKResult result =
                conflation::optimal_k(economy, cost, grid_points);
            emit(conflation::io::to_json(result).dump(2), out_path);
            return kExitOk;
        }

        if (metric_cmd->parsed()) {
            const conflation::Economy economy = conflation::io::load_economy(economy_path);
            const double distance =
                conflation::d_omega(conflation::io::parse_cuts(cuts_text),
                                    conflation::io::parse_cuts(cuts_b_text), economy.omega());
            char line[64];
            std::snprintf(line, sizeof(line), "%.12g\n", distance);
            emit(line, out_path);
            return kExitOk;
        }

        if (repro_cmd->parsed()) {
            if (list_only) {
                std::string ids;
                for (const std::string& id : conflation::repro::scenario_ids()) ids += id + "\n";
                emit(ids, out_path);
                return kExitOk;
            }
            std::vector<conflation::repro::ScenarioReport> reports;
            if (run_everything) {
                reports = conflation::repro::run_all();
            } else if (!scenario_id.empty()) {
                reports.push_back(conflation::repro::run_scenario(scenario_id));
            } else {
                throw conflation::ValidationError("repro wants a scenario id or --all");
            }
            std::cout << conflation::io::report_table(reports);
            nlohmann::json out = nlohmann::json::array();
            bool all_pass = true;
            for (const auto& report : reports) {
                out.push_back(conflation::io::to_json(report));
                all_pass = all_pass && report.pass;
            }
            if (!out_path.empty()) emit(out.dump(2), out_path);
            return all_pass ? kExitOk : kExitNumerical;
        }
    } catch (const conflation::SolverFailure& failure) {
        std::cerr << "numerical failure: " << failure.what() << " (iterations " << failure.iterations
                  << ", residual " << failure.residual << ")\n";
        return kExitNumerical;
    } catch (const conflation::ValidationError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
