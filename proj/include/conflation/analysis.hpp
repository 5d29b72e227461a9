#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "conflation/economy.hpp"
#include "conflation/solvers.hpp"

namespace conflation {

/// True iff configuration `a` Pareto-dominates `b` for this economy: weakly
/// better for every agent and strictly better for at least one, with a 1e-9
/// margin separating genuine dominance from solver noise.
bool pareto_dominates(const Economy& economy, const Configuration& a, const Configuration& b);

/// Utilitarian social welfare of a feasible configuration.
double social_welfare(const Economy& economy, const Configuration& cfg);

using ClassificationFamily = std::function<Classification(double)>;

struct SweepPoint {
    double t = 0.0;
    bool solved = false;  // failed grid points stay as explicit gaps
    double price_ratio = 0.0;
    std::vector<double> utilities;
    double welfare = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::ptrdiff_t welfare_argmax = -1;  // index into points, -1 when nothing solved
};

/// Solves E(pi_t) at every grid point and records the ratio of the two named
/// cells' prices (normalization-free) together with utilities and welfare.
SweepResult price_ratio_sweep(const Economy& economy, const ClassificationFamily& family,
                              std::size_t cell_a, std::size_t cell_b, std::span<const double> grid);

/// Like price_ratio_sweep without the ratio column; also reports the grid
/// argmax of welfare.
SweepResult utility_sweep(const Economy& economy, const ClassificationFamily& family,
                          std::span<const double> grid);

struct SwMaxResult {
    double value = 0.0;
    Classification classification;
    Configuration configuration;  // each cell assigned whole to a top-valuing agent
};

/// Maximum social welfare over configurations using at most k commodities,
/// for linear agents (each cell is then best given whole to an argmax-value
/// agent). Cuts are restricted to the candidate grid formed by all density
/// breakpoints plus a uniform grid of `grid_resolution` steps; on that grid
/// the optimum is found exactly by dynamic programming. For
/// piecewise-constant densities the breakpoint grid already contains an
/// optimal cut set, so the restriction is lossless there.
SwMaxResult sw_max(const Economy& economy, std::size_t k, std::size_t grid_resolution);

struct OptimalKRow {
    std::size_t k;
    double welfare;
    double net;  // welfare - cost * k
};

struct OptimalKResult {
    double cost = 0.0;
    double k_bar = 0.0;  // upper bound on the optimal commodity count
    std::size_t k_star = 1;
    std::vector<OptimalKRow> table;
};

/// Tabulates SW(k) - c*k for k up to the bound and returns the argmax.
/// Ties within 1e-9 resolve to the largest k, so a bound-attaining economy
/// reports the bound itself.
OptimalKResult optimal_k(const Economy& economy, double cost, std::size_t grid_resolution);

/// Searches classifications with cuts on the candidate grid and at most
/// k_max cells, in ascending cell count then lexicographic cut order, for a
/// competitive configuration that Pareto-dominates `cfg`. Returns the first
/// hit, or nothing; absence is a valid answer.
std::optional<std::pair<Classification, Equilibrium>> find_dominating_competitive(
    const Economy& economy, const Configuration& cfg, std::span<const double> candidate_cuts,
    std::size_t k_max);

/// Two equal-claim linear agents whose evaluations are indicators (scaled to
/// mass 1) of the depth-d Smith-Volterra-Cantor set and of its complement.
Economy svc_pathology_economy(int depth);

struct SvcImprovement {
    Classification refined;
    Configuration improved;
    std::array<double, 2> utilities_before{0.0, 0.0};
    std::array<double, 2> utilities_after{0.0, 0.0};
};

/// Demonstrates that `cfg` is Pareto-dominated in the depth-d pathology
/// economy: picks a cell holding goods of agent 1 that contains a removed
/// interval, labels that interval a new commodity, and hands it to agent 2.
/// Agent 1's utility is unchanged to 1e-12 and agent 2's strictly improves.
/// Fails when agent 1 holds nothing, or when no held cell contains a removed
/// interval (increase the depth).
SvcImprovement svc_improvement_demo(int depth, const Configuration& cfg);

}  // namespace conflation
