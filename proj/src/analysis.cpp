#include "conflation/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conflation/errors.hpp"

namespace conflation {

namespace {
constexpr double kDominanceMargin = 1e-9;
}

bool pareto_dominates(const Economy& economy, const Configuration& a, const Configuration& b) {
    check_feasible(economy, a);
    check_feasible(economy, b);
    const CommodityEconomy ea = induce(economy, a.classification);
    const CommodityEconomy eb = induce(economy, b.classification);
    bool strict = false;
    for (std::size_t i = 0; i < economy.n_agents(); ++i) {
        const double ua = ea.utility(i, a.allocation[i]);
        const double ub = eb.utility(i, b.allocation[i]);
        if (ua < ub - kDominanceMargin) return false;
        if (ua > ub + kDominanceMargin) strict = true;
    }
    return strict;
}

double social_welfare(const Economy& economy, const Configuration& cfg) {
    check_feasible(economy, cfg);
    const CommodityEconomy ce = induce(economy, cfg.classification);
    double total = 0.0;
    for (std::size_t i = 0; i < economy.n_agents(); ++i)
        total += ce.utility(i, cfg.allocation[i]);
    return total;
}

namespace {

SweepResult run_sweep(const Economy& economy, const ClassificationFamily& family,
                      std::span<const double> grid, bool with_ratio, std::size_t cell_a,
                      std::size_t cell_b) {
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (!(grid[g] > grid[g - 1])) throw ValidationError("sweep: grid must be strictly increasing");

    SweepResult result;
    double best_welfare = -std::numeric_limits<double>::infinity();
    for (double t : grid) {
        SweepPoint point;
        point.t = t;
        try {
            const Classification pi = family(t);
            const CommodityEconomy ce = induce(economy, pi);
            const Equilibrium eq = solve(ce);
            if (with_ratio) {
                if (cell_a >= pi.size() || cell_b >= pi.size())
                    throw ValidationError("sweep: ratio cell index out of range");
                point.price_ratio = eq.prices[cell_a] / eq.prices[cell_b];
            }
            point.utilities = eq.utilities;
            point.welfare = 0.0;
            for (double u : eq.utilities) point.welfare += u;
            point.solved = true;
        } catch (const ValidationError&) {
            point.solved = false;  // gap, never interpolated
        } catch (const SolverFailure&) {
            point.solved = false;
        }
        if (point.solved && point.welfare > best_welfare) {
            best_welfare = point.welfare;
            result.welfare_argmax = static_cast<std::ptrdiff_t>(result.points.size());
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

}  // namespace

SweepResult price_ratio_sweep(const Economy& economy, const ClassificationFamily& family,
                              std::size_t cell_a, std::size_t cell_b, std::span<const double> grid) {
    return run_sweep(economy, family, grid, true, cell_a, cell_b);
}

SweepResult utility_sweep(const Economy& economy, const ClassificationFamily& family,
                          std::span<const double> grid) {
    return run_sweep(economy, family, grid, false, 0, 0);
}

namespace {

// Candidate cut grid for the welfare DP: every density breakpoint of every
// evaluation measure plus a uniform grid.
std::vector<double> welfare_grid(const Economy& economy, std::size_t resolution) {
    std::vector<double> grid{0.0, 1.0};
    for (const Agent& agent : economy.agents())
        for (double b : agent.utility.evaluation.breakpoints()) grid.push_back(b);
    for (double b : economy.omega().breakpoints()) grid.push_back(b);
    for (std::size_t j = 1; j < resolution; ++j)
        grid.push_back(static_cast<double>(j) / static_cast<double>(resolution));
    std::sort(grid.begin(), grid.end());
    std::vector<double> dedup;
    for (double g : grid)
        if (dedup.empty() || g - dedup.back() > 1e-12) dedup.push_back(g);
    if (dedup.back() != 1.0) dedup.back() = 1.0;
    return dedup;
}

struct WelfareDp {
    std::vector<double> grid;
    // best[j][g]: top welfare splitting [0, grid[g]) into exactly j cells.
    std::vector<std::vector<double>> best;
    std::vector<std::vector<std::size_t>> parent;
};

WelfareDp run_welfare_dp(const Economy& economy, std::size_t k_max, std::size_t resolution) {
    for (const Agent& agent : economy.agents())
        if (agent.utility.family != UtilityFamily::linear)
            throw ValidationError("sw_max: only linear agents admit the cell-assignment reduction");

    WelfareDp dp;
    dp.grid = welfare_grid(economy, resolution);
    const std::size_t m = dp.grid.size();
    const std::size_t n = economy.n_agents();

    std::vector<std::vector<double>> value_cum(n, std::vector<double>(m, 0.0));
    std::vector<double> omega_cum(m, 0.0);
    for (std::size_t g = 1; g < m; ++g) {
        const Interval segment{dp.grid[g - 1], dp.grid[g]};
        omega_cum[g] = omega_cum[g - 1] + economy.omega().measure_of(segment);
        for (std::size_t i = 0; i < n; ++i)
            value_cum[i][g] =
                value_cum[i][g - 1] + economy.agents()[i].utility.evaluation.measure_of(segment);
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    auto cell_value = [&](std::size_t a, std::size_t b) {
        if (omega_cum[b] - omega_cum[a] <= 1e-12) return neg_inf;  // zero-measure cell
        double best_agent = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            best_agent = std::max(best_agent, value_cum[i][b] - value_cum[i][a]);
        return best_agent;
    };

    dp.best.assign(k_max + 1, std::vector<double>(m, neg_inf));
    dp.parent.assign(k_max + 1, std::vector<std::size_t>(m, 0));
    dp.best[0][0] = 0.0;
    for (std::size_t j = 1; j <= k_max; ++j)
        for (std::size_t b = 1; b < m; ++b)
            for (std::size_t a = j - 1; a < b; ++a) {
                if (dp.best[j - 1][a] == neg_inf) continue;
                const double candidate = dp.best[j - 1][a] + cell_value(a, b);
                if (candidate > dp.best[j][b]) {
                    dp.best[j][b] = candidate;
                    dp.parent[j][b] = a;
                }
            }
    return dp;
}

SwMaxResult assemble_sw_result(const Economy& economy, const WelfareDp& dp, std::size_t k) {
    const std::size_t m = dp.grid.size();
    std::size_t best_j = 1;
    for (std::size_t j = 1; j <= k; ++j)
        if (dp.best[j][m - 1] > dp.best[best_j][m - 1]) best_j = j;

    std::vector<double> cuts;
    for (std::size_t j = best_j, g = m - 1; j > 0; --j) {
        cuts.push_back(dp.grid[g]);
        g = dp.parent[j][g];
    }
    cuts.push_back(0.0);
    std::reverse(cuts.begin(), cuts.end());

    SwMaxResult result{dp.best[best_j][m - 1], Classification(cuts), {Classification(cuts), {}}};
    const CommodityEconomy ce = induce(economy, result.classification);
    result.configuration.allocation.assign(economy.n_agents(),
                                           std::vector<double>(ce.n_cells(), 0.0));
    for (std::size_t c = 0; c < ce.n_cells(); ++c) {
        std::size_t winner = 0;
        for (std::size_t i = 1; i < economy.n_agents(); ++i)
            if (ce.valuation(i, c) > ce.valuation(winner, c)) winner = i;
        result.configuration.allocation[winner][c] = ce.supplies()[c];
    }
    return result;
}

}  // namespace

SwMaxResult sw_max(const Economy& economy, std::size_t k, std::size_t grid_resolution) {
    if (k == 0) throw ValidationError("sw_max: k must be positive");
    if (k > 64) throw CapacityError("sw_max: k capped at 64");
    const WelfareDp dp = run_welfare_dp(economy, k, grid_resolution);
    return assemble_sw_result(economy, dp, k);
}

OptimalKResult optimal_k(const Economy& economy, double cost, std::size_t grid_resolution) {
    if (!(cost > 0.0 && cost < 1.0)) throw ValidationError("optimal_k: cost must lie in (0,1)");

    double value_sum = 0.0, value_max = 0.0;
    for (const Agent& agent : economy.agents()) {
        const double mass = agent.utility.evaluation.total_mass();
        value_sum += mass;
        value_max = std::max(value_max, mass);
    }
    OptimalKResult result;
    result.cost = cost;
    result.k_bar = (value_sum - value_max + cost) / cost;
    const auto k_cap = static_cast<std::size_t>(
        std::max(1.0, std::ceil(result.k_bar - 1e-9)));
    if (k_cap > 64) throw CapacityError("optimal_k: commodity bound exceeds the cap of 64");

    const WelfareDp dp = run_welfare_dp(economy, k_cap, grid_resolution);
    const std::size_t m = dp.grid.size();
    double running_best = -std::numeric_limits<double>::infinity();
    double best_net = running_best;
    for (std::size_t k = 1; k <= k_cap; ++k) {
        running_best = std::max(running_best, dp.best[k][m - 1]);  // SW(k) uses *at most* k cells
        const double net = running_best - cost * static_cast<double>(k);
        result.table.push_back({k, running_best, net});
        if (net >= best_net - 1e-9) {  // ties resolve to the largest k
            if (net > best_net) best_net = net;
            result.k_star = k;
        }
    }
    return result;
}

std::optional<std::pair<Classification, Equilibrium>> find_dominating_competitive(
    const Economy& economy, const Configuration& cfg, std::span<const double> candidate_cuts,
    std::size_t k_max) {
    for (const Agent& agent : economy.agents())
        if (agent.utility.family != UtilityFamily::linear)
            throw ValidationError("find_dominating_competitive: linear agents required");
    check_feasible(economy, cfg);

    std::vector<double> interior;
    for (double c : candidate_cuts)
        if (c > 1e-12 && c < 1.0 - 1e-12) interior.push_back(c);
    std::sort(interior.begin(), interior.end());
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());

    // Ascending cell count, lexicographic cut combinations within each count.
    for (std::size_t cells = 1; cells <= k_max; ++cells) {
        const std::size_t choose = cells - 1;
        if (choose > interior.size()) break;
        std::vector<std::size_t> pick(choose);
        for (std::size_t j = 0; j < choose; ++j) pick[j] = j;
        while (true) {
            std::vector<double> cuts{0.0};
            for (std::size_t j : pick) cuts.push_back(interior[j]);
            cuts.push_back(1.0);
            try {
                const Classification pi{cuts};
                const CommodityEconomy ce = induce(economy, pi);
                Equilibrium eq = solve_linear(ce);
                const Configuration candidate{pi, eq.allocation};
                if (pareto_dominates(economy, candidate, cfg))
                    return std::make_pair(pi, std::move(eq));
            } catch (const ValidationError&) {
            } catch (const SolverFailure&) {
            }
            // next lexicographic combination
            if (choose == 0) break;
            std::size_t j = choose;
            while (j > 0 && pick[j - 1] == interior.size() - choose + j - 1) --j;
            if (j == 0) break;
            ++pick[j - 1];
            for (std::size_t l = j; l < choose; ++l) pick[l] = pick[l - 1] + 1;
        }
    }
    return std::nullopt;
}

Economy svc_pathology_economy(int depth) {
    const std::vector<Interval> kept = svc_intervals(depth);
    const std::vector<Interval> removed = svc_removed_intervals(depth);
    PiecewiseMeasure nu1 = PiecewiseMeasure::interval_indicator(kept, 2.0);
    PiecewiseMeasure nu2 = PiecewiseMeasure::interval_indicator(removed, 2.0);
    std::vector<Agent> agents;
    agents.push_back({0.5, UtilityKind::linear(std::move(nu1))});
    agents.push_back({0.5, UtilityKind::linear(std::move(nu2))});
    return Economy(PiecewiseMeasure::uniform(), std::move(agents));
}

SvcImprovement svc_improvement_demo(int depth, const Configuration& cfg) {
    const Economy economy = svc_pathology_economy(depth);
    check_feasible(economy, cfg);
    const CommodityEconomy before = induce(economy, cfg.classification);

    bool agent1_holds_anything = false;
    std::size_t host_cell = 0;
    Interval gap{0.0, 0.0};
    bool found = false;
    const std::vector<Interval> removed = svc_removed_intervals(depth);
    for (std::size_t c = 0; c < cfg.classification.size() && !found; ++c) {
        if (cfg.allocation[0][c] <= 1e-12) continue;
        agent1_holds_anything = true;
        const Interval cell = cfg.classification.cell(c);
        double best_length = 0.0;
        for (const Interval& r : removed) {
            // Clip to the cell; a gap touching the cell boundary just leaves
            // one side of the split empty.
            const Interval clipped{std::max(r.lo, cell.lo), std::min(r.hi, cell.hi)};
            if (clipped.length() > 1e-9 && clipped.length() > best_length) {
                best_length = clipped.length();
                gap = clipped;
                host_cell = c;
                found = true;
            }
        }
    }
    if (!agent1_holds_anything)
        throw ValidationError("svc_improvement_demo: agent 1 holds nothing, there is nothing to improve");
    if (!found)
        throw ValidationError("svc_improvement_demo: no held cell contains a removed interval; "
                              "increase the construction depth");

    std::vector<double> cuts = cfg.classification.cuts();
    cuts.push_back(gap.lo);
    cuts.push_back(gap.hi);
    Classification refined(std::move(cuts));

    const Interval host = cfg.classification.cell(host_cell);
    const double host_mass = economy.omega().measure_of(host);

    SvcImprovement result{refined, {refined, {}}, {}, {}};
    result.improved.allocation.assign(2, std::vector<double>(refined.size(), 0.0));
    for (std::size_t d = 0; d < refined.size(); ++d) {
        const Interval sub = refined.cell(d);
        const std::size_t origin = cfg.classification.cell_containing(sub.lo);
        if (origin != host_cell) {
            result.improved.allocation[0][d] = cfg.allocation[0][origin];
            result.improved.allocation[1][d] = cfg.allocation[1][origin];
            continue;
        }
        const double fraction = economy.omega().measure_of(sub) / host_mass;
        if (sub.lo == gap.lo) {  // the freed commodity goes entirely to agent 2
            result.improved.allocation[0][d] = 0.0;
            result.improved.allocation[1][d] =
                fraction * (cfg.allocation[0][host_cell] + cfg.allocation[1][host_cell]);
        } else {
            result.improved.allocation[0][d] = fraction * cfg.allocation[0][host_cell];
            result.improved.allocation[1][d] = fraction * cfg.allocation[1][host_cell];
        }
    }

    const CommodityEconomy after = induce(economy, refined);
    for (std::size_t i = 0; i < 2; ++i) {
        result.utilities_before[i] = before.utility(i, cfg.allocation[i]);
        result.utilities_after[i] = after.utility(i, result.improved.allocation[i]);
    }
    if (std::abs(result.utilities_after[0] - result.utilities_before[0]) > 1e-12 ||
        result.utilities_after[1] <= result.utilities_before[1])
        throw SolverFailure("svc_improvement_demo: reallocation failed its own verification", 0, 0.0);
    return result;
}

}  // namespace conflation
