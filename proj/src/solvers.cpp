#include "conflation/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <string>

#include "conflation/errors.hpp"

namespace conflation {

namespace {

constexpr std::size_t kMaxIterations = 200000;
constexpr double kPriceChangeTol = 1e-12;

std::vector<double> utilities_of(const CommodityEconomy& ce,
                                 const std::vector<std::vector<double>>& allocation) {
    std::vector<double> out(ce.n_agents());
    for (std::size_t i = 0; i < ce.n_agents(); ++i) out[i] = ce.utility(i, allocation[i]);
    return out;
}

// Max-flow (Edmonds-Karp) on the small bipartite money-routing graph used to
// rebalance tied linear demands. Capacities are money amounts.
class MoneyFlow {
public:
    explicit MoneyFlow(std::size_t n_nodes) : head_(n_nodes) {}

    void add_edge(std::size_t from, std::size_t to, double capacity) {
        head_[from].push_back(edges_.size());
        edges_.push_back({to, capacity});
        head_[to].push_back(edges_.size());
        edges_.push_back({from, 0.0});
    }

    double run(std::size_t source, std::size_t sink) {
        double total = 0.0;
        while (true) {
            std::vector<std::ptrdiff_t> via(head_.size(), -1);
            std::deque<std::size_t> queue{source};
            via[source] = -2;
            while (!queue.empty() && via[sink] == -1) {
                const std::size_t u = queue.front();
                queue.pop_front();
                for (std::size_t e : head_[u]) {
                    if (edges_[e].capacity > 1e-15 && via[edges_[e].to] == -1) {
                        via[edges_[e].to] = static_cast<std::ptrdiff_t>(e);
                        queue.push_back(edges_[e].to);
                    }
                }
            }
            if (via[sink] == -1) break;
            double bottleneck = std::numeric_limits<double>::infinity();
            for (std::size_t v = sink; v != source;) {
                const std::size_t e = static_cast<std::size_t>(via[v]);
                bottleneck = std::min(bottleneck, edges_[e].capacity);
                v = edges_[e ^ 1].to;
            }
            for (std::size_t v = sink; v != source;) {
                const std::size_t e = static_cast<std::size_t>(via[v]);
                edges_[e].capacity -= bottleneck;
                edges_[e ^ 1].capacity += bottleneck;
                v = edges_[e ^ 1].to;
            }
            total += bottleneck;
        }
        return total;
    }

    double flow_on(std::size_t edge_index) const { return edges_[2 * edge_index + 1].capacity; }

private:
    struct Edge {
        std::size_t to;
        double capacity;
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> head_;
};

// Exact finisher for the proportional-response dynamics. Near-converged
// prices reveal which cells each agent shops at (ties included, up to the
// tolerance `tie_tol`); on that structure the true equilibrium prices follow
// from bang-per-buck equalities alone, and budgets can be routed onto the
// structure by a max-flow. The caller certifies the result before accepting
// it, so a mis-read structure is harmless.
std::optional<Equilibrium> structured_equilibrium(const CommodityEconomy& ce,
                                                  const std::vector<double>& approx_prices,
                                                  double tie_tol) {
    const std::size_t n = ce.n_agents(), k = ce.n_cells();
    auto per_unit = [&](std::size_t i, std::size_t c) {
        return ce.valuation(i, c) / ce.supplies()[c];
    };

    std::vector<std::vector<bool>> demands(n, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            if (approx_prices[c] > 0.0)
                best = std::max(best, per_unit(i, c) / approx_prices[c]);
        if (best <= 0.0) return std::nullopt;
        for (std::size_t c = 0; c < k; ++c)
            if (approx_prices[c] > 0.0 &&
                per_unit(i, c) / approx_prices[c] >= best * (1.0 - tie_tol))
                demands[i][c] = true;
    }

    // Propagate exact price ratios across cells an agent is indifferent
    // between. Inconsistencies mean the structure was mis-read.
    std::vector<double> relative(k, 0.0);
    std::vector<int> component(k, -1);
    int n_components = 0;
    for (std::size_t seed = 0; seed < k; ++seed) {
        if (component[seed] >= 0) continue;
        bool seed_demanded = false;
        for (std::size_t i = 0; i < n && !seed_demanded; ++i) seed_demanded = demands[i][seed];
        if (!seed_demanded) continue;
        component[seed] = n_components;
        relative[seed] = 1.0;
        std::vector<std::size_t> frontier{seed};
        while (!frontier.empty()) {
            const std::size_t c = frontier.back();
            frontier.pop_back();
            for (std::size_t i = 0; i < n; ++i) {
                if (!demands[i][c]) continue;
                for (std::size_t d = 0; d < k; ++d) {
                    if (!demands[i][d]) continue;
                    const double implied = relative[c] * per_unit(i, d) / per_unit(i, c);
                    if (component[d] < 0) {
                        component[d] = n_components;
                        relative[d] = implied;
                        frontier.push_back(d);
                    } else if (std::abs(relative[d] - implied) > 1e-9 * relative[d]) {
                        return std::nullopt;
                    }
                }
            }
        }
        ++n_components;
    }

    // A cell nobody shops at must be worthless, or the structure is wrong.
    for (std::size_t c = 0; c < k; ++c)
        if (component[c] < 0)
            for (std::size_t i = 0; i < n; ++i)
                if (ce.valuation(i, c) > 0.0) return std::nullopt;

    // One money-conservation scale per component.
    std::vector<double> component_money(n_components, 0.0), component_worth(n_components, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c)
            if (demands[i][c]) {
                component_money[component[c]] += ce.claims()[i];
                break;  // the whole demand set lies in one component
            }
    for (std::size_t c = 0; c < k; ++c)
        if (component[c] >= 0) component_worth[component[c]] += relative[c] * ce.supplies()[c];

    Equilibrium eq;
    eq.prices.assign(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
        if (component[c] >= 0)
            eq.prices[c] = relative[c] * component_money[component[c]] / component_worth[component[c]];

    // Route budgets onto the demand structure at the exact prices.
    const std::size_t source = 0, sink = n + k + 1;
    MoneyFlow flow(n + k + 2);
    std::vector<std::vector<std::ptrdiff_t>> edge_of(n, std::vector<std::ptrdiff_t>(k, -1));
    std::size_t edge_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        flow.add_edge(source, 1 + i, ce.claims()[i]);
        ++edge_count;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c)
            if (demands[i][c]) {
                flow.add_edge(1 + i, 1 + n + c, ce.claims()[i]);
                edge_of[i][c] = static_cast<std::ptrdiff_t>(edge_count++);
            }
    for (std::size_t c = 0; c < k; ++c) {
        flow.add_edge(1 + n + c, sink, eq.prices[c] * ce.supplies()[c]);
        ++edge_count;
    }
    if (flow.run(source, sink) < 1.0 - 1e-12) return std::nullopt;

    eq.allocation.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c) {
            if (eq.prices[c] <= 0.0) {
                eq.allocation[i][c] = ce.claims()[i] * ce.supplies()[c];  // pro-rata, worthless
            } else if (edge_of[i][c] >= 0) {
                eq.allocation[i][c] =
                    flow.flow_on(static_cast<std::size_t>(edge_of[i][c])) / eq.prices[c];
            }
        }
    eq.utilities = utilities_of(ce, eq.allocation);
    return eq;
}

}  // namespace

Equilibrium solve_linear(const CommodityEconomy& ce) {
    if (!ce.all_family(UtilityFamily::linear))
        throw ValidationError("solve_linear: all agents must have linear utility");
    const std::size_t n = ce.n_agents(), k = ce.n_cells();
    const std::vector<double>& supply = ce.supplies();

    std::vector<double> value_mass(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) value_mass[i] += ce.valuation(i, c);
        if (!(value_mass[i] > 0.0))
            throw ValidationError("solve_linear: agent " + std::to_string(i) +
                                  " values no cell; demand is undefined");
    }

    // Money bids; an agent never bids on a cell they value at zero.
    std::vector<std::vector<double>> bids(n, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c)
            bids[i][c] = ce.claims()[i] * ce.valuation(i, c) / value_mass[i];

    std::vector<double> revenue(k, 0.0), next_revenue(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < n; ++i) revenue[c] += bids[i][c];

    // With indifferent agents the dynamics creep along the tie manifold, so
    // after enough plain iterations try to finish exactly: read the demand
    // structure off the current prices and keep the result only if the
    // equilibrium certificate signs off.
    auto attempt_finish = [&](std::size_t iter, double change) -> std::optional<Equilibrium> {
        std::vector<double> prices(k);
        for (std::size_t c = 0; c < k; ++c) prices[c] = revenue[c] / supply[c];
        for (double tie_tol : {1e-9, 1e-7, 1e-5, 1e-3}) {
            std::optional<Equilibrium> candidate = structured_equilibrium(ce, prices, tie_tol);
            if (!candidate) continue;
            if (!verify_equilibrium(ce, *candidate, 1e-10).pass) continue;
            candidate->info.iterations = iter;
            candidate->info.price_residual = change;
            candidate->info.clearing_residual = 0.0;
            return candidate;
        }
        return std::nullopt;
    };

    double change = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    std::size_t checkpoint = 2000;
    for (; iter < kMaxIterations && change > kPriceChangeTol; ++iter) {
        if (iter == checkpoint) {
            if (std::optional<Equilibrium> finished = attempt_finish(iter, change)) return *finished;
            checkpoint *= 5;
        }
        // Utility contribution of cell C to agent i is nu_i(C) * bid share.
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (std::size_t c = 0; c < k; ++c)
                if (bids[i][c] > 0.0) total += ce.valuation(i, c) * bids[i][c] / revenue[c];
            for (std::size_t c = 0; c < k; ++c)
                if (bids[i][c] > 0.0)
                    bids[i][c] = ce.claims()[i] * ce.valuation(i, c) * bids[i][c] / revenue[c] / total;
        }
        change = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            next_revenue[c] = 0.0;
            for (std::size_t i = 0; i < n; ++i) next_revenue[c] += bids[i][c];
            if (revenue[c] > 0.0)
                change = std::max(change, std::abs(next_revenue[c] - revenue[c]) / revenue[c]);
        }
        revenue.swap(next_revenue);
    }

    if (std::optional<Equilibrium> finished = attempt_finish(iter, change)) return *finished;
    if (change > kPriceChangeTol)
        throw SolverFailure("solve_linear: proportional response did not converge", iter, change);

    Equilibrium eq;
    eq.prices.assign(k, 0.0);
    eq.allocation.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
        eq.prices[c] = revenue[c] / supply[c];
        for (std::size_t i = 0; i < n; ++i)
            eq.allocation[i][c] = revenue[c] > 0.0 ? bids[i][c] / revenue[c] * supply[c]
                                                   : ce.claims()[i] * supply[c];
    }
    eq.utilities = utilities_of(ce, eq.allocation);
    eq.info.iterations = iter;
    eq.info.price_residual = change;
    double clearing = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double used = 0.0;
        for (std::size_t i = 0; i < n; ++i) used += eq.allocation[i][c];
        clearing = std::max(clearing, std::abs(used - supply[c]) / supply[c]);
    }
    eq.info.clearing_residual = clearing;
    return eq;
}

Equilibrium solve_cobb_douglas(const CommodityEconomy& ce) {
    if (!ce.all_family(UtilityFamily::cobb_douglas))
        throw ValidationError("solve_cobb_douglas: all agents must have Cobb-Douglas utility");
    const std::size_t n = ce.n_agents(), k = ce.n_cells();

    std::vector<double> exponent_mass(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) exponent_mass[i] += ce.valuation(i, c);
        if (!(exponent_mass[i] > 0.0))
            throw ValidationError("solve_cobb_douglas: agent " + std::to_string(i) +
                                  " has zero total exponent mass");
    }

    Equilibrium eq;
    eq.prices.assign(k, 0.0);
    eq.allocation.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
        double cell_revenue = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            cell_revenue += ce.claims()[i] * ce.valuation(i, c) / exponent_mass[i];
        if (!(cell_revenue > 0.0))
            throw ValidationError("solve_cobb_douglas: cell " + std::to_string(c) +
                                  " attracts zero expenditure, its price would be zero");
        eq.prices[c] = cell_revenue / ce.supplies()[c];
        for (std::size_t i = 0; i < n; ++i)
            eq.allocation[i][c] =
                ce.claims()[i] * ce.valuation(i, c) / exponent_mass[i] / eq.prices[c];
    }
    eq.utilities = utilities_of(ce, eq.allocation);
    return eq;
}

Equilibrium solve_ces(const CommodityEconomy& ce) {
    if (!ce.all_family(UtilityFamily::ces))
        throw ValidationError("solve_ces: all agents must have CES utility");
    const std::size_t n = ce.n_agents(), k = ce.n_cells();
    const std::vector<double>& supply = ce.supplies();

    for (std::size_t c = 0; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += ce.valuation(i, c);
        if (!(total > 0.0))
            throw ValidationError("solve_ces: cell " + std::to_string(c) + " is valued by no agent");
    }

    // Expenditure of agent i on cell C given prices:
    //   e_iC ∝ nu_i(C)^sigma * (p_C w_C)^(1-sigma),  sigma = 1/(1-rho) > 1.
    auto expenditures = [&](const std::vector<double>& prices, std::size_t i,
                            std::vector<double>& out) {
        const double sigma = 1.0 / (1.0 - ce.ces_exponents()[i]);
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double nu = ce.valuation(i, c);
            out[c] = nu > 0.0 ? std::pow(nu, sigma) * std::pow(prices[c] * supply[c], 1.0 - sigma)
                              : 0.0;
            total += out[c];
        }
        for (std::size_t c = 0; c < k; ++c) out[c] *= ce.claims()[i] / total;
    };

    auto revenues = [&](const std::vector<double>& prices, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        std::vector<double> e(k);
        for (std::size_t i = 0; i < n; ++i) {
            expenditures(prices, i, e);
            for (std::size_t c = 0; c < k; ++c) out[c] += e[c];
        }
    };

    std::vector<double> prices(k, 1.0), revenue(k), candidate(k);
    double step = 0.5;
    double excess = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    revenues(prices, revenue);
    excess = 0.0;
    for (std::size_t c = 0; c < k; ++c)
        excess = std::max(excess, std::abs(revenue[c] / (prices[c] * supply[c]) - 1.0));

    for (; iter < kMaxIterations && excess > kPriceChangeTol; ++iter) {
        for (std::size_t c = 0; c < k; ++c)
            candidate[c] = prices[c] * std::pow(revenue[c] / (prices[c] * supply[c]), step);
        double worth = 0.0;
        for (std::size_t c = 0; c < k; ++c) worth += candidate[c] * supply[c];
        for (std::size_t c = 0; c < k; ++c) candidate[c] /= worth;

        revenues(candidate, revenue);
        double new_excess = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            new_excess = std::max(new_excess, std::abs(revenue[c] / (candidate[c] * supply[c]) - 1.0));
        if (new_excess > excess && step > 0.02) {
            step *= 0.5;  // backtrack: undo by recomputing revenue at current prices
            revenues(prices, revenue);
            continue;
        }
        prices.swap(candidate);
        excess = new_excess;
        step = std::min(1.0, step * 1.05);
    }
    if (excess > kPriceChangeTol)
        throw SolverFailure("solve_ces: tatonnement did not converge", iter, excess);

    Equilibrium eq;
    eq.prices = prices;
    eq.allocation.assign(n, std::vector<double>(k, 0.0));
    std::vector<double> e(k);
    for (std::size_t i = 0; i < n; ++i) {
        expenditures(prices, i, e);
        for (std::size_t c = 0; c < k; ++c) eq.allocation[i][c] = e[c] / prices[c];
    }
    eq.utilities = utilities_of(ce, eq.allocation);
    eq.info.iterations = iter;
    eq.info.price_residual = excess;
    eq.info.clearing_residual = excess;
    return eq;
}

Equilibrium solve(const CommodityEconomy& ce) {
    if (ce.all_family(UtilityFamily::linear)) return solve_linear(ce);
    if (ce.all_family(UtilityFamily::cobb_douglas)) return solve_cobb_douglas(ce);
    if (ce.all_family(UtilityFamily::ces)) return solve_ces(ce);
    throw ValidationError("solve: economies mixing utility families are not supported");
}

VerificationReport verify_equilibrium(const CommodityEconomy& ce, const Equilibrium& eq, double tol) {
    const std::size_t n = ce.n_agents(), k = ce.n_cells();
    if (eq.prices.size() != k || eq.allocation.size() != n)
        throw ValidationError("verify_equilibrium: arity mismatch");

    VerificationReport report;
    report.tolerance = tol;

    double endowment_worth = 0.0;
    for (std::size_t c = 0; c < k; ++c) endowment_worth += eq.prices[c] * ce.supplies()[c];
    report.normalization_residual = std::abs(endowment_worth - 1.0);
    if (report.normalization_residual > tol)
        report.failures.push_back("price normalization off by " +
                                  std::to_string(report.normalization_residual));

    for (std::size_t i = 0; i < n; ++i) {
        double spent = 0.0;
        for (std::size_t c = 0; c < k; ++c) spent += eq.prices[c] * eq.allocation[i][c];
        report.budget_residual = std::max(report.budget_residual, std::abs(spent - ce.claims()[i]));
    }
    if (report.budget_residual > tol)
        report.failures.push_back("budget balance off by " + std::to_string(report.budget_residual));

    for (std::size_t c = 0; c < k; ++c) {
        if (!(eq.prices[c] > 0.0)) continue;  // unpriced cells need not clear
        double used = 0.0;
        for (std::size_t i = 0; i < n; ++i) used += eq.allocation[i][c];
        report.clearing_residual =
            std::max(report.clearing_residual, std::abs(used - ce.supplies()[c]) / ce.supplies()[c]);
    }
    if (report.clearing_residual > tol)
        report.failures.push_back("market clearing off by " + std::to_string(report.clearing_residual));

    for (std::size_t i = 0; i < n; ++i) {
        switch (ce.families()[i]) {
            case UtilityFamily::linear: {
                double best = 0.0;
                for (std::size_t c = 0; c < k; ++c)
                    if (eq.prices[c] > 0.0)
                        best = std::max(best,
                                        ce.valuation(i, c) / ce.supplies()[c] / eq.prices[c]);
                for (std::size_t c = 0; c < k; ++c) {
                    if (eq.prices[c] <= 0.0 || eq.allocation[i][c] <= 1e-8 * ce.supplies()[c]) continue;
                    const double bpb = ce.valuation(i, c) / ce.supplies()[c] / eq.prices[c];
                    report.optimality_residual = std::max(report.optimality_residual, best - bpb);
                }
                break;
            }
            case UtilityFamily::cobb_douglas: {
                double mass = 0.0;
                for (std::size_t c = 0; c < k; ++c) mass += ce.valuation(i, c);
                for (std::size_t c = 0; c < k; ++c) {
                    const double share = eq.prices[c] * eq.allocation[i][c] / ce.claims()[i];
                    report.optimality_residual =
                        std::max(report.optimality_residual, std::abs(share - ce.valuation(i, c) / mass));
                }
                break;
            }
            case UtilityFamily::ces: {
                const double sigma = 1.0 / (1.0 - ce.ces_exponents()[i]);
                double total = 0.0;
                std::vector<double> weight(k, 0.0);
                for (std::size_t c = 0; c < k; ++c) {
                    const double nu = ce.valuation(i, c);
                    weight[c] = nu > 0.0 ? std::pow(nu, sigma) *
                                               std::pow(eq.prices[c] * ce.supplies()[c], 1.0 - sigma)
                                         : 0.0;
                    total += weight[c];
                }
                for (std::size_t c = 0; c < k; ++c) {
                    const double demand = ce.claims()[i] * weight[c] / total / eq.prices[c];
                    report.optimality_residual =
                        std::max(report.optimality_residual,
                                 std::abs(eq.allocation[i][c] - demand) / ce.supplies()[c]);
                }
                break;
            }
        }
    }
    if (report.optimality_residual > tol)
        report.failures.push_back("optimality certificate off by " +
                                  std::to_string(report.optimality_residual));

    report.pass = report.failures.empty();
    return report;
}

std::vector<double> redefine_claims(const CommodityEconomy& ce,
                                    const std::vector<std::vector<double>>& allocation,
                                    const std::vector<double>& prices) {
    const std::size_t n = ce.n_agents(), k = ce.n_cells();
    if (allocation.size() != n || prices.size() != k)
        throw ValidationError("redefine_claims: arity mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c)
            if (!(allocation[i][c] > 0.0))
                throw ValidationError("redefine_claims: allocation must be interior (x > 0 everywhere)");
    for (double p : prices)
        if (!(p > 0.0)) throw ValidationError("redefine_claims: prices must be positive");

    double endowment_worth = 0.0;
    for (std::size_t c = 0; c < k; ++c) endowment_worth += prices[c] * ce.supplies()[c];

    std::vector<double> claims(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) claims[i] += prices[c] * allocation[i][c];
        claims[i] /= endowment_worth;
        total += claims[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("redefine_claims: allocation does not exhaust the endowment");
    return claims;
}

namespace {

void require_uniform(const PiecewiseMeasure& m, const char* what) {
    if (!m.atoms().empty()) throw ValidationError(std::string(what) + ": must be atomless");
    for (const DensityPiece& piece : m.pieces())
        if (std::abs(piece.c0 - 1.0) > 1e-12 || std::abs(piece.c1) > 1e-12)
            throw ValidationError(std::string(what) + ": must be the uniform measure");
}

// Positive density, monotone in the given direction (non-increasing for
// direction < 0), strict overall drop/rise.
void require_monotone_density(const PiecewiseMeasure& m, int direction, const char* what) {
    if (!m.atoms().empty()) throw ValidationError(std::string(what) + ": must be atomless");
    const auto& bp = m.breakpoints();
    const auto& pieces = m.pieces();
    for (std::size_t j = 0; j < pieces.size(); ++j) {
        const double at_lo = pieces[j].c0 + pieces[j].c1 * bp[j];
        const double at_hi = pieces[j].c0 + pieces[j].c1 * bp[j + 1];
        // Full support: positive on the open interior (the endpoints 0 and 1
        // are null points and may touch zero).
        if (!(at_lo > 0.0 || bp[j] == 0.0) || !(at_hi > 0.0 || bp[j + 1] == 1.0) ||
            at_lo < 0.0 || at_hi < 0.0)
            throw ValidationError(std::string(what) + ": density must be positive on (0,1)");
        if (direction * pieces[j].c1 < -1e-12)
            throw ValidationError(std::string(what) + ": density not monotone within a piece");
        if (j > 0) {
            const double prev = pieces[j - 1].c0 + pieces[j - 1].c1 * bp[j];
            if (direction * (at_lo - prev) < -1e-12)
                throw ValidationError(std::string(what) + ": density jumps against its direction");
        }
    }
    const double start = pieces.front().c0 + pieces.front().c1 * bp.front();
    const double end = pieces.back().c0 + pieces.back().c1 * bp.back();
    if (direction * (end - start) < 1e-9)
        throw ValidationError(std::string(what) + ": density must be strictly monotone overall");
}

// Root of nu1([0,theta)) - nu2([theta,1]); the integrand is positive so the
// function is strictly increasing and the root unique. Solved in closed form
// inside the bracketing density piece, then polished by Newton steps.
double leveling_point(const PiecewiseMeasure& nu1, const PiecewiseMeasure& nu2) {
    std::vector<double> grid = nu1.breakpoints();
    grid.insert(grid.end(), nu2.breakpoints().begin(), nu2.breakpoints().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto value = [&](double theta) {
        const double left = theta > 0.0 ? nu1.measure_of({0.0, theta}) : 0.0;
        const double right = theta < 1.0 ? nu2.measure_of({theta, 1.0}) : 0.0;
        return left - right;
    };

    double lo = 0.0, hi = 1.0;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        if (value(grid[g]) <= 0.0 && value(grid[g + 1]) >= 0.0) {
            lo = grid[g];
            hi = grid[g + 1];
            break;
        }
    }

    // Both densities are affine on (lo, hi), so the residual is quadratic.
    const double f1_lo = nu1.density_at(lo), f2_lo = nu2.density_at(lo);
    const double slope1 = (nu1.density_at(0.5 * (lo + hi)) - f1_lo) / (0.5 * (hi - lo));
    const double slope2 = (nu2.density_at(0.5 * (lo + hi)) - f2_lo) / (0.5 * (hi - lo));
    const double base = value(lo);
    // value(lo + s) = base + (f1_lo + f2_lo) s + (slope1 + slope2) s^2 / 2
    const double qa = 0.5 * (slope1 + slope2), qb = f1_lo + f2_lo, qc = base;
    double s;
    if (std::abs(qa) < 1e-14) {
        s = -qc / qb;
    } else {
        const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
        s = (-qb + disc) / (2.0 * qa);
        if (!(s >= 0.0 && s <= hi - lo)) s = (-qb - disc) / (2.0 * qa);
    }
    double theta = std::clamp(lo + s, lo, hi);
    for (int step = 0; step < 3; ++step) {
        const double derivative = nu1.density_at(theta) + nu2.density_at(theta);
        theta = std::clamp(theta - value(theta) / derivative, lo, hi);
    }
    return theta;
}

struct OpposedInputs {
    const PiecewiseMeasure* nu1;
    const PiecewiseMeasure* nu2;
};

OpposedInputs validate_opposed(const Economy& economy) {
    if (economy.n_agents() != 2)
        throw ValidationError("solve_opposed: exactly two agents required");
    const Agent& first = economy.agents()[0];
    const Agent& second = economy.agents()[1];
    if (first.utility.family != UtilityFamily::linear ||
        second.utility.family != UtilityFamily::linear)
        throw ValidationError("solve_opposed: both agents must have linear utility");
    if (std::abs(first.claim - second.claim) > 1e-12)
        throw ValidationError("solve_opposed: claims must be equal");
    require_uniform(economy.omega(), "solve_opposed: endowment");
    require_monotone_density(first.utility.evaluation, -1, "solve_opposed: first agent's density");
    require_monotone_density(second.utility.evaluation, +1, "solve_opposed: second agent's density");
    return {&first.utility.evaluation, &second.utility.evaluation};
}

}  // namespace

OpposedReport solve_opposed(const Economy& economy, const Classification& pi) {
    const OpposedInputs inputs = validate_opposed(economy);
    const PiecewiseMeasure& nu1 = *inputs.nu1;
    const PiecewiseMeasure& nu2 = *inputs.nu2;

    OpposedReport report;
    report.theta = leveling_point(nu1, nu2);
    report.disputed_index = pi.cell_containing(report.theta);

    for (std::size_t j = 0; j < report.disputed_index; ++j) report.left_block.push_back(pi.cell(j));
    for (std::size_t j = report.disputed_index + 1; j < pi.size(); ++j)
        report.right_block.push_back(pi.cell(j));

    const Interval disputed = pi.cell(report.disputed_index);
    const double nu1_left = nu1.measure_of_union(report.left_block);
    const double nu2_right = nu2.measure_of_union(report.right_block);
    const double nu1_disputed = nu1.measure_of(disputed);
    const double nu2_disputed = nu2.measure_of(disputed);

    report.xi = 0.5 * (nu2_right / nu2_disputed - nu1_left / nu1_disputed + 1.0);

    const double supply = economy.omega().measure_of(disputed);
    if (report.xi <= 0.0) report.x_disputed = 0.0;
    else if (report.xi >= 1.0) report.x_disputed = supply;
    else report.x_disputed = report.xi * supply;
    report.y_disputed = supply - report.x_disputed;

    const double disputed_share = report.x_disputed / supply;
    report.utilities[0] = nu1_left + disputed_share * nu1_disputed;
    report.utilities[1] = nu2_right + (1.0 - disputed_share) * nu2_disputed;
    return report;
}

double opposed_derivative(const Economy& economy, const Classification& pi) {
    const OpposedInputs inputs = validate_opposed(economy);
    const OpposedReport report = solve_opposed(economy, pi);
    if (report.disputed_index == 0)
        throw ValidationError("opposed_derivative: the disputed cell is the first one; "
                              "its left endpoint is not an interior cut");

    const double theta1 = pi.cell(report.disputed_index).lo;
    const double f1 = inputs.nu1->density_at(theta1);
    const double f2 = inputs.nu2->density_at(theta1);
    if (report.xi <= 0.0) return f1;
    if (report.xi >= 1.0) return 0.0;

    const Interval disputed = pi.cell(report.disputed_index);
    const double nu1_disputed = inputs.nu1->measure_of(disputed);
    const double nu2_disputed = inputs.nu2->measure_of(disputed);
    const double nu2_right = inputs.nu2->measure_of_union(report.right_block);
    return nu2_right / (2.0 * nu2_disputed * nu2_disputed) *
           (nu1_disputed * f2 - f1 * nu2_disputed);
}

}  // namespace conflation
