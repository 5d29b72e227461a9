#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "conflation/economy.hpp"

namespace conflation {

struct SolverInfo {
    std::size_t iterations = 0;
    double price_residual = 0.0;     // last relative price (or excess) change
    double clearing_residual = 0.0;  // worst relative market-clearing gap
};

/// Competitive equilibrium of a commodity economy. Prices are per unit and
/// normalized so the whole endowment is worth 1, making each agent's wealth
/// equal to their claim.
struct Equilibrium {
    std::vector<double> prices;                   // [cell]
    std::vector<std::vector<double>> allocation;  // [agent][cell]
    std::vector<double> utilities;                // [agent]
    SolverInfo info;
};

/// Linear Fisher market solved by proportional-response dynamics on money
/// bids; after the bids converge the allocation is rebalanced onto each
/// agent's best bang-per-buck cells so ties settle exactly. Throws
/// SolverFailure with residuals if the dynamics do not converge within the
/// iteration cap.
Equilibrium solve_linear(const CommodityEconomy& ce);

/// Cobb-Douglas closed form: agent i spends kappa_i * nu_i(C)/nu_i([0,1]) on
/// cell C; prices are cell revenues over supplies. No iteration. A cell that
/// attracts zero expenditure would carry a zero price and is rejected.
Equilibrium solve_cobb_douglas(const CommodityEconomy& ce);

/// CES economy solved by tatonnement: multiplicative price updates driven by
/// relative excess demand, convergent under gross substitutability
/// (0 < rho < 1).
Equilibrium solve_ces(const CommodityEconomy& ce);

/// Dispatch on the (single) utility family of the economy. Mixed families
/// are rejected.
Equilibrium solve(const CommodityEconomy& ce);

struct VerificationReport {
    bool pass = false;
    double tolerance = 0.0;
    double normalization_residual = 0.0;
    double budget_residual = 0.0;
    double clearing_residual = 0.0;
    double optimality_residual = 0.0;  // family-specific certificate
    std::vector<std::string> failures;
};

/// Certifies an equilibrium against the definition: price normalization,
/// budget balance, market clearing, and a family-specific optimality
/// certificate (linear: bang-per-buck equalization on the consumed support;
/// Cobb-Douglas: expenditure shares; CES: closed-form demand residual).
VerificationReport verify_equilibrium(const CommodityEconomy& ce, const Equilibrium& eq, double tol);

/// Claims kappa'_i = p . x^i / (sum_C p_C omega(C)) that support the given
/// interior allocation as a competitive equilibrium at the given prices.
std::vector<double> redefine_claims(const CommodityEconomy& ce,
                                    const std::vector<std::vector<double>>& allocation,
                                    const std::vector<double>& prices);

/// Closed-form solution of a two-agent equal-claim linear economy with
/// opposed preferences (first agent's density decreasing, second's
/// increasing, both positive, endowment uniform). The leveling point theta
/// splits the line into a left block owned by agent 1, a right block owned
/// by agent 2, and one disputed cell shared according to xi.
struct OpposedReport {
    double theta = 0.0;
    std::size_t disputed_index = 0;
    double xi = 0.0;
    std::vector<Interval> left_block;
    std::vector<Interval> right_block;
    double x_disputed = 0.0;  // quantity of the disputed cell to agent 1
    double y_disputed = 0.0;  // remainder, to agent 2
    std::array<double, 2> utilities{0.0, 0.0};
};

OpposedReport solve_opposed(const Economy& economy, const Classification& pi);

/// Sensitivity of agent 1's equilibrium utility to the left endpoint of the
/// disputed cell, by regime of xi. The disputed cell must not be the first
/// one (there is no interior endpoint to perturb otherwise).
double opposed_derivative(const Economy& economy, const Classification& pi);

}  // namespace conflation
