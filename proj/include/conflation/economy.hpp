#pragma once

#include <span>
#include <string>
#include <vector>

#include "conflation/classification.hpp"
#include "conflation/measure.hpp"

namespace conflation {

enum class UtilityFamily { linear, cobb_douglas, ces };

/// An agent's preferences over goods: an evaluation measure plus the family
/// through which it enters the commodity-level utility.
struct UtilityKind {
    UtilityFamily family;
    PiecewiseMeasure evaluation;
    double ces_exponent = 0.0;  // rho in (0,1), CES only

    static UtilityKind linear(PiecewiseMeasure evaluation) {
        return {UtilityFamily::linear, std::move(evaluation)};
    }
    static UtilityKind cobb_douglas(PiecewiseMeasure evaluation) {
        return {UtilityFamily::cobb_douglas, std::move(evaluation)};
    }
    static UtilityKind ces(PiecewiseMeasure evaluation, double rho) {
        return {UtilityFamily::ces, std::move(evaluation), rho};
    }
};

struct Agent {
    double claim;  // positive; claims sum to 1 across an economy
    UtilityKind utility;
};

/// A society: endowment measure of total mass 1 plus agents whose claims
/// sum to 1. Construction validates both within 1e-12.
class Economy {
public:
    Economy(PiecewiseMeasure omega, std::vector<Agent> agents);

    const PiecewiseMeasure& omega() const { return omega_; }
    const std::vector<Agent>& agents() const { return agents_; }
    std::size_t n_agents() const { return agents_.size(); }

    /// Non-fatal diagnostics, e.g. a Cobb-Douglas evaluation measure whose
    /// total mass is not 1 (its exponents then do not sum to 1).
    std::vector<std::string> warnings() const;

private:
    PiecewiseMeasure omega_;
    std::vector<Agent> agents_;
};

/// The finite exchange economy induced by a classification: per-cell
/// supplies omega(C), endowments kappa_i * omega(C), and per-agent per-cell
/// valuations nu_i(C) feeding the commodity-level utilities.
class CommodityEconomy {
public:
    CommodityEconomy(Classification classification, std::vector<double> claims,
                     std::vector<UtilityFamily> families, std::vector<double> ces_exponents,
                     std::vector<double> supplies, std::vector<std::vector<double>> valuations);

    std::size_t n_agents() const { return claims_.size(); }
    std::size_t n_cells() const { return supplies_.size(); }

    const Classification& classification() const { return classification_; }
    const std::vector<double>& supplies() const { return supplies_; }
    const std::vector<double>& claims() const { return claims_; }
    const std::vector<UtilityFamily>& families() const { return families_; }
    const std::vector<double>& ces_exponents() const { return ces_exponents_; }
    const std::vector<std::vector<double>>& valuations() const { return valuations_; }
    double valuation(std::size_t agent, std::size_t cell) const { return valuations_[agent][cell]; }
    double endowment(std::size_t agent, std::size_t cell) const {
        return claims_[agent] * supplies_[cell];
    }

    /// Commodity-level utility of a bundle for one agent:
    ///   linear        sum_C (x_C / w_C) nu_C
    ///   cobb_douglas  prod_C (x_C / w_C)^nu_C   (0 if some nu_C > 0 cell is empty)
    ///   ces           [sum_C nu_C (x_C / w_C)^rho]^(1/rho)
    /// where w_C is the supply of cell C.
    double utility(std::size_t agent, std::span<const double> bundle) const;

    /// True when all agents share the given family.
    bool all_family(UtilityFamily family) const;

    /// Copy with claims (and hence endowments) replaced; claims must be
    /// positive and sum to 1.
    CommodityEconomy with_claims(std::vector<double> claims) const;

private:
    Classification classification_;
    std::vector<double> claims_;
    std::vector<UtilityFamily> families_;
    std::vector<double> ces_exponents_;
    std::vector<double> supplies_;
    std::vector<std::vector<double>> valuations_;
};

/// Builds E(pi). Every cell must have positive endowment measure, otherwise
/// the classification is invalid for this economy.
CommodityEconomy induce(const Economy& economy, const Classification& pi);

/// A classification paired with a feasible allocation of per-cell quantities.
struct Configuration {
    Classification classification;
    std::vector<std::vector<double>> allocation;  // [agent][cell]
};

/// Checks nonnegativity and per-cell feasibility sum_i x_C^i <= omega(C) + 1e-9.
void check_feasible(const Economy& economy, const Configuration& cfg);

/// Transports a pi-bundle to the refinement rho by splitting each cell's
/// quantity across its sub-cells proportionally to omega. Requires
/// refine_check(rho, pi, omega); preserves utility for every family.
std::vector<double> map_bundle(const Classification& pi, const Classification& rho,
                               std::span<const double> bundle, const PiecewiseMeasure& omega);

}  // namespace conflation
