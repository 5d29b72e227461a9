#include "conflation/economy.hpp"

#include <cmath>
#include <string>

#include "conflation/errors.hpp"

namespace conflation {

namespace {
constexpr double kSumTol = 1e-12;
}

Economy::Economy(PiecewiseMeasure omega, std::vector<Agent> agents)
    : omega_(std::move(omega)), agents_(std::move(agents)) {
    if (agents_.empty()) throw ValidationError("Economy: need at least one agent");
    if (std::abs(omega_.total_mass() - 1.0) > kSumTol)
        throw ValidationError("Economy: endowment measure must be normalized to total mass 1");
    double claim_sum = 0.0;
    for (const Agent& agent : agents_) {
        if (!(agent.claim > 0.0)) throw ValidationError("Economy: claims must be positive");
        if (agent.utility.family == UtilityFamily::ces &&
            !(agent.utility.ces_exponent > 0.0 && agent.utility.ces_exponent < 1.0))
            throw ValidationError("Economy: CES exponent must lie in (0,1)");
        claim_sum += agent.claim;
    }
    if (std::abs(claim_sum - 1.0) > kSumTol)
        throw ValidationError("Economy: claims must sum to 1");
}

std::vector<std::string> Economy::warnings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        const UtilityKind& u = agents_[i].utility;
        if (u.family == UtilityFamily::cobb_douglas &&
            std::abs(u.evaluation.total_mass() - 1.0) > 1e-9)
            out.push_back("agent " + std::to_string(i) +
                          ": Cobb-Douglas exponents sum to " + std::to_string(u.evaluation.total_mass()) +
                          ", not 1; utility is homogeneous of that degree");
    }
    return out;
}

CommodityEconomy::CommodityEconomy(Classification classification, std::vector<double> claims,
                                   std::vector<UtilityFamily> families, std::vector<double> ces_exponents,
                                   std::vector<double> supplies, std::vector<std::vector<double>> valuations)
    : classification_(std::move(classification)),
      claims_(std::move(claims)),
      families_(std::move(families)),
      ces_exponents_(std::move(ces_exponents)),
      supplies_(std::move(supplies)),
      valuations_(std::move(valuations)) {
    for (double s : supplies_)
        if (!(s > 0.0)) throw ValidationError("CommodityEconomy: supplies must be positive");
}

bool CommodityEconomy::all_family(UtilityFamily family) const {
    for (UtilityFamily f : families_)
        if (f != family) return false;
    return true;
}

CommodityEconomy CommodityEconomy::with_claims(std::vector<double> claims) const {
    if (claims.size() != claims_.size()) throw ValidationError("with_claims: arity mismatch");
    double sum = 0.0;
    for (double c : claims) {
        if (!(c > 0.0)) throw ValidationError("with_claims: claims must be positive");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("with_claims: claims must sum to 1");
    return CommodityEconomy(classification_, std::move(claims), families_, ces_exponents_, supplies_,
                            valuations_);
}

double CommodityEconomy::utility(std::size_t agent, std::span<const double> bundle) const {
    if (agent >= n_agents()) throw ValidationError("utility: agent index out of range");
    if (bundle.size() != n_cells()) throw ValidationError("utility: bundle arity mismatch");
    const std::vector<double>& nu = valuations_[agent];
    switch (families_[agent]) {
        case UtilityFamily::linear: {
            double total = 0.0;
            for (std::size_t c = 0; c < bundle.size(); ++c)
                total += bundle[c] / supplies_[c] * nu[c];
            return total;
        }
        case UtilityFamily::cobb_douglas: {
            double log_sum = 0.0;
            for (std::size_t c = 0; c < bundle.size(); ++c) {
                if (nu[c] == 0.0) continue;
                const double share = bundle[c] / supplies_[c];
                if (share <= 0.0) return 0.0;
                log_sum += nu[c] * std::log(share);
            }
            return std::exp(log_sum);
        }
        case UtilityFamily::ces: {
            const double rho = ces_exponents_[agent];
            double base = 0.0;
            for (std::size_t c = 0; c < bundle.size(); ++c)
                base += nu[c] * std::pow(bundle[c] / supplies_[c], rho);
            return base <= 0.0 ? 0.0 : std::pow(base, 1.0 / rho);
        }
    }
    return 0.0;
}

CommodityEconomy induce(const Economy& economy, const Classification& pi) {
    const std::size_t n = economy.n_agents(), k = pi.size();
    std::vector<double> supplies(k);
    for (std::size_t c = 0; c < k; ++c) {
        supplies[c] = economy.omega().measure_of(pi.cell(c));
        if (!(supplies[c] > 0.0))
            throw ValidationError("induce: cell " + std::to_string(c) +
                                  " has zero endowment measure; classifications must use cells of positive measure");
    }
    std::vector<double> claims(n), ces(n);
    std::vector<UtilityFamily> families(n);
    std::vector<std::vector<double>> valuations(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const Agent& agent = economy.agents()[i];
        claims[i] = agent.claim;
        families[i] = agent.utility.family;
        ces[i] = agent.utility.ces_exponent;
        for (std::size_t c = 0; c < k; ++c)
            valuations[i][c] = agent.utility.evaluation.measure_of(pi.cell(c));
    }
    return CommodityEconomy(pi, std::move(claims), std::move(families), std::move(ces),
                            std::move(supplies), std::move(valuations));
}

void check_feasible(const Economy& economy, const Configuration& cfg) {
    const std::size_t k = cfg.classification.size();
    for (const auto& bundle : cfg.allocation) {
        if (bundle.size() != k) throw ValidationError("configuration: bundle arity mismatch");
        for (double x : bundle)
            if (x < -1e-12) throw ValidationError("configuration: negative quantity");
    }
    for (std::size_t c = 0; c < k; ++c) {
        double used = 0.0;
        for (const auto& bundle : cfg.allocation) used += bundle[c];
        const double supply = economy.omega().measure_of(cfg.classification.cell(c));
        if (used > supply + 1e-9)
            throw ValidationError("configuration: cell " + std::to_string(c) + " over-allocated");
    }
}

std::vector<double> map_bundle(const Classification& pi, const Classification& rho,
                               std::span<const double> bundle, const PiecewiseMeasure& omega) {
    if (bundle.size() != pi.size()) throw ValidationError("map_bundle: bundle arity mismatch");
    if (!refine_check(rho, pi, omega))
        throw ValidationError("map_bundle: target classification does not refine the source");
    std::vector<double> out(rho.size());
    for (std::size_t d = 0; d < rho.size(); ++d) {
        const Interval sub = rho.cell(d);
        const std::size_t parent = pi.cell_containing(sub.lo);
        const double parent_mass = omega.measure_of(pi.cell(parent));
        if (!(parent_mass > 0.0)) throw ValidationError("map_bundle: parent cell has zero measure");
        out[d] = bundle[parent] * omega.measure_of(sub) / parent_mass;
    }
    return out;
}

}  // namespace conflation
