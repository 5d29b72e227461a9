#pragma once

#include <string>
#include <vector>

#include "conflation/economy.hpp"

namespace conflation::scenarios {

/// Three equal-claim linear agents over a uniform endowment: one cares only
/// about the first third, the other two prefer [1/3,1/2) three-to-one over
/// [1/2,1]. Cutting at 1/2 versus at 1/3 produces Pareto-ranked equilibria.
Economy pareto1();
Classification pareto1_pi();   // cells [0,1/2), [1/2,1]
Classification pareto1_rho();  // cells [0,1/3), [1/3,1]

/// Two equal groups with mirror-image tastes for the two halves of the line;
/// the four-cell classification keeps the outer cells fixed while an inner
/// threshold t moves, shifting the outer cells' relative price.
Economy relative_scarcity();
Classification relative_scarcity_cells(double t);

/// Two equal-claim linear agents with densities 2(1-t) and 2t.
Economy opposed();

/// Four agents (claims 1/3, 1/3, 1/6, 1/6) for whom refining the third cell
/// flips agent 1 from consuming only cell A to consuming only cell B.
Economy position_switch();

/// Two equal-claim agents where splitting the first commodity leaves welfare
/// unchanged and splitting the second strictly lowers it.
Economy welfare_refinement();

/// m agents with disjoint block supports on m^2 equal cells, one block per
/// agent doubled; at cost 1/(m+1) the commodity bound m^2 is attained.
Economy optimal_k_example(int m);

/// Four equal-claim agents with overlapping window tastes; any three-cell
/// refinement of the half-split hurts one agent, while a four-cell
/// near-quarter split helps everybody.
Economy pareto_refinement();

/// Economy whose endowment carries a point mass at the right endpoint,
/// represented by an order-preserving reparametrization that spreads the
/// mass over [1/2,1]; commodity economies only ever see cell masses, which
/// are identical. The diffuse commodity is [0,1/2).
Economy atom_pathology();
Classification atom_pathology_pi();  // diffuse commodity vs the point mass

}  // namespace conflation::scenarios

namespace conflation::repro {

/// Where an expectation's target value comes from: a published figure, a
/// value derived analytically or by an independent oracle, or a value that
/// is immediate from the construction.
enum class Source { reference, analytic, construction };

struct Expectation {
    std::string what;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Source source = Source::construction;
};

struct ScenarioReport {
    std::string id;
    std::string summary;
    std::vector<Expectation> checks;
    bool pass = false;
    double seconds = 0.0;
};

const std::vector<std::string>& scenario_ids();

/// Builds the scenario's economy, solves it, and compares against the
/// expected values. Unknown ids raise ValidationError.
ScenarioReport run_scenario(const std::string& id);

std::vector<ScenarioReport> run_all();

}  // namespace conflation::repro
