#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conflation/analysis.hpp"
#include "conflation/economy.hpp"
#include "conflation/repro.hpp"
#include "conflation/solvers.hpp"

namespace conflation::io {

/// Rounds to `digits` significant digits; all emitted numbers go through
/// this so regression diffs stay meaningful.
double round_sig(double x, int digits = 12);

nlohmann::json to_json(const PiecewiseMeasure& m);
PiecewiseMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Classification& pi);
Classification classification_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Economy& economy);
Economy economy_from_json(const nlohmann::json& j);

/// Parses a file into an Economy; parse errors carry a line:column anchor.
Economy load_economy(const std::string& path);

nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const OptimalKResult& result);

/// "0,0.5,1" -> Classification.
Classification parse_cuts(const std::string& text);

/// A one-parameter family of classifications whose cuts are affine in t.
/// Each entry of the comma list is a constant or an expression of the form
/// a+b*t, a-b*t, b*t or t.
class CutTemplate {
public:
    struct Term {
        double constant;
        double slope;
    };

    explicit CutTemplate(std::vector<Term> terms) : terms_(std::move(terms)) {}

    Classification at(double t) const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
};

CutTemplate parse_cut_template(const std::string& text);

/// CSV with header t,price_ratio,u_1,...,u_n,welfare; one row per grid
/// point, gaps as empty fields.
std::string sweep_csv(const SweepResult& result, std::size_t n_agents);

nlohmann::json to_json(const repro::ScenarioReport& report);

/// Human-readable pass/fail table, one line per check.
std::string report_table(const std::vector<repro::ScenarioReport>& reports);

}  // namespace conflation::io
