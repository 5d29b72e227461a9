#include "conflation/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conflation/errors.hpp"

namespace conflation::io {

using nlohmann::json;

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    return std::round(x * scale) / scale;
}

namespace {

json rounded(double x) { return json(round_sig(x)); }

json rounded_array(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(rounded(x));
    return out;
}

double require_number(const json& j, const char* where) {
    if (!j.is_number()) throw ValidationError(std::string(where) + ": expected a number");
    return j.get<double>();
}

const json& require_field(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string(where) + ": missing field '" + key + "'");
    return *it;
}

}  // namespace

json to_json(const PiecewiseMeasure& m) {
    json pieces = json::array();
    for (const DensityPiece& piece : m.pieces())
        pieces.push_back({{"c0", rounded(piece.c0)}, {"c1", rounded(piece.c1)}});
    json atoms = json::array();
    for (const Atom& atom : m.atoms())
        atoms.push_back({{"at", rounded(atom.at)}, {"mass", rounded(atom.mass)}});
    return {{"breakpoints", rounded_array(m.breakpoints())}, {"pieces", pieces}, {"atoms", atoms}};
}

PiecewiseMeasure measure_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("measure: expected an object");
    std::vector<double> breakpoints;
    for (const json& b : require_field(j, "breakpoints", "measure"))
        breakpoints.push_back(require_number(b, "measure.breakpoints"));
    std::vector<DensityPiece> pieces;
    for (const json& p : require_field(j, "pieces", "measure"))
        pieces.push_back({require_number(require_field(p, "c0", "measure.pieces"), "measure.pieces.c0"),
                          require_number(require_field(p, "c1", "measure.pieces"), "measure.pieces.c1")});
    std::vector<Atom> atoms;
    if (j.contains("atoms"))
        for (const json& a : j["atoms"])
            atoms.push_back({require_number(require_field(a, "at", "measure.atoms"), "measure.atoms.at"),
                             require_number(require_field(a, "mass", "measure.atoms"), "measure.atoms.mass")});
    return PiecewiseMeasure(std::move(breakpoints), std::move(pieces), std::move(atoms));
}

json to_json(const Classification& pi) { return {{"cuts", rounded_array(pi.cuts())}}; }

Classification classification_from_json(const json& j) {
    std::vector<double> cuts;
    for (const json& c : require_field(j, "cuts", "classification"))
        cuts.push_back(require_number(c, "classification.cuts"));
    return Classification(std::move(cuts));
}

json to_json(const Economy& economy) {
    json agents = json::array();
    for (const Agent& agent : economy.agents()) {
        json utility{{"evaluation", to_json(agent.utility.evaluation)}};
        switch (agent.utility.family) {
            case UtilityFamily::linear: utility["kind"] = "linear"; break;
            case UtilityFamily::cobb_douglas: utility["kind"] = "cobb_douglas"; break;
            case UtilityFamily::ces:
                utility["kind"] = "ces";
                utility["rho"] = rounded(agent.utility.ces_exponent);
                break;
        }
        agents.push_back({{"claim", rounded(agent.claim)}, {"utility", utility}});
    }
    return {{"omega", to_json(economy.omega())}, {"agents", agents}};
}

Economy economy_from_json(const json& j) {
    PiecewiseMeasure omega = measure_from_json(require_field(j, "omega", "economy"));
    std::vector<Agent> agents;
    for (const json& a : require_field(j, "agents", "economy")) {
        const json& u = require_field(a, "utility", "economy.agents");
        const std::string kind = require_field(u, "kind", "economy.agents.utility").get<std::string>();
        PiecewiseMeasure evaluation =
            measure_from_json(require_field(u, "evaluation", "economy.agents.utility"));
        UtilityKind utility = UtilityKind::linear(std::move(evaluation));
        if (kind == "linear") {
        } else if (kind == "cobb_douglas") {
            utility.family = UtilityFamily::cobb_douglas;
        } else if (kind == "ces") {
            utility.family = UtilityFamily::ces;
            utility.ces_exponent =
                require_number(require_field(u, "rho", "economy.agents.utility"), "utility.rho");
        } else {
            throw ValidationError("economy: unknown utility kind '" + kind + "'");
        }
        agents.push_back({require_number(require_field(a, "claim", "economy.agents"), "agent.claim"),
                          std::move(utility)});
    }
    return Economy(std::move(omega), std::move(agents));
}

Economy load_economy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open economy file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& err) {
        // Translate the byte offset into a line:column anchor.
        std::size_t line = 1, column = 1;
        for (std::size_t p = 0; p + 1 < err.byte && p < text.size(); ++p) {
            if (text[p] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ValidationError(path + ":" + std::to_string(line) + ":" + std::to_string(column) +
                              ": " + err.what());
    }
    return economy_from_json(parsed);
}

json to_json(const Equilibrium& eq) {
    json allocation = json::array();
    for (const auto& bundle : eq.allocation) allocation.push_back(rounded_array(bundle));
    return {{"prices", rounded_array(eq.prices)},
            {"allocation", allocation},
            {"utilities", rounded_array(eq.utilities)},
            {"residuals",
             {{"price_change", rounded(eq.info.price_residual)},
              {"clearing", rounded(eq.info.clearing_residual)}}},
            {"iterations", eq.info.iterations}};
}

json to_json(const VerificationReport& report) {
    return {{"pass", report.pass},
            {"tolerance", rounded(report.tolerance)},
            {"normalization_residual", rounded(report.normalization_residual)},
            {"budget_residual", rounded(report.budget_residual)},
            {"clearing_residual", rounded(report.clearing_residual)},
            {"optimality_residual", rounded(report.optimality_residual)},
            {"failures", report.failures}};
}

json to_json(const OptimalKResult& result) {
    json table = json::array();
    for (const OptimalKRow& row : result.table)
        table.push_back({{"k", row.k}, {"welfare", rounded(row.welfare)}, {"net", rounded(row.net)}});
    return {{"cost", rounded(result.cost)},
            {"k_bar", rounded(result.k_bar)},
            {"k_star", result.k_star},
            {"table", table}};
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(current);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            current.push_back(ch);
        }
    }
    out.push_back(current);
    return out;
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double value;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number '" + text + "'");
    }
    if (used != text.size()) throw ValidationError("trailing characters in number '" + text + "'");
    return value;
}

}  // namespace

Classification parse_cuts(const std::string& text) {
    std::vector<double> cuts;
    for (const std::string& item : split_list(text)) cuts.push_back(parse_number(item));
    return Classification(std::move(cuts));
}

Classification CutTemplate::at(double t) const {
    std::vector<double> cuts;
    cuts.reserve(terms_.size());
    for (const Term& term : terms_) cuts.push_back(term.constant + term.slope * t);
    return Classification(std::move(cuts));
}

CutTemplate parse_cut_template(const std::string& text) {
    std::vector<CutTemplate::Term> terms;
    for (const std::string& item : split_list(text)) {
        if (item.empty()) throw ValidationError("cut template: empty entry");
        // Split a+b*t / a-b*t at the sign separating the two terms; the
        // leading character may itself be a sign.
        std::size_t split = std::string::npos;
        for (std::size_t p = 1; p < item.size(); ++p)
            if (item[p] == '+' || item[p] == '-') split = p;
        const bool has_t = item.find('t') != std::string::npos;
        if (!has_t) {
            terms.push_back({parse_number(item), 0.0});
            continue;
        }
        std::string constant = "0", slope_text;
        if (split == std::string::npos) {
            slope_text = item;
        } else {
            constant = item.substr(0, split);
            slope_text = item.substr(split);  // keeps the sign
        }
        if (slope_text.find('t') == std::string::npos)
            throw ValidationError("cut template: '" + item + "' is not affine in t");
        // Accept t, +t, -t, b*t, +b*t, -b*t.
        std::string coefficient = slope_text.substr(0, slope_text.find('t'));
        if (!coefficient.empty() && coefficient.back() == '*') coefficient.pop_back();
        if (coefficient.empty() || coefficient == "+") coefficient = "1";
        else if (coefficient == "-") coefficient = "-1";
        if (slope_text.substr(slope_text.find('t')).size() != 1)
            throw ValidationError("cut template: '" + item + "' has trailing characters after t");
        terms.push_back({parse_number(constant), parse_number(coefficient)});
    }
    return CutTemplate(std::move(terms));
}

namespace {

const char* source_name(repro::Source source) {
    switch (source) {
        case repro::Source::reference: return "reference";
        case repro::Source::analytic: return "analytic";
        case repro::Source::construction: return "construction";
    }
    return "?";
}

}  // namespace

json to_json(const repro::ScenarioReport& report) {
    json checks = json::array();
    for (const repro::Expectation& check : report.checks)
        checks.push_back({{"what", check.what},
                          {"expected", rounded(check.expected)},
                          {"actual", rounded(check.actual)},
                          {"tolerance", rounded(check.tolerance)},
                          {"pass", check.pass},
                          {"source", source_name(check.source)}});
    return {{"id", report.id},
            {"summary", report.summary},
            {"pass", report.pass},
            {"seconds", round_sig(report.seconds, 3)},
            {"checks", checks}};
}

std::string report_table(const std::vector<repro::ScenarioReport>& reports) {
    std::string out;
    char line[256];
    for (const repro::ScenarioReport& report : reports) {
        std::snprintf(line, sizeof(line), "%-28s %s  (%zu checks, %.2fs)\n", report.id.c_str(),
                      report.pass ? "PASS" : "FAIL", report.checks.size(), report.seconds);
        out += line;
        for (const repro::Expectation& check : report.checks) {
            std::snprintf(line, sizeof(line), "  [%s] %-66s %- .6g vs %- .6g (tol %.1g)\n",
                          check.pass ? "ok" : "FAIL", check.what.c_str(), check.actual,
                          check.expected, check.tolerance);
            out += line;
        }
    }
    return out;
}

std::string sweep_csv(const SweepResult& result, std::size_t n_agents) {
    std::string out = "t,price_ratio";
    for (std::size_t i = 1; i <= n_agents; ++i) out += ",u_" + std::to_string(i);
    out += ",welfare\n";
    char buffer[64];
    auto append_number = [&](double x) {
        std::snprintf(buffer, sizeof(buffer), "%.12g", x);
        out += buffer;
    };
    for (const SweepPoint& point : result.points) {
        append_number(point.t);
        if (point.solved) {
            out += ',';
            if (point.price_ratio != 0.0) append_number(point.price_ratio);
            for (double u : point.utilities) {
                out += ',';
                append_number(u);
            }
            out += ',';
            append_number(point.welfare);
        } else {
            for (std::size_t field = 0; field < n_agents + 2; ++field) out += ',';
        }
        out += '\n';
    }
    return out;
}

}  // namespace conflation::io
