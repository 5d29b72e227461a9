#include "conflation/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conflation/errors.hpp"

namespace conflation {

namespace {

constexpr double kSnapTol = 1e-12;

double snap(double x, double target) { return std::abs(x - target) <= kSnapTol ? target : x; }

}  // namespace

PiecewiseMeasure::PiecewiseMeasure(std::vector<double> breakpoints, std::vector<DensityPiece> pieces,
                                   std::vector<Atom> atoms)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), atoms_(std::move(atoms)) {
    if (breakpoints_.size() < 2)
        throw ValidationError("PiecewiseMeasure: need at least two breakpoints");
    breakpoints_.front() = snap(breakpoints_.front(), 0.0);
    breakpoints_.back() = snap(breakpoints_.back(), 1.0);
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
        throw ValidationError("PiecewiseMeasure: breakpoints must span [0,1]");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j)
        if (!(breakpoints_[j] > breakpoints_[j - 1]))
            throw ValidationError("PiecewiseMeasure: breakpoints must be strictly increasing");
    if (pieces_.size() != breakpoints_.size() - 1)
        throw ValidationError("PiecewiseMeasure: need one density piece per breakpoint pair");

    // Degree <= 1, so nonnegativity on a segment reduces to its endpoints.
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const double a = breakpoints_[j], b = breakpoints_[j + 1];
        if (pieces_[j].c0 + pieces_[j].c1 * a < -kSnapTol || pieces_[j].c0 + pieces_[j].c1 * b < -kSnapTol)
            throw ValidationError("PiecewiseMeasure: density negative on piece " + std::to_string(j));
    }

    for (const Atom& atom : atoms_) {
        if (!(atom.mass > 0.0)) throw ValidationError("PiecewiseMeasure: atom mass must be positive");
        if (atom.at < 0.0 || atom.at > 1.0)
            throw ValidationError("PiecewiseMeasure: atom location outside [0,1]");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.at < y.at; });
    for (std::size_t j = 1; j < atoms_.size(); ++j)
        if (atoms_[j].at == atoms_[j - 1].at)
            throw ValidationError("PiecewiseMeasure: atom locations must be distinct");

    total_mass_ = measure_of({0.0, 1.0});
    if (!(total_mass_ > 0.0)) throw ValidationError("PiecewiseMeasure: total mass must be positive");
}

PiecewiseMeasure PiecewiseMeasure::uniform() { return PiecewiseMeasure({0.0, 1.0}, {{1.0, 0.0}}); }

PiecewiseMeasure PiecewiseMeasure::affine_density(double c0, double c1) {
    return PiecewiseMeasure({0.0, 1.0}, {{c0, c1}});
}

PiecewiseMeasure PiecewiseMeasure::step_density(const std::vector<std::pair<double, double>>& knots) {
    if (knots.empty()) throw ValidationError("step_density: no knots");
    std::vector<double> breaks;
    std::vector<DensityPiece> pieces;
    for (const auto& [start, value] : knots) {
        breaks.push_back(start);
        pieces.push_back({value, 0.0});
    }
    breaks.push_back(1.0);
    return PiecewiseMeasure(std::move(breaks), std::move(pieces));
}

PiecewiseMeasure PiecewiseMeasure::interval_indicator(std::span<const Interval> intervals, double scale) {
    std::vector<std::pair<double, double>> knots;
    double cursor = 0.0;
    for (const Interval& iv : intervals) {
        if (iv.lo < cursor - kSnapTol) throw ValidationError("interval_indicator: intervals must be sorted and disjoint");
        if (iv.lo > cursor) knots.emplace_back(cursor, 0.0);
        knots.emplace_back(iv.lo, scale);
        cursor = iv.hi;
    }
    if (cursor < 1.0) knots.emplace_back(cursor, 0.0);
    // Collapse knots that start at the same point (zero-width gaps).
    std::vector<std::pair<double, double>> dedup;
    for (const auto& k : knots) {
        if (!dedup.empty() && k.first <= dedup.back().first + kSnapTol) dedup.back().second = k.second;
        else dedup.push_back(k);
    }
    return step_density(dedup);
}

PiecewiseMeasure PiecewiseMeasure::with_atoms(std::vector<Atom> atoms) const {
    return PiecewiseMeasure(breakpoints_, pieces_, std::move(atoms));
}

double PiecewiseMeasure::measure_of(const Interval& iv) const {
    if (!(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo < iv.hi))
        throw ValidationError("measure_of: invalid interval");
    double total = 0.0;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const double lo = std::max(iv.lo, breakpoints_[j]);
        const double hi = std::min(iv.hi, breakpoints_[j + 1]);
        if (hi <= lo) continue;
        total += pieces_[j].c0 * (hi - lo) + 0.5 * pieces_[j].c1 * (hi * hi - lo * lo);
    }
    for (const Atom& atom : atoms_)
        if (iv.contains(atom.at)) total += atom.mass;
    return total;
}

double PiecewiseMeasure::measure_of_union(std::span<const Interval> intervals) const {
    std::vector<Interval> sorted(intervals.begin(), intervals.end());
    std::sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t j = 1; j < sorted.size(); ++j)
        if (sorted[j].lo < sorted[j - 1].hi - kSnapTol)
            throw ValidationError("measure_of_union: intervals overlap");
    double total = 0.0;
    for (const Interval& iv : sorted) total += measure_of(iv);
    return total;
}

double PiecewiseMeasure::density_at(double t) const {
    if (t < 0.0 || t > 1.0) throw ValidationError("density_at: point outside [0,1]");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t j = (it == breakpoints_.end()) ? pieces_.size() - 1
                                               : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return pieces_[j].c0 + pieces_[j].c1 * t;
}

std::vector<Interval> svc_intervals(int depth) {
    if (depth < 1) throw ValidationError("svc_intervals: depth must be >= 1");
    if (depth > 20) throw CapacityError("svc_intervals: depth capped at 20");
    std::vector<Interval> current{{0.0, 1.0}};
    double removal = 0.25;  // 4^-k at round k
    for (int round = 1; round <= depth; ++round, removal *= 0.25) {
        std::vector<Interval> next;
        next.reserve(current.size() * 2);
        for (const Interval& iv : current) {
            const double mid = 0.5 * (iv.lo + iv.hi);
            next.push_back({iv.lo, mid - 0.5 * removal});
            next.push_back({mid + 0.5 * removal, iv.hi});
        }
        current = std::move(next);
    }
    return current;
}

std::vector<Interval> svc_removed_intervals(int depth) {
    const std::vector<Interval> kept = svc_intervals(depth);
    std::vector<Interval> gaps;
    double cursor = 0.0;
    for (const Interval& iv : kept) {
        if (iv.lo > cursor) gaps.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < 1.0) gaps.push_back({cursor, 1.0});
    return gaps;
}

}  // namespace conflation
