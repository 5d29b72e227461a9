#include "conflation/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conflation/errors.hpp"

namespace conflation {

namespace {
constexpr double kCutTol = 1e-12;
}

Classification::Classification(std::vector<double> cuts) : cuts_(std::move(cuts)) {
    if (cuts_.size() < 2) throw ValidationError("Classification: need at least cuts {0, 1}");
    std::sort(cuts_.begin(), cuts_.end());
    if (std::abs(cuts_.front()) <= kCutTol) cuts_.front() = 0.0;
    if (std::abs(cuts_.back() - 1.0) <= kCutTol) cuts_.back() = 1.0;
    if (cuts_.front() != 0.0 || cuts_.back() != 1.0)
        throw ValidationError("Classification: cuts must start at 0 and end at 1");
    // Drop duplicates within tolerance, keeping the endpoints pinned.
    std::vector<double> canon{cuts_.front()};
    for (std::size_t j = 1; j < cuts_.size(); ++j) {
        if (cuts_[j] - canon.back() <= kCutTol) {
            if (cuts_[j] == 1.0) canon.back() = 1.0;
            continue;
        }
        canon.push_back(cuts_[j]);
    }
    if (canon.size() < 2 || canon.back() != 1.0)
        throw ValidationError("Classification: degenerate cut list");
    cuts_ = std::move(canon);
}

std::vector<Interval> Classification::cells() const {
    std::vector<Interval> out;
    out.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) out.push_back(cell(j));
    return out;
}

std::size_t Classification::cell_containing(double t) const {
    if (t < 0.0 || t > 1.0) throw ValidationError("cell_containing: point outside [0,1]");
    if (t == 1.0) return size() - 1;
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), t);
    return static_cast<std::size_t>(it - cuts_.begin()) - 1;
}

bool refine_check(const Classification& rho, const Classification& pi, const PiecewiseMeasure& omega) {
    for (double c : pi.cuts()) {
        bool matched = false;
        for (double r : rho.cuts()) {
            const double lo = std::min(c, r), hi = std::max(c, r);
            if (lo == hi || omega.measure_of({lo, hi}) <= 1e-12) {
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

namespace {

// Directed Hausdorff distance over generated algebras. Elementary segments of
// the merged cut grid carry (mass, owning cell in pi, owning cell in rho);
// a subset pair (S,T) then scores sum of masses where membership differs.
double directed_distance(const std::vector<double>& mass, const std::vector<std::size_t>& in_pi,
                         const std::vector<std::size_t>& in_rho, std::size_t k_pi, std::size_t k_rho) {
    const std::size_t n = mass.size();
    double worst = 0.0;
    for (std::uint32_t s = 0; s < (1u << k_pi); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t t = 0; t < (1u << k_rho); ++t) {
            double diff = 0.0;
            for (std::size_t g = 0; g < n; ++g) {
                const bool a = (s >> in_pi[g]) & 1u;
                const bool b = (t >> in_rho[g]) & 1u;
                if (a != b) diff += mass[g];
            }
            best = std::min(best, diff);
            if (best == 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double d_omega(const Classification& pi, const Classification& rho, const PiecewiseMeasure& omega) {
    if (pi.size() + rho.size() > 20)
        throw CapacityError("d_omega: combined cell count exceeds the exact-enumeration cap of 20");

    std::vector<double> grid = pi.cuts();
    grid.insert(grid.end(), rho.cuts().begin(), rho.cuts().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> mass;
    std::vector<std::size_t> in_pi, in_rho;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        mass.push_back(omega.measure_of({grid[g], grid[g + 1]}));
        const double probe = grid[g];
        in_pi.push_back(pi.cell_containing(probe));
        in_rho.push_back(rho.cell_containing(probe));
    }

    const double forward = directed_distance(mass, in_pi, in_rho, pi.size(), rho.size());
    const double backward = directed_distance(mass, in_rho, in_pi, rho.size(), pi.size());
    return std::max(forward, backward);
}

Classification random_perturbation(const Classification& pi, double epsilon, std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw ValidationError("random_perturbation: epsilon must be positive");
    double min_width = 1.0;
    for (std::size_t j = 0; j < pi.size(); ++j) min_width = std::min(min_width, pi.cell(j).length());
    if (!(epsilon < 0.5 * min_width))
        throw ValidationError("random_perturbation: epsilon must be below half the minimum cell width");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-epsilon, epsilon);
    std::vector<double> cuts = pi.cuts();
    for (std::size_t j = 1; j + 1 < cuts.size(); ++j) cuts[j] += shift(rng);
    return Classification(std::move(cuts));
}

}  // namespace conflation
