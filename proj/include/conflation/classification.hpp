#pragma once

#include <cstdint>
#include <vector>

#include "conflation/measure.hpp"

namespace conflation {

/// An ordered interval partition of [0,1]: cuts 0 = c0 < c1 < ... < ck = 1
/// define cells [c_{j-1}, c_j), the last one closed at 1. Duplicate cuts
/// closer than 1e-12 are dropped at construction.
///
/// Positive measure of every cell is a property of the pairing with an
/// endowment measure and is checked when an economy is induced, not here.
class Classification {
public:
    explicit Classification(std::vector<double> cuts);

    /// Partition with cells [g_0,g_1), ..., [g_{m-1},1] for interior grid
    /// points; cuts = {0} + interior + {1}.
    static Classification trivial() { return Classification({0.0, 1.0}); }

    std::size_t size() const { return cuts_.size() - 1; }
    Interval cell(std::size_t j) const { return {cuts_[j], cuts_[j + 1]}; }
    std::vector<Interval> cells() const;
    const std::vector<double>& cuts() const { return cuts_; }

    /// Index of the cell containing t under the half-open convention.
    std::size_t cell_containing(double t) const;

private:
    std::vector<double> cuts_;
};

/// True iff rho refines pi with respect to omega: every cut of pi coincides
/// with some cut of rho up to an omega-null separation.
bool refine_check(const Classification& rho, const Classification& pi, const PiecewiseMeasure& omega);

/// Hausdorff pseudo-distance between the algebras generated by the two
/// classifications, d(pi,rho) = max of the two directed distances
/// sup_{C} inf_{C'} omega(C xor C'), computed exactly by enumerating all
/// 2^k cell unions on each side. Combined cell count above 20 raises
/// CapacityError.
double d_omega(const Classification& pi, const Classification& rho, const PiecewiseMeasure& omega);

/// Moves every interior cut by an independent uniform draw from
/// [-epsilon, epsilon]; deterministic given the seed. Requires epsilon
/// smaller than half the minimum cell width so the cut order is preserved.
Classification random_perturbation(const Classification& pi, double epsilon, std::uint64_t seed);

}  // namespace conflation
