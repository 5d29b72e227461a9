#pragma once

#include <span>
#include <utility>
#include <vector>

namespace conflation {

/// Subinterval of the goods space [0,1]. Denotes [lo, hi), except that an
/// interval ending at 1 is closed there, so that the cells of a
/// classification cover the whole space.
struct Interval {
    double lo;
    double hi;

    double length() const { return hi - lo; }

    /// Membership under the half-open convention (closed at 1 when hi == 1).
    bool contains(double t) const { return (t >= lo && t < hi) || (hi == 1.0 && t == 1.0); }
};

/// One density segment: f(t) = c0 + c1*t on a breakpoint interval.
struct DensityPiece {
    double c0;
    double c1;
};

/// Point mass.
struct Atom {
    double at;
    double mass;
};

/// A finite positive measure on [0,1] given by a piecewise degree-<=1
/// density plus finitely many atoms. Integration is exact (closed-form
/// polynomial antiderivatives); no quadrature is involved anywhere.
///
/// Immutable after construction; all operations are const and pure.
class PiecewiseMeasure {
public:
    /// `breakpoints` must start at 0, end at 1, and be strictly increasing;
    /// `pieces` holds one density segment per consecutive breakpoint pair.
    /// The density must be nonnegative on every segment, atom masses must be
    /// positive with distinct locations in [0,1], and the total mass must be
    /// positive. Violations raise ValidationError.
    PiecewiseMeasure(std::vector<double> breakpoints, std::vector<DensityPiece> pieces,
                     std::vector<Atom> atoms = {});

    /// Lebesgue measure: density 1, no atoms.
    static PiecewiseMeasure uniform();

    /// Density c0 + c1*t on all of [0,1].
    static PiecewiseMeasure affine_density(double c0, double c1);

    /// Piecewise-constant density from (start, value) knots; the first start
    /// must be 0 and each value holds until the next start (the last until 1).
    static PiecewiseMeasure step_density(const std::vector<std::pair<double, double>>& knots);

    /// Density `scale` on each of the given (sorted, disjoint) intervals and
    /// 0 elsewhere.
    static PiecewiseMeasure interval_indicator(std::span<const Interval> intervals, double scale);

    /// Copy of this measure with the given atoms attached.
    PiecewiseMeasure with_atoms(std::vector<Atom> atoms) const;

    /// Exact measure of an interval: the closed-form density integral plus
    /// every atom the interval contains under the half-open convention (an
    /// atom at 1 belongs only to intervals ending at 1).
    double measure_of(const Interval& iv) const;

    /// Sum of measure_of over pairwise disjoint intervals. Overlapping
    /// inputs raise ValidationError.
    double measure_of_union(std::span<const Interval> intervals) const;

    double total_mass() const { return total_mass_; }

    /// Density value at t, using the piece containing t under the half-open
    /// convention (t = 1 evaluates the last piece). Atoms are not included.
    double density_at(double t) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    std::vector<double> breakpoints_;
    std::vector<DensityPiece> pieces_;
    std::vector<Atom> atoms_;
    double total_mass_;
};

/// Closed intervals surviving `depth` rounds of the Smith-Volterra-Cantor
/// construction: round k removes a centered open subinterval of length 4^-k
/// from each of the 2^(k-1) intervals surviving round k-1. All endpoints are
/// dyadic, so the construction is exact in double precision.
std::vector<Interval> svc_intervals(int depth);

/// The open gaps removed during rounds 1..depth, i.e. the complement of
/// svc_intervals(depth) in [0,1], sorted left to right.
std::vector<Interval> svc_removed_intervals(int depth);

}  // namespace conflation
