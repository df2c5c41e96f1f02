#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "popdyn/planar_map.hpp"
#include "popdyn/scalar_analysis.hpp"

namespace popdyn {

// a named precondition of the analysis does not hold (reported, not asserted)
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

enum class BoundaryRole { E0, ExA, ExK, EyA, EyK };
enum class SpectralClass { Sink, Saddle, Source, NonHyperbolic };

const char* to_string(BoundaryRole r);
const char* to_string(SpectralClass c);

struct BoundaryEquilibrium {
    State point;
    BoundaryRole role = BoundaryRole::E0;
    Stability stability = Stability::Marginal;
    std::array<std::complex<double>, 2> eigenvalues{};
};

struct PlanarFixedPoint {
    State point;
    std::array<std::complex<double>, 2> eigenvalues{};
    SpectralClass cls = SpectralClass::NonHyperbolic;
};

struct PlanarEquilibria {
    std::vector<BoundaryEquilibrium> boundary;
    std::vector<PlanarFixedPoint> interior;
    bool h1 = false;            // both axis maps have strong Allee structure
    std::string h1_note;        // names the violated part when h1 is false
    bool ambiguous = false;     // a near-tangent nullcline crossing was seen
};

// delta_i > 1 and r_i above the axis critical growth rate, both species
bool condition_h1(const PlanarMap& map, std::string* why = nullptr);

// the five axis equilibria (origin, two thresholds, two carrying capacities)
// with stability from the planar Jacobian; partial when H1 fails
PlanarEquilibria boundary_equilibria(const PlanarMap& map);

struct NullclineAnalysis {
    double x_c = 0, y_c = 0;          // abscissae of the nullcline maxima
    double F1_at_xc = 0, F2_at_yc = 0;
    enum class Count { Zero, Two, Four, OutsideTheoremCases };
    Count predicted = Count::OutsideTheoremCases;
    std::vector<State> curve1;        // samples of y = F1(x) on (A1, K1)
    std::vector<State> curve2;        // samples of x = F2(y) on (A2, K2)
    std::vector<PlanarFixedPoint> located;
};

const char* to_string(NullclineAnalysis::Count c);

// Beverton-Holt families only; throws HypothesisError when H1 fails
NullclineAnalysis nullclines(const PlanarMap& map, int samples = 512);

// All interior fixed points. BH families intersect the two nullclines by a
// sign-change scan of F2(F1(x)) - x (run in both coordinates, with geometric
// refinement toward the domain edges where crossings cluster); scramble
// families run damped Newton from coarse-grid seeds.
std::vector<PlanarFixedPoint> interior_equilibria(const PlanarMap& map, double tol = 1e-10,
                                                  bool* ambiguous = nullptr);

enum class MonotoneClass { StronglyCompetitive, ConditionallyMonotone, Indeterminate };
const char* to_string(MonotoneClass c);

struct MonotoneReport {
    MonotoneClass cls = MonotoneClass::Indeterminate;
    double intra = 0;      // delta1*delta2
    double inter = 0;      // delta3*delta4
    double r1_bound = 0;   // growth-rate bounds that restore order preservation
    double r2_bound = 0;
};

MonotoneReport monotonicity_class(const PlanarMap& map);

// locus where det(Jacobian) vanishes in the open quadrant, as y = gamma(x);
// exists only when the inter-specific exponents dominate
struct CriticalCurve {
    double x_min = 0;
    double y_min = 0;
    double dd12 = 0, dd34 = 0, b1 = 0, b2 = 0, d3 = 0, d4 = 0;
    double gamma(double x) const;       // throws std::domain_error for x <= x_min
    double gamma_inv(double y) const;   // throws std::domain_error for y <= y_min
};

CriticalCurve critical_curve(const PlanarMap& map);

struct SymmetricStability {
    double lambda_diag = 0;        // eigenvalue along the diagonal
    double lambda_transverse = 0;  // eigenvalue across it (always positive)
    Stability verdict = Stability::Marginal;
};

// closed-form eigenvalues at a symmetric fixed point (x*, x*) of the
// symmetric family; x* must satisfy the fixed-point equation to tol
SymmetricStability symmetric_stability(const PlanarMap& map, double x_star, double tol = 1e-8);

// spectral classification of a verified fixed point
PlanarFixedPoint local_stability(const PlanarMap& map, State p, double tol = 1e-8);

// both the axis and the diagonal restrictions carry strong Allee structure;
// closed-form tests for the scramble families, numeric for symmetric BH
bool two_dim_strong_allee(const PlanarMap& map);

}  // namespace popdyn
