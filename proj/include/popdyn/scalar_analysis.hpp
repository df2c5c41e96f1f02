#pragma once

#include <optional>
#include <span>
#include <vector>

#include "popdyn/numerics.hpp"
#include "popdyn/scalar_model.hpp"

namespace popdyn {

enum class Stability { Stable, Unstable, Marginal };
enum class RootRole { Origin, AlleeThreshold, CarryingCapacity, Other };

const char* to_string(Stability s);
const char* to_string(RootRole r);

struct ScalarRoot {
    double value = 0.0;
    RootRole role = RootRole::Other;
    Stability stability = Stability::Marginal;
    double deriv = 0.0;  // H'(u*)
};

struct ScalarEquilibria {
    std::vector<ScalarRoot> roots;  // strictly increasing, origin first
    bool possibly_missed = false;   // refinement failure or skipped scan cells

    const ScalarRoot* find_role(RootRole role) const;
    int positive_count() const;
};

// All fixed points of H in [0, u_max] (u_max <= 0 picks the family default).
// Linear scan refined by a geometric sweep toward 0, so thresholds that sit
// many decades below the grid are still found.
ScalarEquilibria find_equilibria(const ScalarModel& model, double u_max = 0.0,
                                 double tol = 1e-10, int n_subdivisions = 4096);

enum class AlleeRegime { None, Weak, Strong };
const char* to_string(AlleeRegime r);

struct AlleeClassification {
    AlleeRegime regime = AlleeRegime::None;
    std::optional<double> r_crit;
};

// Strong: origin locally stable, a positive threshold and a larger fixed
// point exist, and the per-capita rate rises near 0 (tested on a grid) or is
// unbounded there. Weak: origin repelling with a unique positive fixed point.
AlleeClassification classify_allee(const ScalarModel& model, double u_max = 0.0, double tol = 1e-10);

// closed-form parameter test for the Ricker map with predation saturation:
// weak iff b*m > r > m, strong iff r < m < r(1+b)^2/(4b) with b > 1
AlleeRegime ricker_regime(double r, double m, double b);

struct Trajectory {
    std::vector<double> values;  // values[0] = u0, length steps+1 unless truncated
    bool diverged = false;
};

Trajectory simulate(const ScalarModel& model, double u0, int steps);

struct AsymptoticClass {
    enum class Kind { FixedPoint, Cycle, Aperiodic, Undetermined };
    Kind kind = Kind::Undetermined;
    int index = -1;   // equilibrium index for FixedPoint
    int period = 0;   // minimal period for Cycle
};

// Classify the tail of a trajectory against located equilibria; cycles up to
// max_period; bounded non-periodic tails are Aperiodic.
AsymptoticClass asymptotic_class(std::span<const double> trajectory, const ScalarEquilibria& eq,
                                 double tol, int max_period);

num::LyapunovResult lyapunov(const ScalarModel& model, double u0, int steps, int burn_in);

}  // namespace popdyn
