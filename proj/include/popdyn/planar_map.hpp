#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "popdyn/scalar_model.hpp"

// Two-species competition maps on the closed positive quadrant.
//
//   GeneralBH   x' = r1 x^d1 / (1 + x^d1 + b1 y^d3)
//               y' = r2 y^d2 / (1 + y^d2 + b2 x^d4)
//   SymmetricBH the same with r1=r2, b1=b2, d1=d2, d3=d4
//   ScrambleMating     x' = x e^{r(1-x)-a y} * b x/(1+b x)   (and symmetric y')
//   ScramblePredation  x' = x e^{r(1-x)-a y - m/(1+b x)}     (and symmetric y')
//
// Both axes are invariant for every family and the origin is fixed.

namespace popdyn {

struct State {
    double x = 0.0;
    double y = 0.0;
};

struct Mat2 {
    double m00 = 0, m01 = 0, m10 = 0, m11 = 0;
    double det() const { return m00 * m11 - m01 * m10; }
    double trace() const { return m00 + m11; }
    double max_abs() const;
    std::array<std::complex<double>, 2> eigenvalues() const;
    double spectral_radius() const;
};

enum class PlanarFamily { GeneralBH, SymmetricBH, ScrambleMating, ScramblePredation };

const char* to_string(PlanarFamily f);

struct PlanarMap {
    PlanarFamily family = PlanarFamily::GeneralBH;
    // Beverton-Holt parameters
    double r1 = 0, r2 = 0, b1 = 0, b2 = 0;
    double delta1 = 0, delta2 = 0, delta3 = 0, delta4 = 0;
    // scramble parameters
    double r = 0, a = 0, b = 0, m = 0;

    static PlanarMap general_bh(double r1, double r2, double b1, double b2, double delta1,
                                double delta2, double delta3, double delta4);
    static PlanarMap symmetric_bh(double r, double b, double delta, double d);
    static PlanarMap scramble_mating(double r, double a, double b);
    static PlanarMap scramble_predation(double r, double a, double m, double b);

    bool is_bh() const {
        return family == PlanarFamily::GeneralBH || family == PlanarFamily::SymmetricBH;
    }

    State step(State s) const;
    // analytic Jacobian; axis limits for exponents >= 1, one-sided finite
    // differences otherwise
    Mat2 jacobian(State s) const;
    Mat2 jacobian_fd(State s) const;

    // the restriction to the invariant x-axis as a named scalar family,
    // where one exists
    std::optional<ScalarModel> axis_model_x() const;
    std::optional<ScalarModel> axis_model_y() const;
    std::function<double(double)> axis_restriction_x() const;
    std::function<double(double)> axis_restriction_y() const;

    // the diagonal x=y is invariant for the symmetric families; the
    // SymmetricBH diagonal reduces to the scalar MSS map
    std::optional<ScalarModel> diagonal_model() const;
    std::function<double(double)> diagonal_restriction() const;

    PlanarMap as_general() const;  // SymmetricBH -> GeneralBH with equal parameters

    // a rectangle the dynamics is eventually confined to
    State absorbing_bound() const;

    std::map<std::string, std::string> to_record() const;
};

}  // namespace popdyn
