#pragma once

#include <map>
#include <optional>
#include <string>

// Single-species discrete-time maps u -> H(u) = u*h(u). Five families:
//
//   SigmoidBH     H(u) = r u^delta / (1 + u^delta)
//   ScaledBH      H(u) = r u^delta / (a + u^delta)
//   ElaydiSacker  H(u) = u (d u + e) / (u^2 + b u + c)
//   RickerAllee   H(u) = u exp(r (1 - u) - m / (1 + b u))
//   MSS           H(u) = r u^delta / (1 + u^delta + b u^d)
//
// The first three saturate at high density (contest competition); the last
// two are one-hump maps (scramble competition). All have H(0) = 0.

namespace popdyn {

enum class ScalarFamily { SigmoidBH, ScaledBH, ElaydiSacker, RickerAllee, MSS };

const char* to_string(ScalarFamily f);

struct ScalarModel {
    ScalarFamily family = ScalarFamily::SigmoidBH;
    double r = 0, delta = 0, a = 0, b = 0, c = 0, d = 0, e = 0, m = 0;

    static ScalarModel sigmoid_bh(double r, double delta);
    static ScalarModel scaled_bh(double r, double a, double delta);
    static ScalarModel elaydi_sacker(double d, double e, double b, double c);
    static ScalarModel ricker_allee(double r, double m, double b);
    static ScalarModel mss(double r, double delta, double b, double d);

    // H(u). Throws std::domain_error unless u is finite and >= 0.
    double step(double u) const;
    // per-capita rate h(u) = H(u)/u; requires u > 0 (h may blow up at 0)
    double percap(double u) const;
    // analytic H'(u); at u = 0 returns the one-sided limit (may be +inf)
    double deriv(double u) const;
    // analytic h'(u); requires u > 0
    double percap_deriv(double u) const;
    // limit of h(u) as u -> 0+ (may be +inf)
    double percap_at_zero() const;

    // critical maximum growth rate below which no positive fixed points
    // exist; absent where the closed form does not apply
    std::optional<double> critical_r() const;

    // upper end of the fixed-point search interval; covers the absorbing set
    double default_u_max() const;

    // flat key-value record: family tag plus named parameters
    std::map<std::string, std::string> to_record() const;
};

}  // namespace popdyn
