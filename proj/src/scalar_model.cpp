#include "popdyn/scalar_model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace popdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("ScalarModel: parameter ") + name +
                                    " must be positive and finite");
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("ScalarModel: parameter ") + name +
                                    " must be nonnegative and finite");
    }
}

void check_input(double u) {
    if (!std::isfinite(u) || u < 0.0) throw std::domain_error("scalar map: density must be finite and >= 0");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* to_string(ScalarFamily f) {
    switch (f) {
        case ScalarFamily::SigmoidBH: return "sigmoid_bh";
        case ScalarFamily::ScaledBH: return "scaled_bh";
        case ScalarFamily::ElaydiSacker: return "elaydi_sacker";
        case ScalarFamily::RickerAllee: return "ricker_allee";
        case ScalarFamily::MSS: return "mss";
    }
    return "?";
}

ScalarModel ScalarModel::sigmoid_bh(double r, double delta) {
    require_positive(r, "r");
    require_positive(delta, "delta");
    ScalarModel m;
    m.family = ScalarFamily::SigmoidBH;
    m.r = r;
    m.delta = delta;
    return m;
}

ScalarModel ScalarModel::scaled_bh(double r, double a, double delta) {
    require_positive(r, "r");
    require_positive(a, "a");
    require_positive(delta, "delta");
    ScalarModel m;
    m.family = ScalarFamily::ScaledBH;
    m.r = r;
    m.a = a;
    m.delta = delta;
    return m;
}

ScalarModel ScalarModel::elaydi_sacker(double d, double e, double b, double c) {
    require_nonnegative(d, "d");
    require_nonnegative(e, "e");
    require_nonnegative(b, "b");
    // c = 0 would give H(0) = e/b != 0; the map needs a finite per-capita
    // rate at the origin
    require_positive(c, "c");
    ScalarModel m;
    m.family = ScalarFamily::ElaydiSacker;
    m.d = d;
    m.e = e;
    m.b = b;
    m.c = c;
    return m;
}

ScalarModel ScalarModel::ricker_allee(double r, double m_, double b) {
    require_positive(r, "r");
    require_nonnegative(m_, "m");
    require_nonnegative(b, "b");
    ScalarModel m;
    m.family = ScalarFamily::RickerAllee;
    m.r = r;
    m.m = m_;
    m.b = b;
    return m;
}

ScalarModel ScalarModel::mss(double r, double delta, double b, double d) {
    require_positive(r, "r");
    require_positive(delta, "delta");
    require_positive(b, "b");
    require_positive(d, "d");
    ScalarModel m;
    m.family = ScalarFamily::MSS;
    m.r = r;
    m.delta = delta;
    m.b = b;
    m.d = d;
    return m;
}

double ScalarModel::step(double u) const {
    check_input(u);
    if (u == 0.0) return 0.0;  // H(0)=0 by the limit; never evaluate h at 0
    switch (family) {
        case ScalarFamily::SigmoidBH: {
            const double ud = std::pow(u, delta);
            return r * ud / (1.0 + ud);
        }
        case ScalarFamily::ScaledBH: {
            const double ud = std::pow(u, delta);
            return r * ud / (a + ud);
        }
        case ScalarFamily::ElaydiSacker:
            return u * (d * u + e) / (u * u + b * u + c);
        case ScalarFamily::RickerAllee:
            return u * std::exp(r * (1.0 - u) - m / (1.0 + b * u));
        case ScalarFamily::MSS: {
            const double ud = std::pow(u, delta);
            return r * ud / (1.0 + ud + b * std::pow(u, d));
        }
    }
    return 0.0;
}

double ScalarModel::percap(double u) const {
    if (!(u > 0.0)) throw std::domain_error("percap: requires u > 0");
    return step(u) / u;
}

double ScalarModel::percap_at_zero() const {
    switch (family) {
        case ScalarFamily::SigmoidBH:
        case ScalarFamily::ScaledBH: {
            const double denom = family == ScalarFamily::ScaledBH ? a : 1.0;
            if (delta > 1.0) return 0.0;
            if (delta == 1.0) return r / denom;
            return kInf;
        }
        case ScalarFamily::ElaydiSacker:
            return e / c;
        case ScalarFamily::RickerAllee:
            return std::exp(r - m);
        case ScalarFamily::MSS:
            if (delta > 1.0) return 0.0;
            if (delta == 1.0) return r;
            return kInf;
    }
    return 0.0;
}

double ScalarModel::deriv(double u) const {
    check_input(u);
    switch (family) {
        case ScalarFamily::SigmoidBH: {
            if (u == 0.0) return delta > 1.0 ? 0.0 : (delta == 1.0 ? r : kInf);
            const double ud = std::pow(u, delta);
            const double D = 1.0 + ud;
            return r * delta * std::pow(u, delta - 1.0) / (D * D);
        }
        case ScalarFamily::ScaledBH: {
            if (u == 0.0) return delta > 1.0 ? 0.0 : (delta == 1.0 ? r / a : kInf);
            const double ud = std::pow(u, delta);
            const double D = a + ud;
            return r * delta * a * std::pow(u, delta - 1.0) / (D * D);
        }
        case ScalarFamily::ElaydiSacker: {
            const double D = u * u + b * u + c;
            const double N = u * (d * u + e);
            return ((2.0 * d * u + e) * D - N * (2.0 * u + b)) / (D * D);
        }
        case ScalarFamily::RickerAllee: {
            const double w = 1.0 + b * u;
            const double h = std::exp(r * (1.0 - u) - m / w);
            return h * (1.0 + u * (b * m / (w * w) - r));
        }
        case ScalarFamily::MSS: {
            if (u == 0.0) return delta > 1.0 ? 0.0 : (delta == 1.0 ? r : kInf);
            const double ud = std::pow(u, delta);
            const double uD = std::pow(u, d);
            const double D = 1.0 + ud + b * uD;
            return r * std::pow(u, delta - 1.0) * (delta + b * (delta - d) * uD) / (D * D);
        }
    }
    return 0.0;
}

double ScalarModel::percap_deriv(double u) const {
    if (!(u > 0.0)) throw std::domain_error("percap_deriv: requires u > 0");
    switch (family) {
        case ScalarFamily::SigmoidBH:
        case ScalarFamily::ScaledBH: {
            const double denom0 = family == ScalarFamily::ScaledBH ? a : 1.0;
            const double ud = std::pow(u, delta);
            const double D = denom0 + ud;
            // h = r u^{delta-1}/D, (ln h)' = ((delta-1) denom0 - ud)/(u D)
            return percap(u) * ((delta - 1.0) * denom0 - ud) / (u * D);
        }
        case ScalarFamily::ElaydiSacker: {
            const double D = u * u + b * u + c;
            return ((d * D) - (d * u + e) * (2.0 * u + b)) / (D * D);
        }
        case ScalarFamily::RickerAllee: {
            const double w = 1.0 + b * u;
            return percap(u) * (b * m / (w * w) - r);
        }
        case ScalarFamily::MSS: {
            const double ud = std::pow(u, delta);
            const double uD = std::pow(u, d);
            const double D = 1.0 + ud + b * uD;
            // (ln h)' = (delta-1)/u - (delta u^{delta-1} + b d u^{d-1})/D
            return percap(u) * ((delta - 1.0) / u - (delta * ud / u + b * d * uD / u) / D);
        }
    }
    return 0.0;
}

std::optional<double> ScalarModel::critical_r() const {
    switch (family) {
        case ScalarFamily::SigmoidBH:
            if (delta <= 1.0) return std::nullopt;
            return delta * std::pow(delta - 1.0, 1.0 / delta - 1.0);
        case ScalarFamily::ScaledBH:
            if (delta <= 1.0) return std::nullopt;
            return std::pow(a, 1.0 / delta) * delta * std::pow(delta - 1.0, 1.0 / delta - 1.0);
        case ScalarFamily::MSS: {
            if (!(d > delta && delta > 1.0)) return std::nullopt;
            const double q = delta / (b * (d - delta));
            return std::pow(q, (1.0 - delta) / d) * (d / (d - delta) + std::pow(q, delta / d));
        }
        default:
            return std::nullopt;
    }
}

double ScalarModel::default_u_max() const {
    switch (family) {
        case ScalarFamily::SigmoidBH:
        case ScalarFamily::ScaledBH:
        case ScalarFamily::MSS:
            // H < r, so [0, r] absorbs and all fixed points sit below r
            return 2.0 * std::max(r, 1.0);
        case ScalarFamily::RickerAllee:
            // positive fixed points satisfy r(1-u) = m/(1+bu) > 0, hence u < 1
            return 2.0;
        case ScalarFamily::ElaydiSacker:
            // Cauchy bound on u^2 + (b-d)u + (c-e) = 0
            return 2.0 * (1.0 + std::abs(b - d) + std::abs(c - e));
    }
    return 2.0;
}

std::map<std::string, std::string> ScalarModel::to_record() const {
    std::map<std::string, std::string> rec;
    rec["family"] = to_string(family);
    switch (family) {
        case ScalarFamily::SigmoidBH:
            rec["r"] = fmt17(r);
            rec["delta"] = fmt17(delta);
            break;
        case ScalarFamily::ScaledBH:
            rec["r"] = fmt17(r);
            rec["a"] = fmt17(a);
            rec["delta"] = fmt17(delta);
            break;
        case ScalarFamily::ElaydiSacker:
            rec["d"] = fmt17(d);
            rec["e"] = fmt17(e);
            rec["b"] = fmt17(b);
            rec["c"] = fmt17(c);
            break;
        case ScalarFamily::RickerAllee:
            rec["r"] = fmt17(r);
            rec["m"] = fmt17(m);
            rec["b"] = fmt17(b);
            break;
        case ScalarFamily::MSS:
            rec["r"] = fmt17(r);
            rec["delta"] = fmt17(delta);
            rec["b"] = fmt17(b);
            rec["d"] = fmt17(d);
            break;
    }
    return rec;
}

}  // namespace popdyn
