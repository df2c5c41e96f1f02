#include "popdyn/planar_map.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace popdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("PlanarMap: parameter ") + name +
                                    " must be positive and finite");
    }
}

void check_state(State s) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || s.x < 0.0 || s.y < 0.0)
        throw std::domain_error("planar map: state must be finite with nonnegative components");
}

// v^p extended to v = 0 by the one-sided limit
double pow0(double v, double p) {
    if (v == 0.0) {
        if (p > 0.0) return 0.0;
        if (p == 0.0) return 1.0;
        return kInf;
    }
    return std::pow(v, p);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double Mat2::max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)), std::max(std::abs(m10), std::abs(m11)));
}

std::array<std::complex<double>, 2> Mat2::eigenvalues() const {
    const double tr = trace();
    const double disc = tr * tr / 4.0 - det();
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>(tr / 2.0 - s, 0.0), std::complex<double>(tr / 2.0 + s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(tr / 2.0, -s), std::complex<double>(tr / 2.0, s)};
}

double Mat2::spectral_radius() const {
    const auto ev = eigenvalues();
    return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

const char* to_string(PlanarFamily f) {
    switch (f) {
        case PlanarFamily::GeneralBH: return "general_bh";
        case PlanarFamily::SymmetricBH: return "symmetric_bh";
        case PlanarFamily::ScrambleMating: return "scramble_mating";
        case PlanarFamily::ScramblePredation: return "scramble_predation";
    }
    return "?";
}

PlanarMap PlanarMap::general_bh(double r1, double r2, double b1, double b2, double delta1,
                                double delta2, double delta3, double delta4) {
    require_positive(r1, "r1");
    require_positive(r2, "r2");
    require_positive(b1, "b1");
    require_positive(b2, "b2");
    require_positive(delta1, "delta1");
    require_positive(delta2, "delta2");
    require_positive(delta3, "delta3");
    require_positive(delta4, "delta4");
    PlanarMap m;
    m.family = PlanarFamily::GeneralBH;
    m.r1 = r1;
    m.r2 = r2;
    m.b1 = b1;
    m.b2 = b2;
    m.delta1 = delta1;
    m.delta2 = delta2;
    m.delta3 = delta3;
    m.delta4 = delta4;
    return m;
}

PlanarMap PlanarMap::symmetric_bh(double r, double b, double delta, double d) {
    PlanarMap m = general_bh(r, r, b, b, delta, delta, d, d);
    m.family = PlanarFamily::SymmetricBH;
    m.r = r;
    m.b = b;
    return m;
}

PlanarMap PlanarMap::scramble_mating(double r, double a, double b) {
    require_positive(r, "r");
    require_positive(a, "a");
    require_positive(b, "b");
    PlanarMap m;
    m.family = PlanarFamily::ScrambleMating;
    m.r = r;
    m.a = a;
    m.b = b;
    return m;
}

PlanarMap PlanarMap::scramble_predation(double r, double a, double m_, double b) {
    require_positive(r, "r");
    require_positive(a, "a");
    require_positive(m_, "m");
    require_positive(b, "b");
    PlanarMap m;
    m.family = PlanarFamily::ScramblePredation;
    m.r = r;
    m.a = a;
    m.m = m_;
    m.b = b;
    return m;
}

State PlanarMap::step(State s) const {
    check_state(s);
    const double x = s.x, y = s.y;
    switch (family) {
        case PlanarFamily::GeneralBH:
        case PlanarFamily::SymmetricBH: {
            const double xd1 = pow0(x, delta1);
            const double yd2 = pow0(y, delta2);
            const double yd3 = pow0(y, delta3);
            const double xd4 = pow0(x, delta4);
            return {r1 * xd1 / (1.0 + xd1 + b1 * yd3), r2 * yd2 / (1.0 + yd2 + b2 * xd4)};
        }
        case PlanarFamily::ScrambleMating: {
            const double ex = std::exp(r * (1.0 - x) - a * y);
            const double ey = std::exp(r * (1.0 - y) - a * x);
            return {x * ex * b * x / (1.0 + b * x), y * ey * b * y / (1.0 + b * y)};
        }
        case PlanarFamily::ScramblePredation: {
            const double ex = std::exp(r * (1.0 - x) - a * y - m / (1.0 + b * x));
            const double ey = std::exp(r * (1.0 - y) - a * x - m / (1.0 + b * y));
            return {x * ex, y * ey};
        }
    }
    return {0, 0};
}

Mat2 PlanarMap::jacobian(State s) const {
    check_state(s);
    const double x = s.x, y = s.y;
    switch (family) {
        case PlanarFamily::GeneralBH:
        case PlanarFamily::SymmetricBH: {
            const double xd1 = pow0(x, delta1);
            const double yd2 = pow0(y, delta2);
            const double yd3 = pow0(y, delta3);
            const double xd4 = pow0(x, delta4);
            const double D1 = 1.0 + xd1 + b1 * yd3;
            const double D2 = 1.0 + yd2 + b2 * xd4;
            Mat2 J;
            J.m00 = r1 * delta1 * pow0(x, delta1 - 1.0) * (1.0 + b1 * yd3) / (D1 * D1);
            J.m01 = -r1 * b1 * delta3 * xd1 * pow0(y, delta3 - 1.0) / (D1 * D1);
            J.m10 = -r2 * b2 * delta4 * yd2 * pow0(x, delta4 - 1.0) / (D2 * D2);
            J.m11 = r2 * delta2 * pow0(y, delta2 - 1.0) * (1.0 + b2 * xd4) / (D2 * D2);
            // 0 * inf from an exponent < 1 on an axis: fall back to one-sided
            // finite differences
            if (!std::isfinite(J.m00) || !std::isfinite(J.m01) || !std::isfinite(J.m10) ||
                !std::isfinite(J.m11))
                return jacobian_fd(s);
            return J;
        }
        case PlanarFamily::ScrambleMating: {
            const State t = step(s);
            Mat2 J;
            J.m00 = x > 0.0 ? t.x * (2.0 / x - b / (1.0 + b * x) - r) : 0.0;
            J.m01 = -a * t.x;
            J.m10 = -a * t.y;
            J.m11 = y > 0.0 ? t.y * (2.0 / y - b / (1.0 + b * y) - r) : 0.0;
            return J;
        }
        case PlanarFamily::ScramblePredation: {
            const double wx = 1.0 + b * x;
            const double wy = 1.0 + b * y;
            const double ex = std::exp(r * (1.0 - x) - a * y - m / wx);
            const double ey = std::exp(r * (1.0 - y) - a * x - m / wy);
            Mat2 J;
            J.m00 = ex * (1.0 + x * (m * b / (wx * wx) - r));
            J.m01 = -a * x * ex;
            J.m10 = -a * y * ey;
            J.m11 = ey * (1.0 + y * (m * b / (wy * wy) - r));
            return J;
        }
    }
    return {};
}

Mat2 PlanarMap::jacobian_fd(State s) const {
    const double hx = 6e-6 * std::max(std::abs(s.x), 1e-3);
    const double hy = 6e-6 * std::max(std::abs(s.y), 1e-3);
    const auto col = [&](bool xdir, double h) {
        const double v = xdir ? s.x : s.y;
        State up = s, dn = s;
        (xdir ? up.x : up.y) = v + h;
        double denom = 2.0 * h;
        if (v - h >= 0.0) {
            (xdir ? dn.x : dn.y) = v - h;
        } else {
            dn = s;  // one-sided at the domain boundary
            denom = h;
        }
        const State fu = step(up), fd = step(dn);
        return State{(fu.x - fd.x) / denom, (fu.y - fd.y) / denom};
    };
    const State cx = col(true, hx);
    const State cy = col(false, hy);
    return {cx.x, cy.x, cx.y, cy.y};
}

std::optional<ScalarModel> PlanarMap::axis_model_x() const {
    switch (family) {
        case PlanarFamily::GeneralBH:
        case PlanarFamily::SymmetricBH:
            return ScalarModel::sigmoid_bh(r1, delta1);
        case PlanarFamily::ScramblePredation:
            return ScalarModel::ricker_allee(r, m, b);
        case PlanarFamily::ScrambleMating:
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<ScalarModel> PlanarMap::axis_model_y() const {
    if (is_bh()) return ScalarModel::sigmoid_bh(r2, delta2);
    return axis_model_x();  // scramble families are symmetric
}

std::function<double(double)> PlanarMap::axis_restriction_x() const {
    PlanarMap self = *this;
    return [self](double x) { return self.step({x, 0.0}).x; };
}

std::function<double(double)> PlanarMap::axis_restriction_y() const {
    PlanarMap self = *this;
    return [self](double y) { return self.step({0.0, y}).y; };
}

std::optional<ScalarModel> PlanarMap::diagonal_model() const {
    if (family == PlanarFamily::SymmetricBH) return ScalarModel::mss(r, delta1, b, delta3);
    return std::nullopt;
}

std::function<double(double)> PlanarMap::diagonal_restriction() const {
    if (family == PlanarFamily::GeneralBH)
        throw std::invalid_argument("diagonal_restriction: map is not symmetric");
    PlanarMap self = *this;
    return [self](double u) { return self.step({u, u}).x; };
}

PlanarMap PlanarMap::as_general() const {
    if (!is_bh()) throw std::invalid_argument("as_general: not a Beverton-Holt family");
    PlanarMap m = *this;
    m.family = PlanarFamily::GeneralBH;
    return m;
}

State PlanarMap::absorbing_bound() const {
    if (is_bh()) return {r1, r2};
    // scramble maps are dominated by x e^{r(1-x)}, whose maximum is e^{r-1}/r
    const double peak = std::exp(r - 1.0) / r;
    return {std::max(1.0, peak), std::max(1.0, peak)};
}

std::map<std::string, std::string> PlanarMap::to_record() const {
    std::map<std::string, std::string> rec;
    rec["family"] = to_string(family);
    switch (family) {
        case PlanarFamily::GeneralBH:
            rec["r1"] = fmt17(r1);
            rec["r2"] = fmt17(r2);
            rec["b1"] = fmt17(b1);
            rec["b2"] = fmt17(b2);
            rec["delta1"] = fmt17(delta1);
            rec["delta2"] = fmt17(delta2);
            rec["delta3"] = fmt17(delta3);
            rec["delta4"] = fmt17(delta4);
            break;
        case PlanarFamily::SymmetricBH:
            rec["r"] = fmt17(r);
            rec["b"] = fmt17(b);
            rec["delta"] = fmt17(delta1);
            rec["d"] = fmt17(delta3);
            break;
        case PlanarFamily::ScrambleMating:
            rec["r"] = fmt17(r);
            rec["a"] = fmt17(a);
            rec["b"] = fmt17(b);
            break;
        case PlanarFamily::ScramblePredation:
            rec["r"] = fmt17(r);
            rec["a"] = fmt17(a);
            rec["m"] = fmt17(m);
            rec["b"] = fmt17(b);
            break;
    }
    return rec;
}

}  // namespace popdyn
