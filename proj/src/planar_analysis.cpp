#include "popdyn/planar_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace popdyn {

namespace {

constexpr double kBand = 1e-9;

double radicand1(const PlanarMap& m, double x) {
    return m.r1 * std::pow(x, m.delta1 - 1.0) - std::pow(x, m.delta1) - 1.0;
}

double radicand2(const PlanarMap& m, double y) {
    return m.r2 * std::pow(y, m.delta2 - 1.0) - std::pow(y, m.delta2) - 1.0;
}

double F1_of(const PlanarMap& m, double x) {
    return std::pow(radicand1(m, x) / m.b1, 1.0 / m.delta3);
}

double F2_of(const PlanarMap& m, double y) {
    return std::pow(radicand2(m, y) / m.b2, 1.0 / m.delta4);
}

Stability stability_from_radius(double rho) {
    if (std::abs(rho - 1.0) <= kBand) return Stability::Marginal;
    return rho < 1.0 ? Stability::Stable : Stability::Unstable;
}

SpectralClass classify_eigen(const std::array<std::complex<double>, 2>& ev) {
    const double m0 = std::abs(ev[0]);
    const double m1 = std::abs(ev[1]);
    if (std::abs(m0 - 1.0) <= kBand || std::abs(m1 - 1.0) <= kBand)
        return SpectralClass::NonHyperbolic;
    const int inside = (m0 < 1.0) + (m1 < 1.0);
    if (inside == 2) return SpectralClass::Sink;
    if (inside == 0) return SpectralClass::Source;
    return SpectralClass::Saddle;
}

// damped Newton on the fixed-point residual step(s) - s
bool polish_fixed_point(const PlanarMap& map, State& s, double tol, int max_iter = 60) {
    const auto resid = [&](State p) {
        const State t = map.step(p);
        return State{t.x - p.x, t.y - p.y};
    };
    const auto norm = [](State v) { return std::max(std::abs(v.x), std::abs(v.y)); };
    State f = resid(s);
    for (int it = 0; it < max_iter; ++it) {
        if (norm(f) <= tol * 0.01) break;
        Mat2 J = map.jacobian(s);
        J.m00 -= 1.0;
        J.m11 -= 1.0;
        const double det = J.det();
        if (det == 0.0 || !std::isfinite(det)) break;
        double dx = -(J.m11 * f.x - J.m01 * f.y) / det;
        double dy = -(-J.m10 * f.x + J.m00 * f.y) / det;
        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 25; ++k) {
            State cand{s.x + lambda * dx, s.y + lambda * dy};
            if (cand.x >= 0.0 && cand.y >= 0.0) {
                State fc = resid(cand);
                if (norm(fc) < norm(f)) {
                    s = cand;
                    f = fc;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }
    return norm(f) <= tol;
}

void dedupe_points(std::vector<State>& pts) {
    std::sort(pts.begin(), pts.end(), [](State a, State b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<State> out;
    for (const State& p : pts) {
        bool dup = false;
        for (const State& q : out) {
            const double scale = std::max({1.0, std::abs(p.x), std::abs(p.y)});
            if (std::abs(p.x - q.x) <= 1e-7 * scale && std::abs(p.y - q.y) <= 1e-7 * scale) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(p);
    }
    pts = std::move(out);
}

// sample points of an open interval: uniform fill plus geometric clusters at
// both ends (nullcline crossings pile up against the domain edges)
std::vector<double> interval_samples(double lo, double hi, int n_uniform) {
    std::vector<double> xs;
    const double w = hi - lo;
    if (!(w > 0.0)) return xs;
    for (int k = 2; k < 50; ++k) {
        const double off = w * std::pow(2.0, -k);
        xs.push_back(lo + off);
        xs.push_back(hi - off);
    }
    for (int i = 1; i < n_uniform; ++i) xs.push_back(lo + w * i / n_uniform);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

struct AxisRoots {
    bool strong = false;  // threshold + carrying capacity both present
    double A = 0, K = 0;
    ScalarEquilibria eq;
};

AxisRoots axis_roots(const ScalarModel& m) {
    AxisRoots out;
    out.eq = find_equilibria(m);
    const ScalarRoot* A = out.eq.find_role(RootRole::AlleeThreshold);
    const ScalarRoot* K = out.eq.find_role(RootRole::CarryingCapacity);
    if (A && K) {
        out.strong = true;
        out.A = A->value;
        out.K = K->value;
    }
    return out;
}

}  // namespace

const char* to_string(BoundaryRole r) {
    switch (r) {
        case BoundaryRole::E0: return "E0";
        case BoundaryRole::ExA: return "ExA";
        case BoundaryRole::ExK: return "ExK";
        case BoundaryRole::EyA: return "EyA";
        case BoundaryRole::EyK: return "EyK";
    }
    return "?";
}

const char* to_string(SpectralClass c) {
    switch (c) {
        case SpectralClass::Sink: return "sink";
        case SpectralClass::Saddle: return "saddle";
        case SpectralClass::Source: return "source";
        case SpectralClass::NonHyperbolic: return "non_hyperbolic";
    }
    return "?";
}

const char* to_string(MonotoneClass c) {
    switch (c) {
        case MonotoneClass::StronglyCompetitive: return "strongly_competitive";
        case MonotoneClass::ConditionallyMonotone: return "conditionally_monotone";
        case MonotoneClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* to_string(NullclineAnalysis::Count c) {
    switch (c) {
        case NullclineAnalysis::Count::Zero: return "zero";
        case NullclineAnalysis::Count::Two: return "two";
        case NullclineAnalysis::Count::Four: return "four";
        case NullclineAnalysis::Count::OutsideTheoremCases: return "outside_theorem_cases";
    }
    return "?";
}

bool condition_h1(const PlanarMap& map, std::string* why) {
    if (!map.is_bh()) {
        if (why) *why = "H1 applies to the Beverton-Holt families only";
        return false;
    }
    const auto check = [&](double delta, double r, const char* which) {
        if (!(delta > 1.0)) {
            if (why) *why = std::string("H1 violated: ") + which + " exponent <= 1";
            return false;
        }
        const double rc = delta * std::pow(delta - 1.0, 1.0 / delta - 1.0);
        if (!(r > rc)) {
            if (why)
                *why = std::string("H1 violated: ") + which + " growth rate " + std::to_string(r) +
                       " <= critical " + std::to_string(rc);
            return false;
        }
        return true;
    };
    return check(map.delta1, map.r1, "species x") && check(map.delta2, map.r2, "species y");
}

PlanarEquilibria boundary_equilibria(const PlanarMap& map) {
    PlanarEquilibria out;
    std::string why;
    out.h1 = condition_h1(map, &why);
    if (!out.h1) out.h1_note = why;

    const auto add = [&](State p, BoundaryRole role) {
        BoundaryEquilibrium be;
        be.point = p;
        be.role = role;
        const Mat2 J = map.jacobian(p);
        be.eigenvalues = J.eigenvalues();
        be.stability = stability_from_radius(J.spectral_radius());
        out.boundary.push_back(be);
    };

    add({0.0, 0.0}, BoundaryRole::E0);

    const auto add_axis = [&](bool xaxis) {
        std::vector<double> roots;
        if (auto am = xaxis ? map.axis_model_x() : map.axis_model_y()) {
            const auto eq = find_equilibria(*am);
            for (const auto& rt : eq.roots)
                if (rt.value > 0.0) roots.push_back(rt.value);
        } else {
            // no named scalar family for this axis: generic scan
            const auto f = xaxis ? map.axis_restriction_x() : map.axis_restriction_y();
            const auto g = [&](double u) { return f(u) - u; };
            const double hi = 2.0 * (xaxis ? map.absorbing_bound().x : map.absorbing_bound().y);
            auto scan = num::bracket_scan(g, hi / 4096.0, hi, 4095);
            auto geo = num::bracket_scan_geometric(g, hi / 4096.0);
            scan.brackets.insert(scan.brackets.end(), geo.brackets.begin(), geo.brackets.end());
            for (const auto& br : scan.brackets) {
                auto res = num::refine_root(g, br, 1e-12);
                if (res.converged && res.root > 0.0) roots.push_back(res.root);
            }
            std::sort(roots.begin(), roots.end());
            roots.erase(std::unique(roots.begin(), roots.end(),
                                    [](double a, double b) { return std::abs(a - b) < 1e-8; }),
                        roots.end());
        }
        const auto f = xaxis ? map.axis_restriction_x() : map.axis_restriction_y();
        for (double u : roots) {
            // threshold-type roots repel along their own axis
            const double h = 1e-7 * std::max(1.0, u);
            const double du = (f(u + h) - f(u - h)) / (2.0 * h);
            const bool threshold = du > 1.0;
            const State p = xaxis ? State{u, 0.0} : State{0.0, u};
            add(p, xaxis ? (threshold ? BoundaryRole::ExA : BoundaryRole::ExK)
                         : (threshold ? BoundaryRole::EyA : BoundaryRole::EyK));
        }
    };
    add_axis(true);
    add_axis(false);
    out.interior.clear();
    return out;
}

NullclineAnalysis nullclines(const PlanarMap& map_in, int samples) {
    if (!map_in.is_bh()) throw HypothesisError("nullclines: Beverton-Holt families only");
    const PlanarMap map = map_in.is_bh() ? map_in.as_general() : map_in;
    std::string why;
    if (!condition_h1(map, &why)) throw HypothesisError("nullclines: " + why);

    const auto ax = axis_roots(ScalarModel::sigmoid_bh(map.r1, map.delta1));
    const auto ay = axis_roots(ScalarModel::sigmoid_bh(map.r2, map.delta2));
    if (!ax.strong || !ay.strong) throw HypothesisError("nullclines: axis thresholds not found");

    NullclineAnalysis out;
    out.x_c = map.r1 * (map.delta1 - 1.0) / map.delta1;
    out.y_c = map.r2 * (map.delta2 - 1.0) / map.delta2;
    out.F1_at_xc = F1_of(map, out.x_c);
    out.F2_at_yc = F2_of(map, out.y_c);

    const double A1 = ax.A, K1 = ax.K, A2 = ay.A, K2 = ay.K;
    using Count = NullclineAnalysis::Count;
    if (out.F1_at_xc < A2 || out.F2_at_yc < A1) {
        out.predicted = Count::Zero;
    } else if ((A2 < out.F1_at_xc && out.F1_at_xc < K2 && K1 < out.F2_at_yc) ||
               (A1 < out.F2_at_yc && out.F2_at_yc < K1 && K2 < out.F1_at_xc)) {
        out.predicted = Count::Two;
    } else if (out.F1_at_xc > K2 && out.F2_at_yc > K1) {
        out.predicted = Count::Four;
    } else {
        out.predicted = Count::OutsideTheoremCases;
    }

    out.curve1.reserve(samples);
    out.curve2.reserve(samples);
    for (int i = 1; i < samples; ++i) {
        const double x = A1 + (K1 - A1) * i / samples;
        if (radicand1(map, x) > 0.0) out.curve1.push_back({x, F1_of(map, x)});
        const double y = A2 + (K2 - A2) * i / samples;
        if (radicand2(map, y) > 0.0) out.curve2.push_back({F2_of(map, y), y});
    }

    out.located = interior_equilibria(map);
    return out;
}

namespace {

// interior fixed points of a BH map via nullcline intersection along one
// coordinate; `swap` runs the scan in y instead of x
void scan_intersections(const PlanarMap& map, double A1, double K1, double A2, double K2,
                        bool swap, double tol, std::vector<State>& found, bool* ambiguous) {
    // composition G(x) = F2(F1(x)) - x, defined where F1(x) lies between the
    // other species' threshold and carrying capacity
    const auto F_first = [&](double x) { return swap ? F2_of(map, x) : F1_of(map, x); };
    const auto F_second = [&](double y) { return swap ? F1_of(map, y) : F2_of(map, y); };
    const double lo = swap ? A2 : A1, hi = swap ? K2 : K1;
    const double olo = swap ? A1 : A2, ohi = swap ? K1 : K2;

    // split (lo, hi) at the points where F_first crosses the other interval's
    // ends; inside each piece the composition is smooth
    std::vector<double> edges{lo, hi};
    const auto cross = [&](double level) {
        const auto fn = [&](double x) { return F_first(x) - level; };
        auto scan = num::bracket_scan(fn, lo + (hi - lo) * 1e-9, hi - (hi - lo) * 1e-9, 2048);
        for (const auto& br : scan.brackets) {
            auto res = num::refine_root(fn, br, 1e-13);
            if (res.converged) edges.push_back(res.root);
        }
    };
    cross(olo);
    cross(ohi);
    std::sort(edges.begin(), edges.end());

    const auto G = [&](double x) { return F_second(F_first(x)) - x; };

    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        if (!(b - a > 1e-13)) continue;
        const double mid = 0.5 * (a + b);
        const double fm = F_first(mid);
        if (!(fm > olo && fm < ohi)) continue;  // invalid piece

        const auto xs = interval_samples(a, b, 512);
        double prev_x = 0.0, prev_g = 0.0;
        bool have_prev = false;
        bool all_small = true;
        for (double x : xs) {
            const double fx = F_first(x);
            if (!(fx > olo && fx < ohi)) continue;
            const double g = G(x);
            if (!std::isfinite(g)) continue;
            if (std::abs(g) > tol) all_small = false;
            if (have_prev && prev_g != 0.0 && g != 0.0 &&
                std::signbit(prev_g) != std::signbit(g)) {
                auto res = num::refine_root(G, {prev_x, x, prev_g, g}, 1e-13);
                if (res.converged) {
                    const double xr = res.root;
                    const double yr = F_first(xr);
                    found.push_back(swap ? State{yr, xr} : State{xr, yr});
                }
            }
            prev_x = x;
            prev_g = g;
            have_prev = true;
        }
        if (all_small && have_prev && ambiguous) *ambiguous = true;
    }
}

std::vector<State> interior_points_bh(const PlanarMap& map_in, double tol, bool* ambiguous) {
    const PlanarMap map = map_in.as_general();
    std::vector<State> pts;
    if (!condition_h1(map)) return pts;
    const auto ax = axis_roots(ScalarModel::sigmoid_bh(map.r1, map.delta1));
    const auto ay = axis_roots(ScalarModel::sigmoid_bh(map.r2, map.delta2));
    if (!ax.strong || !ay.strong) return pts;

    scan_intersections(map, ax.A, ax.K, ay.A, ay.K, false, tol, pts, ambiguous);
    scan_intersections(map, ax.A, ax.K, ay.A, ay.K, true, tol, pts, ambiguous);

    std::vector<State> verified;
    for (State s : pts) {
        if (polish_fixed_point(map, s, tol) && s.x > 0.0 && s.y > 0.0) verified.push_back(s);
    }
    dedupe_points(verified);
    return verified;
}

std::vector<State> interior_points_scramble(const PlanarMap& map, double tol) {
    const State bound = map.absorbing_bound();
    const double hx = 2.0 * bound.x, hy = 2.0 * bound.y;
    const auto resid_norm = [&](State p) {
        const State t = map.step(p);
        return std::max(std::abs(t.x - p.x), std::abs(t.y - p.y));
    };
    const int n = 64;
    std::vector<double> grid(static_cast<size_t>((n + 1) * (n + 1)));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            grid[i * (n + 1) + j] = resid_norm({hx * i / n, hy * j / n});

    std::vector<State> out;
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) {
            const double v = grid[i * (n + 1) + j];
            if (v <= grid[(i - 1) * (n + 1) + j] && v <= grid[(i + 1) * (n + 1) + j] &&
                v <= grid[i * (n + 1) + j - 1] && v <= grid[i * (n + 1) + j + 1]) {
                State s{hx * i / n, hy * j / n};
                if (polish_fixed_point(map, s, tol) && s.x > 1e-8 && s.y > 1e-8)
                    out.push_back(s);
            }
        }
    }
    dedupe_points(out);
    return out;
}

}  // namespace

std::vector<PlanarFixedPoint> interior_equilibria(const PlanarMap& map, double tol,
                                                  bool* ambiguous) {
    const std::vector<State> pts = map.is_bh() ? interior_points_bh(map, tol, ambiguous)
                                               : interior_points_scramble(map, tol);
    std::vector<PlanarFixedPoint> out;
    out.reserve(pts.size());
    for (State s : pts) out.push_back(local_stability(map, s, std::max(tol, 1e-9)));
    return out;
}

MonotoneReport monotonicity_class(const PlanarMap& map_in) {
    if (!map_in.is_bh()) throw HypothesisError("monotonicity_class: Beverton-Holt families only");
    const PlanarMap map = map_in.as_general();
    MonotoneReport rep;
    rep.intra = map.delta1 * map.delta2;
    rep.inter = map.delta3 * map.delta4;
    if (rep.intra >= rep.inter) {
        rep.cls = MonotoneClass::StronglyCompetitive;
        return rep;
    }
    const double gap = rep.inter - rep.intra;
    rep.r1_bound = std::pow(rep.intra / (map.b2 * gap), 1.0 / map.delta4);
    rep.r2_bound = std::pow(rep.intra / (map.b1 * gap), 1.0 / map.delta3);
    rep.cls = (map.r1 < rep.r1_bound || map.r2 < rep.r2_bound)
                  ? MonotoneClass::ConditionallyMonotone
                  : MonotoneClass::Indeterminate;
    return rep;
}

double CriticalCurve::gamma(double x) const {
    if (!(x > x_min))
        throw std::domain_error("critical curve: x must exceed the domain threshold " +
                                std::to_string(x_min));
    const double xd4 = std::pow(x, d4);
    return std::pow(dd12 * (1.0 + b2 * xd4) / (b1 * (b2 * xd4 * (dd34 - dd12) - dd12)),
                    1.0 / d3);
}

double CriticalCurve::gamma_inv(double y) const {
    if (!(y > y_min))
        throw std::domain_error("critical curve: y must exceed the domain threshold " +
                                std::to_string(y_min));
    const double yd3 = std::pow(y, d3);
    return std::pow(dd12 * (1.0 + b1 * yd3) / (b2 * (b1 * yd3 * (dd34 - dd12) - dd12)),
                    1.0 / d4);
}

CriticalCurve critical_curve(const PlanarMap& map_in) {
    if (!map_in.is_bh()) throw HypothesisError("critical_curve: Beverton-Holt families only");
    const PlanarMap map = map_in.as_general();
    CriticalCurve c;
    c.dd12 = map.delta1 * map.delta2;
    c.dd34 = map.delta3 * map.delta4;
    if (!(c.dd12 < c.dd34))
        throw HypothesisError(
            "critical_curve: requires the inter-specific exponents to dominate "
            "(delta1*delta2 < delta3*delta4)");
    c.b1 = map.b1;
    c.b2 = map.b2;
    c.d3 = map.delta3;
    c.d4 = map.delta4;
    c.x_min = std::pow(c.dd12 / (map.b2 * (c.dd34 - c.dd12)), 1.0 / map.delta4);
    c.y_min = std::pow(c.dd12 / (map.b1 * (c.dd34 - c.dd12)), 1.0 / map.delta3);
    return c;
}

SymmetricStability symmetric_stability(const PlanarMap& map, double x_star, double tol) {
    if (map.family != PlanarFamily::SymmetricBH)
        throw std::invalid_argument("symmetric_stability: requires the symmetric family");
    const State p{x_star, x_star};
    const State t = map.step(p);
    if (std::max(std::abs(t.x - x_star), std::abs(t.y - x_star)) > tol)
        throw std::invalid_argument("symmetric_stability: point is not fixed to tolerance");
    const double delta = map.delta1, d = map.delta3, b = map.b;
    const double xd = std::pow(x_star, d);
    const double D = 1.0 + std::pow(x_star, delta) + b * xd;
    SymmetricStability out;
    out.lambda_diag = (delta + b * (delta - d) * xd) / D;
    out.lambda_transverse = (delta + b * (delta + d) * xd) / D;
    const double m1 = std::abs(out.lambda_diag);
    if (m1 < 1.0 - kBand && out.lambda_transverse < 1.0 - kBand) {
        out.verdict = Stability::Stable;
    } else if (m1 > 1.0 + kBand || out.lambda_transverse > 1.0 + kBand) {
        out.verdict = Stability::Unstable;
    } else {
        out.verdict = Stability::Marginal;
    }
    return out;
}

PlanarFixedPoint local_stability(const PlanarMap& map, State p, double tol) {
    const State t = map.step(p);
    if (std::max(std::abs(t.x - p.x), std::abs(t.y - p.y)) > tol)
        throw std::invalid_argument("local_stability: point is not fixed to tolerance");
    PlanarFixedPoint out;
    out.point = p;
    out.eigenvalues = map.jacobian(p).eigenvalues();
    out.cls = classify_eigen(out.eigenvalues);
    return out;
}

bool two_dim_strong_allee(const PlanarMap& map) {
    switch (map.family) {
        case PlanarFamily::ScrambleMating:
            return std::exp(map.r - 1.0) / (map.r + map.a) >
                   1.0 / (map.r + map.a) + 1.0 / map.b;
        case PlanarFamily::ScramblePredation: {
            const double num = map.b * map.r + map.r + map.a;
            const double upper = num * num / (4.0 * map.b * (map.a + map.r));
            return map.r < map.m && map.m < upper && map.b > 1.0 + map.a / map.r;
        }
        case PlanarFamily::SymmetricBH: {
            const auto axis = classify_allee(ScalarModel::sigmoid_bh(map.r, map.delta1));
            const auto diag = classify_allee(ScalarModel::mss(map.r, map.delta1, map.b, map.delta3));
            return axis.regime == AlleeRegime::Strong && diag.regime == AlleeRegime::Strong;
        }
        case PlanarFamily::GeneralBH:
            throw std::invalid_argument("two_dim_strong_allee: defined for symmetric systems");
    }
    return false;
}

}  // namespace popdyn
