#include "popdyn/scalar_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace popdyn {

namespace {

constexpr double kHyperbolicBand = 1e-9;

Stability stability_from_deriv(double d) {
    const double mag = std::abs(d);
    if (std::abs(mag - 1.0) <= kHyperbolicBand) return Stability::Marginal;
    return mag < 1.0 ? Stability::Stable : Stability::Unstable;
}

}  // namespace

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

const char* to_string(RootRole r) {
    switch (r) {
        case RootRole::Origin: return "origin";
        case RootRole::AlleeThreshold: return "allee_threshold";
        case RootRole::CarryingCapacity: return "carrying_capacity";
        case RootRole::Other: return "other";
    }
    return "?";
}

const char* to_string(AlleeRegime r) {
    switch (r) {
        case AlleeRegime::None: return "none";
        case AlleeRegime::Weak: return "weak";
        case AlleeRegime::Strong: return "strong";
    }
    return "?";
}

const ScalarRoot* ScalarEquilibria::find_role(RootRole role) const {
    for (const auto& r : roots)
        if (r.role == role) return &r;
    return nullptr;
}

int ScalarEquilibria::positive_count() const {
    int n = 0;
    for (const auto& r : roots)
        if (r.value > 0.0) ++n;
    return n;
}

ScalarEquilibria find_equilibria(const ScalarModel& model, double u_max, double tol,
                                 int n_subdivisions) {
    if (u_max <= 0.0) u_max = model.default_u_max();
    ScalarEquilibria out;

    const auto g = [&](double u) { return model.step(u) - u; };

    // linear grid over (0, u_max] plus a geometric sweep below the first cell
    const double first_cell = u_max / n_subdivisions;
    auto scan = num::bracket_scan(g, first_cell, u_max, n_subdivisions - 1);
    auto geo = num::bracket_scan_geometric(g, first_cell);
    scan.brackets.insert(scan.brackets.end(), geo.brackets.begin(), geo.brackets.end());
    out.possibly_missed = scan.skipped_nonfinite > 0 || geo.skipped_nonfinite > 0;

    std::vector<double> roots;
    for (const auto& br : scan.brackets) {
        auto res = num::refine_root(g, br, tol);
        if (!res.converged) {
            out.possibly_missed = true;
            continue;
        }
        if (res.root <= 0.0) continue;
        if (std::abs(model.step(res.root) - res.root) > tol) {
            out.possibly_missed = true;
            continue;
        }
        roots.push_back(res.root);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) {
                                return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x));
                            }),
                roots.end());

    // origin is always fixed
    {
        ScalarRoot origin;
        origin.value = 0.0;
        origin.role = RootRole::Origin;
        origin.deriv = model.deriv(0.0);
        origin.stability = std::isfinite(origin.deriv) ? stability_from_deriv(origin.deriv)
                                                       : Stability::Unstable;
        out.roots.push_back(origin);
    }
    for (double u : roots) {
        ScalarRoot rt;
        rt.value = u;
        rt.deriv = model.deriv(u);
        rt.stability = stability_from_deriv(rt.deriv);
        rt.role = RootRole::Other;
        out.roots.push_back(rt);
    }

    // roles: the Allee threshold is the smallest repelling positive root
    // backed by a strictly larger stable root; the carrying capacity is the
    // largest stable positive root
    int k_idx = -1;
    for (int i = static_cast<int>(out.roots.size()) - 1; i >= 1; --i) {
        if (out.roots[i].stability == Stability::Stable) {
            k_idx = i;
            break;
        }
    }
    if (k_idx > 0) {
        out.roots[k_idx].role = RootRole::CarryingCapacity;
        for (int i = 1; i < k_idx; ++i) {
            if (out.roots[i].stability == Stability::Unstable) {
                out.roots[i].role = RootRole::AlleeThreshold;
                break;
            }
        }
    }
    return out;
}

AlleeClassification classify_allee(const ScalarModel& model, double u_max, double tol) {
    AlleeClassification out;
    out.r_crit = model.critical_r();

    const auto eq = find_equilibria(model, u_max, tol);
    const int positive = eq.positive_count();

    const double origin_deriv = model.deriv(0.0);
    const bool origin_stable = std::isfinite(origin_deriv) && std::abs(origin_deriv) < 1.0;

    // Condition A1 tested on a fixed grid near 0; a per-capita rate that
    // blows up at 0 also clears the low-density bar (no finite ceiling to
    // rise toward)
    const double first_pos = positive > 0 ? eq.roots[1].value
                                          : (u_max > 0 ? u_max : model.default_u_max());
    bool a1 = true;
    const double h0 = model.percap_at_zero();
    if (std::isfinite(h0)) {
        const int n = 64;
        const double hi = 0.1 * first_pos;
        for (int i = 1; i <= n; ++i) {
            const double u = hi * i / (n + 1);
            if (!(model.percap_deriv(u) > 0.0)) {
                a1 = false;
                break;
            }
        }
    }

    if (a1 && origin_stable && positive >= 2) {
        out.regime = AlleeRegime::Strong;
    } else if (a1 && !origin_stable && positive == 1) {
        out.regime = AlleeRegime::Weak;
    } else {
        out.regime = AlleeRegime::None;
    }
    return out;
}

AlleeRegime ricker_regime(double r, double m, double b) {
    if (r < m && m < r * (1.0 + b) * (1.0 + b) / (4.0 * b) && b > 1.0) return AlleeRegime::Strong;
    if (b * m > r && r > m) return AlleeRegime::Weak;
    return AlleeRegime::None;
}

Trajectory simulate(const ScalarModel& model, double u0, int steps) {
    if (!(u0 >= 0.0) || !std::isfinite(u0)) throw std::domain_error("simulate: u0 must be finite and >= 0");
    if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    Trajectory out;
    out.values.reserve(steps + 1);
    out.values.push_back(u0);
    double u = u0;
    for (int t = 0; t < steps; ++t) {
        u = model.step(u);
        if (!std::isfinite(u) || u > 1e300) {
            out.diverged = true;
            break;
        }
        out.values.push_back(u);
    }
    return out;
}

AsymptoticClass asymptotic_class(std::span<const double> trajectory, const ScalarEquilibria& eq,
                                 double tol, int max_period) {
    AsymptoticClass out;
    const int n = static_cast<int>(trajectory.size());
    if (max_period < 1 || n < 4 * max_period) return out;  // Undetermined

    const int tail_len = std::min(n, std::max(4 * max_period, n / 4));
    auto tail = trajectory.subspan(n - tail_len);

    for (double v : tail) {
        if (!std::isfinite(v)) return out;  // diverged: Undetermined
    }

    for (int i = 0; i < static_cast<int>(eq.roots.size()); ++i) {
        bool all = true;
        for (double v : tail) {
            if (std::abs(v - eq.roots[i].value) > tol) {
                all = false;
                break;
            }
        }
        if (all) {
            out.kind = AsymptoticClass::Kind::FixedPoint;
            out.index = i;
            return out;
        }
    }

    if (auto p = num::cycle_detect(tail, tol, max_period)) {
        out.kind = AsymptoticClass::Kind::Cycle;
        out.period = *p;
        return out;
    }

    out.kind = AsymptoticClass::Kind::Aperiodic;
    return out;
}

num::LyapunovResult lyapunov(const ScalarModel& model, double u0, int steps, int burn_in) {
    return num::lyapunov_1d([&](double u) { return model.step(u); },
                            [&](double u) { return model.deriv(u); }, u0, steps, burn_in);
}

}  // namespace popdyn
