#include "popdyn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace popdyn::num {

ScanResult bracket_scan(const Fn& f, double lo, double hi, int n) {
    if (!(lo < hi)) throw std::invalid_argument("bracket_scan: lo must be < hi");
    if (n < 2) throw std::invalid_argument("bracket_scan: need at least 2 subdivisions");
    ScanResult out;
    const double dx = (hi - lo) / n;
    double xp = lo;
    double fp = f(xp);
    bool prev_ok = std::isfinite(fp);
    if (!prev_ok) out.skipped_nonfinite++;
    if (prev_ok && fp == 0.0) out.brackets.push_back({xp, xp, 0.0, 0.0});
    for (int i = 1; i <= n; ++i) {
        const double x = (i == n) ? hi : lo + i * dx;
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            out.skipped_nonfinite++;
            prev_ok = false;
            xp = x;
            continue;
        }
        if (fx == 0.0) {
            out.brackets.push_back({x, x, 0.0, 0.0});
        } else if (prev_ok && fp != 0.0 && std::signbit(fx) != std::signbit(fp)) {
            out.brackets.push_back({xp, x, fp, fx});
        }
        xp = x;
        fp = fx;
        prev_ok = true;
    }
    return out;
}

ScanResult bracket_scan_geometric(const Fn& f, double hi, double floor_value) {
    if (!(hi > 0.0) || !(floor_value > 0.0) || !(floor_value < hi))
        throw std::invalid_argument("bracket_scan_geometric: need 0 < floor < hi");
    ScanResult out;
    double xp = hi;
    double fp = f(xp);
    bool prev_ok = std::isfinite(fp);
    if (!prev_ok) out.skipped_nonfinite++;
    for (double x = hi * 0.5; x > floor_value; x *= 0.5) {
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            out.skipped_nonfinite++;
            prev_ok = false;
            xp = x;
            continue;
        }
        if (fx == 0.0) {
            out.brackets.push_back({x, x, 0.0, 0.0});
        } else if (prev_ok && fp != 0.0 && std::signbit(fx) != std::signbit(fp)) {
            out.brackets.push_back({x, xp, fx, fp});
        }
        xp = x;
        fp = fx;
        prev_ok = true;
    }
    return out;
}

RootResult refine_root(const Fn& f, const Bracket& br, double tol, int max_iter) {
    RootResult res;
    if (br.degenerate()) {
        res.root = br.lo;
        res.f_root = 0.0;
        res.converged = true;
        return res;
    }
    double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
    if (flo == 0.0) return {lo, 0.0, true, 0};
    if (fhi == 0.0) return {hi, 0.0, true, 0};
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::invalid_argument("refine_root: invalid bracket (no sign change)");

    // wide positive brackets (from the geometric scan) bisect in log space so
    // tiny roots keep relative accuracy
    const bool logspace = lo > 0.0 && hi / lo > 4.0;
    double x = logspace ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    double fx = f(x);

    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (std::isfinite(fx)) {
            if (std::abs(fx) <= tol) {
                res.root = x;
                res.f_root = fx;
                res.converged = true;
                return res;
            }
            if (std::signbit(fx) == std::signbit(flo)) {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
        } else {
            // shrink toward the finite side
            hi = x;
        }
        const double width = hi - lo;
        if (logspace) {
            if (hi <= lo * (1.0 + 4e-16)) break;
        } else if (width <= tol || width <= 1e-15 * std::max(1.0, std::abs(lo))) {
            break;
        }

        // Newton candidate from the current point; bisect when it escapes.
        // Log-space brackets span decades, where a fixed-step difference
        // quotient is meaningless, so they bisect only.
        double cand = std::numeric_limits<double>::quiet_NaN();
        if (!logspace && std::isfinite(fx)) {
            // difference step scaled to the bracket so tiny-root brackets
            // never probe outside the caller's domain
            const double h = 1e-7 * std::max(std::abs(x), hi - lo);
            const double d = (f(x + h) - f(x - h)) / (2.0 * h);
            if (std::isfinite(d) && d != 0.0) cand = x - fx / d;
        }
        if (!(cand > lo && cand < hi))
            cand = logspace ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        x = cand;
        fx = f(x);
    }
    // pick the endpoint with the smaller residual
    res.root = std::abs(flo) < std::abs(fhi) ? lo : hi;
    res.f_root = std::abs(flo) < std::abs(fhi) ? flo : fhi;
    res.converged = std::abs(res.f_root) <= tol || (hi - lo) <= tol ||
                    (logspace && hi <= lo * (1.0 + 1e-14));
    return res;
}

int descartes_bound(std::span<const double> coeffs) {
    int changes = 0;
    int prev = 0;
    for (double c : coeffs) {
        if (c == 0.0) continue;
        const int s = c > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

std::optional<int> cycle_detect(std::span<const double> tail, double tol, int max_period) {
    if (max_period < 1 || static_cast<int>(tail.size()) < 4 * max_period) return std::nullopt;
    const int n = static_cast<int>(tail.size());
    for (int p = 1; p <= max_period; ++p) {
        bool ok = true;
        for (int i = 0; i + p < n; ++i) {
            if (std::abs(tail[i + p] - tail[i]) > tol) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    return std::nullopt;
}

LyapunovResult lyapunov_1d(const Fn& f, const Fn& deriv, double u0, int steps, int burn_in) {
    if (burn_in < 0 || steps <= burn_in)
        throw std::invalid_argument("lyapunov_1d: need steps > burn_in >= 0");
    LyapunovResult out;
    double u = u0;
    double acc = 0.0;
    for (int t = 0; t < steps; ++t) {
        if (t >= burn_in) {
            const double d = std::abs(deriv(u));
            if (d == 0.0 || !std::isfinite(d)) {
                out.skipped++;
            } else {
                acc += std::log(d);
                out.samples++;
            }
        }
        u = f(u);
    }
    out.exponent = out.samples > 0 ? acc / out.samples : 0.0;
    return out;
}

}  // namespace popdyn::num
