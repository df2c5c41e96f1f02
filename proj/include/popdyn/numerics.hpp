#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

// Scalar root-finding, sign-change bookkeeping and orbit-tail utilities
// shared by the dynamics modules.

namespace popdyn::num {

// A sign-change interval: lo < hi and f_lo*f_hi <= 0. A degenerate bracket
// (lo == hi) marks an exact zero hit on the scan grid.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    bool degenerate() const { return lo == hi; }
};

struct ScanResult {
    std::vector<Bracket> brackets;
    int skipped_nonfinite = 0;  // grid cells dropped because f was not finite
};

using Fn = std::function<double(double)>;

// One bracket per sign change of f on a uniform n-cell grid over [lo, hi].
ScanResult bracket_scan(const Fn& f, double lo, double hi, int n);

// Sign changes on a geometric grid hi, hi/2, hi/4, ... down to `floor`.
// Catches roots that sit many decades below the linear grid resolution.
ScanResult bracket_scan_geometric(const Fn& f, double hi, double floor_value = 1e-290);

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Newton iteration safeguarded by the bracket; falls back to bisection
// (in log space for wide positive brackets) whenever a Newton step would
// leave the interval. Stops when |f| <= tol or the bracket collapses.
RootResult refine_root(const Fn& f, const Bracket& br, double tol, int max_iter = 200);

// Sign changes among nonzero coefficients, descending exponent order.
int descartes_bound(std::span<const double> coeffs);

// Minimal period p <= max_period with |u[i+p]-u[i]| <= tol across the tail.
std::optional<int> cycle_detect(std::span<const double> tail, double tol, int max_period);

struct LyapunovResult {
    double exponent = 0.0;
    int samples = 0;
    int skipped = 0;  // points where the derivative vanished
};

// Mean of ln|f'(u_t)| over the orbit of f after burn_in steps.
LyapunovResult lyapunov_1d(const Fn& f, const Fn& deriv, double u0, int steps, int burn_in);

}  // namespace popdyn::num
