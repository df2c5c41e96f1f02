#include "popdyn/basin.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

namespace popdyn {

namespace {

double point_dist(State a, State b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

constexpr int kConfirmSteps = 10;

}  // namespace

const char* to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::BoundaryE0: return "E0";
        case AttractorKind::BoundaryExK: return "ExK";
        case AttractorKind::BoundaryEyK: return "EyK";
        case AttractorKind::Interior: return "interior";
        case AttractorKind::Cycle: return "cycle";
        case AttractorKind::Aperiodic: return "aperiodic";
    }
    return "?";
}

const char* to_string(Region r) {
    switch (r) {
        case Region::O0: return "O0";
        case Region::Oex: return "Oex";
        case Region::Oey: return "Oey";
        case Region::Ox: return "Ox";
        case Region::Oy: return "Oy";
        case Region::OexL: return "OexL";
        case Region::OeyL: return "OeyL";
        case Region::O0L: return "O0L";
    }
    return "?";
}

const Attractor* AttractorRegistry::find(AttractorKind k) const {
    for (const auto& e : entries)
        if (e.kind == k) return &e;
    return nullptr;
}

double AttractorRegistry::distance(int id, State s) const {
    double best = std::numeric_limits<double>::infinity();
    for (const State& p : entries[id].points) best = std::min(best, point_dist(p, s));
    return best;
}

AttractorRegistry build_registry(const PlanarMap& map, const PlanarEquilibria& eq,
                                 const RegistryOptions& opt) {
    AttractorRegistry reg;
    reg.match_radius = opt.match_radius;

    const auto try_add = [&](AttractorKind kind, std::vector<State> pts) {
        for (const auto& e : reg.entries) {
            for (const State& p : pts) {
                for (const State& q : e.points) {
                    if (point_dist(p, q) <= 2.0 * reg.match_radius) {
                        reg.warnings.push_back("merged a candidate into attractor " +
                                               std::to_string(e.id) + " (" + to_string(e.kind) +
                                               "): separation below 2*match_radius");
                        return;
                    }
                }
            }
        }
        Attractor a;
        a.id = static_cast<int>(reg.entries.size());
        a.kind = kind;
        a.points = std::move(pts);
        reg.entries.push_back(std::move(a));
    };

    for (const auto& be : eq.boundary) {
        if (be.stability != Stability::Stable) continue;
        AttractorKind kind = AttractorKind::BoundaryE0;
        if (be.role == BoundaryRole::ExK) kind = AttractorKind::BoundaryExK;
        else if (be.role == BoundaryRole::EyK) kind = AttractorKind::BoundaryEyK;
        else if (be.role != BoundaryRole::E0) continue;  // stable thresholds do not occur
        try_add(kind, {be.point});
    }
    for (const auto& fp : eq.interior) {
        if (fp.cls == SpectralClass::Sink) try_add(AttractorKind::Interior, {fp.point});
    }

    // probe orbits: tails that match nothing registered reveal cycles or
    // stranger invariant sets
    const State bound = map.absorbing_bound();
    const double wx = opt.window_x > 0.0 ? opt.window_x : 2.0 * bound.x;
    const double wy = opt.window_y > 0.0 ? opt.window_y : 2.0 * bound.y;
    for (int i = 1; i <= opt.probe_grid; ++i) {
        for (int j = 1; j <= opt.probe_grid; ++j) {
            State s{wx * i / (opt.probe_grid + 1), wy * j / (opt.probe_grid + 1)};
            bool matched = false;
            int consec = 0;
            std::deque<State> tail;
            for (int t = 0; t < opt.probe_steps; ++t) {
                s = map.step(s);
                if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
                    matched = true;  // leave divergent probes alone
                    break;
                }
                bool near = false;
                for (const auto& e : reg.entries) {
                    if (reg.distance(e.id, s) <= reg.match_radius) {
                        near = true;
                        break;
                    }
                }
                consec = near ? consec + 1 : 0;
                if (consec >= kConfirmSteps) {
                    matched = true;
                    break;
                }
                tail.push_back(s);
                if (static_cast<int>(tail.size()) > opt.probe_tail) tail.pop_front();
            }
            if (matched || static_cast<int>(tail.size()) < opt.probe_tail) continue;

            // minimal period of the tail, if any
            const std::vector<State> tv(tail.begin(), tail.end());
            int period = 0;
            for (int p = 1; p <= opt.max_cycle; ++p) {
                bool ok = true;
                for (size_t k = 0; k + p < tv.size(); ++k) {
                    if (point_dist(tv[k + p], tv[k]) > 1e-7) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    period = p;
                    break;
                }
            }
            if (period == 1) {
                // converged to an unregistered fixed point; only a sink counts
                // as an attractor (saddles capture measure-zero probes, e.g.
                // exactly on an invariant diagonal)
                State p = tv.back();
                const State t = map.step(p);
                if (point_dist(t, p) <= 1e-8) {
                    const Mat2 J = map.jacobian(p);
                    if (J.spectral_radius() < 1.0 - 1e-9)
                        try_add(AttractorKind::Interior, {p});
                }
            } else if (period > 1) {
                std::vector<State> cyc(tv.end() - period, tv.end());
                // verify orbit closure
                State t = map.step(cyc.back());
                if (point_dist(t, cyc.front()) <= 1e-6) try_add(AttractorKind::Cycle, cyc);
            } else {
                // bounded, not periodic at this tolerance: keep a thinned sample
                std::vector<State> samples;
                for (size_t k = 0; k < tv.size(); k += 2) samples.push_back(tv[k]);
                try_add(AttractorKind::Aperiodic, samples);
            }
        }
    }
    return reg;
}

int classify_orbit(const PlanarMap& map, State s0, const AttractorRegistry& reg, int max_steps,
                   double tol) {
    State s = s0;
    std::vector<int> consec(reg.entries.size(), 0);
    for (int t = 0; t < max_steps; ++t) {
        s = map.step(s);
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) return -1;
        for (size_t k = 0; k < reg.entries.size(); ++k) {
            if (reg.distance(static_cast<int>(k), s) <= tol) {
                if (++consec[k] >= kConfirmSteps) return static_cast<int>(k);
            } else {
                consec[k] = 0;
            }
        }
    }
    return -1;
}

State BasinRaster::cell_center(int i, int j) const {
    return {x_lo + (x_hi - x_lo) * (i + 0.5) / nx, y_lo + (y_hi - y_lo) * (j + 0.5) / ny};
}

double BasinRaster::undetermined_fraction() const {
    size_t n = 0;
    for (int16_t v : labels)
        if (v < 0) ++n;
    return static_cast<double>(n) / static_cast<double>(labels.size());
}

std::vector<int> BasinRaster::label_set() const {
    std::vector<int> out;
    for (int16_t v : labels) {
        if (v >= 0 && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double BasinRaster::label_fraction(int id) const {
    size_t n = 0;
    for (int16_t v : labels)
        if (v == id) ++n;
    return static_cast<double>(n) / static_cast<double>(labels.size());
}

BasinRaster basin_grid(const PlanarMap& map, const AttractorRegistry& reg, double x_lo,
                       double x_hi, double y_lo, double y_hi, int nx, int ny, int max_steps,
                       int threads) {
    BasinRaster r;
    r.x_lo = x_lo;
    r.x_hi = x_hi;
    r.y_lo = y_lo;
    r.y_hi = y_hi;
    r.nx = nx;
    r.ny = ny;
    r.max_steps = max_steps;
    r.tol = reg.match_radius;
    r.labels.assign(static_cast<size_t>(nx) * ny, -1);

    const auto work = [&](int col_begin, int col_end) {
        for (int i = col_begin; i < col_end; ++i) {
            for (int j = 0; j < ny; ++j) {
                const State c = r.cell_center(i, j);
                r.labels[static_cast<size_t>(i) * ny + j] =
                    static_cast<int16_t>(classify_orbit(map, c, reg, max_steps, reg.match_radius));
            }
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        work(0, nx);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (nx + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk;
            const int e = std::min(nx, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return r;
}

int component_count(const BasinRaster& raster, int label) {
    const int nx = raster.nx, ny = raster.ny;
    std::vector<char> seen(static_cast<size_t>(nx) * ny, 0);
    int comps = 0;
    std::vector<std::pair<int, int>> stack;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (raster.label(i, j) != label || seen[static_cast<size_t>(i) * ny + j]) continue;
            ++comps;
            stack.push_back({i, j});
            seen[static_cast<size_t>(i) * ny + j] = 1;
            while (!stack.empty()) {
                auto [a, b] = stack.back();
                stack.pop_back();
                const int da[4] = {1, -1, 0, 0};
                const int db[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int na = a + da[k], nb = b + db[k];
                    if (na < 0 || na >= nx || nb < 0 || nb >= ny) continue;
                    if (raster.label(na, nb) != label) continue;
                    if (seen[static_cast<size_t>(na) * ny + nb]) continue;
                    seen[static_cast<size_t>(na) * ny + nb] = 1;
                    stack.push_back({na, nb});
                }
            }
        }
    }
    return comps;
}

bool label_touches_edge(const BasinRaster& raster, int label, Edge edge) {
    const int nx = raster.nx, ny = raster.ny;
    switch (edge) {
        case Edge::Left:
            for (int j = 0; j < ny; ++j)
                if (raster.label(0, j) == label) return true;
            return false;
        case Edge::Right:
            for (int j = 0; j < ny; ++j)
                if (raster.label(nx - 1, j) == label) return true;
            return false;
        case Edge::Bottom:
            for (int i = 0; i < nx; ++i)
                if (raster.label(i, 0) == label) return true;
            return false;
        case Edge::Top:
            for (int i = 0; i < nx; ++i)
                if (raster.label(i, ny - 1) == label) return true;
            return false;
    }
    return false;
}

// ---------------------------------------------------------------------------

RegionSpec make_region_spec(const PlanarMap& map_in, Region region) {
    if (!map_in.is_bh())
        throw HypothesisError("region spec: Beverton-Holt families only");
    const PlanarMap map = map_in.as_general();
    std::string why;
    if (!condition_h1(map, &why)) throw HypothesisError("region spec: " + why);

    RegionSpec spec;
    spec.region = region;
    spec.r1 = map.r1;
    spec.r2 = map.r2;
    spec.b1 = map.b1;
    spec.b2 = map.b2;
    spec.delta1 = map.delta1;
    spec.delta2 = map.delta2;
    spec.delta3 = map.delta3;
    spec.delta4 = map.delta4;

    const auto ax = find_equilibria(ScalarModel::sigmoid_bh(map.r1, map.delta1));
    const auto ay = find_equilibria(ScalarModel::sigmoid_bh(map.r2, map.delta2));
    const ScalarRoot* A1 = ax.find_role(RootRole::AlleeThreshold);
    const ScalarRoot* K1 = ax.find_role(RootRole::CarryingCapacity);
    const ScalarRoot* A2 = ay.find_role(RootRole::AlleeThreshold);
    const ScalarRoot* K2 = ay.find_role(RootRole::CarryingCapacity);
    if (!A1 || !K1 || !A2 || !K2) throw HypothesisError("region spec: axis thresholds not found");
    spec.A1 = A1->value;
    spec.K1 = K1->value;
    spec.A2 = A2->value;
    spec.K2 = K2->value;

    // competition-inflated carrying constants: each species sees the other
    // pinned at its threshold
    spec.a1 = 1.0 + map.b1 * std::pow(spec.A2, map.delta3);
    spec.a2 = 1.0 + map.b2 * std::pow(spec.A1, map.delta4);

    const auto scaled_threshold = [](double r, double a, double delta,
                                     bool& ok) -> double {
        const double rc = std::pow(a, 1.0 / delta) * delta *
                          std::pow(delta - 1.0, 1.0 / delta - 1.0);
        if (!(r > rc)) {
            ok = false;
            return 0.0;
        }
        const auto eq = find_equilibria(ScalarModel::scaled_bh(r, a, delta));
        const ScalarRoot* A = eq.find_role(RootRole::AlleeThreshold);
        ok = A != nullptr;
        return A ? A->value : 0.0;
    };
    spec.h2 = true;
    spec.A1a = scaled_threshold(map.r1, spec.a1, map.delta1, spec.h2);
    spec.h3 = true;
    spec.A2a = scaled_threshold(map.r2, spec.a2, map.delta2, spec.h3);

    switch (region) {
        case Region::O0:
        case Region::Oex:
        case Region::Oey:
            break;
        case Region::Ox:
            if (!spec.h2) throw HypothesisError("region Ox requires H2 (r1 above the inflated critical rate)");
            break;
        case Region::Oy:
            if (!spec.h3) throw HypothesisError("region Oy requires H3 (r2 above the inflated critical rate)");
            break;
        case Region::OexL:
            if (!(map.delta3 > map.delta1))
                throw HypothesisError("region OexL requires delta3 > delta1");
            break;
        case Region::OeyL:
            if (!(map.delta4 > map.delta2))
                throw HypothesisError("region OeyL requires delta4 > delta2");
            break;
        case Region::O0L:
            if (!(map.delta3 > map.delta1 && map.delta4 > map.delta2))
                throw HypothesisError("region O0L requires delta3 > delta1 and delta4 > delta2");
            break;
    }
    return spec;
}

namespace {

// Ray threshold for extinction of x along y = k x: beyond it the inter-
// specific term alone squeezes the next x below the threshold, i.e.
// r1/(1 + b1 k^d3 x^(d3-d1)) < A1.
double ray_threshold_x(const RegionSpec& s, double k) {
    return std::pow((s.r1 - s.A1) / (s.A1 * s.b1 * std::pow(k, s.delta3)),
                    1.0 / (s.delta3 - s.delta1));
}

double ray_threshold_y(const RegionSpec& s, double k) {
    return std::pow((s.r2 - s.A2) / (s.A2 * s.b2 * std::pow(k, s.delta4)),
                    1.0 / (s.delta4 - s.delta2));
}

bool in_oex_l(const RegionSpec& s, State p) {
    if (!(p.x > 0.0 && p.y > 0.0)) return false;
    return p.x > ray_threshold_x(s, p.y / p.x);
}

bool in_oey_l(const RegionSpec& s, State p) {
    if (!(p.x > 0.0 && p.y > 0.0)) return false;
    return p.y > ray_threshold_y(s, p.x / p.y);
}

}  // namespace

bool region_contains(const RegionSpec& spec, State s) {
    if (s.x < 0.0 || s.y < 0.0) return false;
    switch (spec.region) {
        case Region::O0: return s.x <= spec.A1 && s.y <= spec.A2;
        case Region::Oex: return s.x < spec.A1;
        case Region::Oey: return s.y < spec.A2;
        case Region::Ox: return s.x > spec.A1a && s.y < spec.A2;
        case Region::Oy: return s.x < spec.A1 && s.y > spec.A2a;
        case Region::OexL: return in_oex_l(spec, s);
        case Region::OeyL: return in_oey_l(spec, s);
        case Region::O0L: return in_oex_l(spec, s) && in_oey_l(spec, s);
    }
    return false;
}

State sample_region(const RegionSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double xcap = 2.0 * spec.r1;
    const double ycap = 2.0 * spec.r2;
    const auto ray_k = [&] {
        // log-uniform slope over four decades
        return std::exp(std::log(1e-2) + unit(rng) * (std::log(1e2) - std::log(1e-2)));
    };
    switch (spec.region) {
        case Region::O0: return {unit(rng) * spec.A1, unit(rng) * spec.A2};
        case Region::Oex: return {unit(rng) * spec.A1, unit(rng) * ycap};
        case Region::Oey: return {unit(rng) * xcap, unit(rng) * spec.A2};
        case Region::Ox:
            return {spec.A1a + (1e-9 + unit(rng)) * (xcap - spec.A1a), unit(rng) * spec.A2};
        case Region::Oy:
            return {unit(rng) * spec.A1, spec.A2a + (1e-9 + unit(rng)) * (ycap - spec.A2a)};
        case Region::OexL: {
            const double k = ray_k();
            const double x = ray_threshold_x(spec, k) * (1.0 + 1e-6 + 2.0 * unit(rng));
            return {x, k * x};
        }
        case Region::OeyL: {
            const double k = ray_k();
            const double y = ray_threshold_y(spec, k) * (1.0 + 1e-6 + 2.0 * unit(rng));
            return {k * y, y};
        }
        case Region::O0L: {
            const double k = ray_k();
            const double x0 = std::max(ray_threshold_x(spec, k), ray_threshold_y(spec, 1.0 / k) / k);
            const double x = x0 * (1.0 + 1e-6 + 2.0 * unit(rng));
            return {x, k * x};
        }
    }
    return {};
}

ContainmentReport verify_containment(const PlanarMap& map, const RegionSpec& spec, int n_samples,
                                     int max_steps, double tol, std::mt19937_64& rng) {
    ContainmentReport rep;
    rep.region = spec.region;
    rep.samples = n_samples;

    enum class Target { Origin, XDies, YDies, ExK, EyK };
    Target target = Target::Origin;
    switch (spec.region) {
        case Region::O0:
        case Region::O0L: target = Target::Origin; break;
        case Region::Oex:
        case Region::OexL: target = Target::XDies; break;
        case Region::Oey:
        case Region::OeyL: target = Target::YDies; break;
        case Region::Ox: target = Target::ExK; break;
        case Region::Oy: target = Target::EyK; break;
    }

    for (int i = 0; i < n_samples; ++i) {
        const State s0 = sample_region(spec, rng);
        State s = s0;
        bool ok = false;
        for (int t = 0; t < max_steps && !ok; ++t) {
            s = map.step(s);
            switch (target) {
                case Target::Origin: ok = std::hypot(s.x, s.y) < tol; break;
                case Target::XDies: ok = s.x < tol; break;
                case Target::YDies: ok = s.y < tol; break;
                case Target::ExK: ok = std::hypot(s.x - spec.K1, s.y) < tol; break;
                case Target::EyK: ok = std::hypot(s.x, s.y - spec.K2) < tol; break;
            }
        }
        if (!ok) {
            rep.violation_count++;
            if (rep.violations.size() < 32) rep.violations.push_back(s0);
        }
    }
    return rep;
}

}  // namespace popdyn
