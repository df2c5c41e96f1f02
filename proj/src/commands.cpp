#include "popdyn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "popdyn/basin.hpp"
#include "popdyn/io.hpp"
#include "popdyn/planar_analysis.hpp"
#include "popdyn/scalar_analysis.hpp"
#include "popdyn/version.hpp"

namespace popdyn {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- model keys

void check_keys(const Scenario& sc, const std::string& section,
                const std::set<std::string>& allowed) {
    for (const auto& k : sc.keys(section)) {
        if (!allowed.count(k))
            throw ScenarioError("scenario: unknown key '" + k + "' in section [" + section + "]");
    }
}

bool is_scalar_family(const std::string& fam) {
    return fam == "sigmoid_bh" || fam == "scaled_bh" || fam == "elaydi_sacker" ||
           fam == "ricker_allee" || fam == "mss";
}

ScalarModel scalar_from_scenario(const Scenario& sc) {
    const std::string fam = sc.get("model", "family");
    const auto d = [&](const char* k) { return sc.get_double("model", k); };
    if (fam == "sigmoid_bh") {
        check_keys(sc, "model", {"family", "r", "delta"});
        return ScalarModel::sigmoid_bh(d("r"), d("delta"));
    }
    if (fam == "scaled_bh") {
        check_keys(sc, "model", {"family", "r", "a", "delta"});
        return ScalarModel::scaled_bh(d("r"), d("a"), d("delta"));
    }
    if (fam == "elaydi_sacker") {
        check_keys(sc, "model", {"family", "d", "e", "b", "c"});
        return ScalarModel::elaydi_sacker(d("d"), d("e"), d("b"), d("c"));
    }
    if (fam == "ricker_allee") {
        check_keys(sc, "model", {"family", "r", "m", "b"});
        return ScalarModel::ricker_allee(d("r"), d("m"), d("b"));
    }
    if (fam == "mss") {
        check_keys(sc, "model", {"family", "r", "delta", "b", "d"});
        return ScalarModel::mss(d("r"), d("delta"), d("b"), d("d"));
    }
    throw ScenarioError("scenario: unknown scalar family '" + fam + "'");
}

PlanarMap planar_from_scenario(const Scenario& sc) {
    const std::string fam = sc.get("model", "family");
    const auto d = [&](const char* k) { return sc.get_double("model", k); };
    if (fam == "general_bh") {
        check_keys(sc, "model",
                   {"family", "r1", "r2", "b1", "b2", "delta1", "delta2", "delta3", "delta4"});
        return PlanarMap::general_bh(d("r1"), d("r2"), d("b1"), d("b2"), d("delta1"), d("delta2"),
                                     d("delta3"), d("delta4"));
    }
    if (fam == "symmetric_bh") {
        check_keys(sc, "model", {"family", "r", "b", "delta", "d"});
        return PlanarMap::symmetric_bh(d("r"), d("b"), d("delta"), d("d"));
    }
    if (fam == "scramble_mating") {
        check_keys(sc, "model", {"family", "r", "a", "b"});
        return PlanarMap::scramble_mating(d("r"), d("a"), d("b"));
    }
    if (fam == "scramble_predation") {
        check_keys(sc, "model", {"family", "r", "a", "m", "b"});
        return PlanarMap::scramble_predation(d("r"), d("a"), d("m"), d("b"));
    }
    throw ScenarioError("scenario: unknown planar family '" + fam + "'");
}

std::string out_path(const std::string& out_dir, const Scenario& sc, const char* suffix) {
    const std::string prefix = sc.get_or("command", "out", sc.get("command", "name"));
    return out_dir + "/" + prefix + suffix;
}

uint64_t scenario_seed(const Scenario& sc, std::optional<uint64_t> override_seed) {
    if (override_seed) return *override_seed;
    return static_cast<uint64_t>(sc.get_double_or("command", "seed", 42));
}

// -------------------------------------------------------------- random draws

struct DrawPolicy {
    // Condition-H1 Beverton-Holt map with uniformly drawn exponents and
    // log-uniform competition strengths
    static PlanarMap h1_map(std::mt19937_64& rng, bool monotone, bool fold_regions) {
        std::uniform_real_distribution<double> intra(1.3, 3.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double d1 = intra(rng), d2 = intra(rng);
        double d3, d4;
        if (monotone) {
            // keep the intra-specific product dominant
            const double cap = std::sqrt(d1 * d2);
            d3 = 0.5 + unit(rng) * (cap - 0.5);
            d4 = 0.5 + unit(rng) * (cap - 0.5);
        } else if (fold_regions) {
            // ray regions need the inter-specific exponents to dominate
            d3 = d1 * (1.2 + 1.3 * unit(rng));
            d4 = d2 * (1.2 + 1.3 * unit(rng));
        } else {
            std::uniform_real_distribution<double> inter(0.6, 5.0);
            d3 = inter(rng);
            d4 = inter(rng);
        }
        const auto logu = [&](double lo, double hi) {
            return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
        };
        const double b1 = logu(0.01, 2.0), b2 = logu(0.01, 2.0);
        const auto rcrit = [](double dl) { return dl * std::pow(dl - 1.0, 1.0 / dl - 1.0); };
        const double r1 = rcrit(d1) * (1.25 + 0.95 * unit(rng));
        const double r2 = rcrit(d2) * (1.25 + 0.95 * unit(rng));
        return PlanarMap::general_bh(r1, r2, b1, b2, d1, d2, d3, d4);
    }
};

std::vector<State> all_fixed_points(const PlanarMap& map) {
    std::vector<State> pts;
    const auto eq = boundary_equilibria(map);
    for (const auto& b : eq.boundary) pts.push_back(b.point);
    for (const auto& p : interior_equilibria(map)) pts.push_back(p.point);
    return pts;
}

bool orbit_reaches_fixed_point(const PlanarMap& map, State s0, const std::vector<State>& pts,
                               int max_steps, double tol) {
    State s = s0;
    int consec = 0;
    for (int t = 0; t < max_steps; ++t) {
        s = map.step(s);
        bool near = false;
        for (const State& p : pts) {
            if (std::max(std::abs(s.x - p.x), std::abs(s.y - p.y)) <= tol) {
                near = true;
                break;
            }
        }
        consec = near ? consec + 1 : 0;
        if (consec >= 10) return true;
    }
    // stationary to machine precision counts: the orbit sits on a fixed
    // point the census may have missed
    const State t = map.step(s);
    return std::max(std::abs(t.x - s.x), std::abs(t.y - s.y)) <= 1e-12;
}

json map_record(const PlanarMap& map) {
    json j;
    for (const auto& [k, v] : map.to_record()) j[k] = v;
    return j;
}

// ------------------------------------------------------------- verify suites

json suite_monotone_convergence(int draws, int orbits, int steps, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    json violations = json::array();
    int total = 0;
    for (int d = 0; d < draws; ++d) {
        const PlanarMap map = DrawPolicy::h1_map(rng, /*monotone=*/true, false);
        const auto pts = all_fixed_points(map);
        for (int k = 0; k < orbits; ++k) {
            const State s0{unit(rng) * 1.2 * map.r1, unit(rng) * 1.2 * map.r2};
            ++total;
            if (!orbit_reaches_fixed_point(map, s0, pts, steps, 1e-6)) {
                json v;
                v["map"] = map_record(map);
                v["x0"] = s0.x;
                v["y0"] = s0.y;
                violations.push_back(v);
            }
        }
    }
    json out;
    out["suite"] = "monotone_convergence";
    out["draws"] = draws;
    out["orbits_per_draw"] = orbits;
    out["max_steps"] = steps;
    out["samples"] = total;
    out["violations"] = violations.size();
    out["violating_cases"] = violations;
    out["passed"] = violations.empty();
    return out;
}

json containment_for_maps(const std::vector<PlanarMap>& maps, const std::vector<Region>& regions,
                          int points, int steps, std::mt19937_64& rng, const char* suite_name) {
    json per_map = json::array();
    int total_violations = 0;
    int total_samples = 0;
    for (const auto& map : maps) {
        json jm;
        jm["map"] = map_record(map);
        json jr = json::object();
        for (Region region : regions) {
            RegionSpec spec;
            try {
                spec = make_region_spec(map, region);
            } catch (const HypothesisError&) {
                jr[to_string(region)] = "not_applicable";
                continue;
            }
            const auto rep = verify_containment(map, spec, points, steps, 1e-6, rng);
            total_samples += rep.samples;
            total_violations += rep.violation_count;
            json jv;
            jv["samples"] = rep.samples;
            jv["violations"] = rep.violation_count;
            jr[to_string(region)] = jv;
        }
        jm["regions"] = jr;
        per_map.push_back(jm);
    }
    json out;
    out["suite"] = suite_name;
    out["maps"] = per_map;
    out["samples"] = total_samples;
    out["violations"] = total_violations;
    out["passed"] = total_violations == 0;
    return out;
}

json suite_extinction_regions(const std::optional<PlanarMap>& base, int extra_draws, int points,
                              int steps, uint64_t seed, bool fold) {
    std::mt19937_64 rng(seed);
    std::vector<PlanarMap> maps;
    if (base) maps.push_back(*base);
    for (int i = 0; i < extra_draws; ++i)
        maps.push_back(DrawPolicy::h1_map(rng, false, /*fold_regions=*/fold));
    const std::vector<Region> regions =
        fold ? std::vector<Region>{Region::OexL, Region::OeyL, Region::O0L}
             : std::vector<Region>{Region::O0, Region::Oex, Region::Oey, Region::Ox, Region::Oy};
    return containment_for_maps(maps, regions, points, steps, rng,
                                fold ? "fold_extinction_regions" : "extinction_regions");
}

json suite_interior_count(int draws, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    json cases = json::array();
    int mismatches = 0;
    int found = 0;
    int attempts = 0;
    const int max_attempts = 400 * std::max(1, draws);
    while (found < draws && attempts < max_attempts) {
        ++attempts;
        std::uniform_real_distribution<double> intra(1.5, 2.5);
        std::uniform_real_distribution<double> inter(1.5, 5.0);
        const double d1 = intra(rng), d2 = intra(rng), d3 = inter(rng), d4 = inter(rng);
        const auto logu = [&](double lo, double hi) {
            return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
        };
        const double b1 = logu(1e-4, 1e2), b2 = logu(1e-4, 1e2);
        const auto rcrit = [](double dl) { return dl * std::pow(dl - 1.0, 1.0 / dl - 1.0); };
        const double r1 = rcrit(d1) * (1.3 + 0.9 * unit(rng));
        const double r2 = rcrit(d2) * (1.3 + 0.9 * unit(rng));
        const PlanarMap map = PlanarMap::general_bh(r1, r2, b1, b2, d1, d2, d3, d4);
        NullclineAnalysis nc;
        try {
            nc = nullclines(map, 64);
        } catch (const HypothesisError&) {
            continue;
        }
        int predicted = -1;
        switch (nc.predicted) {
            case NullclineAnalysis::Count::Zero: predicted = 0; break;
            case NullclineAnalysis::Count::Two: predicted = 2; break;
            case NullclineAnalysis::Count::Four: predicted = 4; break;
            case NullclineAnalysis::Count::OutsideTheoremCases: continue;
        }
        ++found;
        const int located = static_cast<int>(nc.located.size());
        if (located != predicted) ++mismatches;
        json c;
        c["map"] = map_record(map);
        c["predicted"] = predicted;
        c["located"] = located;
        cases.push_back(c);
    }
    json out;
    out["suite"] = "interior_count";
    out["requested_draws"] = draws;
    out["condition_satisfying_draws"] = found;
    out["attempts"] = attempts;
    out["cases"] = cases;
    out["violations"] = mismatches;
    out["passed"] = mismatches == 0 && found == draws;
    return out;
}

json suite_symmetric_spectrum(int draws, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    int violations = 0;
    json bad = json::array();
    for (int i = 0; i < draws; ++i) {
        const double delta = 1.35 + 1.15 * unit(rng);
        const double d = delta + 0.5 + 3.0 * unit(rng);
        const double b = std::exp(std::log(0.02) + unit(rng) * std::log(2.0 / 0.02));
        // the critical rate depends on delta, d, b only; r above it
        // guarantees the symmetric pair of fixed points
        const double rc = *ScalarModel::mss(1.0, delta, b, d).critical_r();
        const double r = rc * (1.05 + 0.75 * unit(rng));
        const PlanarMap map = PlanarMap::symmetric_bh(r, b, delta, d);
        const auto eq = find_equilibria(ScalarModel::mss(r, delta, b, d));
        for (const auto& rt : eq.roots) {
            if (!(rt.value > 0.0)) continue;
            ++checked;
            const auto ss = symmetric_stability(map, rt.value, 1e-8);
            const auto ev = map.jacobian_fd({rt.value, rt.value}).eigenvalues();
            const double lo = std::min(ev[0].real(), ev[1].real());
            const double hi = std::max(ev[0].real(), ev[1].real());
            const double fl = std::min(ss.lambda_diag, ss.lambda_transverse);
            const double fh = std::max(ss.lambda_diag, ss.lambda_transverse);
            const bool match = std::abs(lo - fl) <= 1e-8 && std::abs(hi - fh) <= 1e-8;
            const bool transverse_positive = ss.lambda_transverse > 0.0;
            if (!match || !transverse_positive) {
                ++violations;
                json v;
                v["map"] = map_record(map);
                v["x_star"] = rt.value;
                v["formula"] = {ss.lambda_diag, ss.lambda_transverse};
                v["numeric"] = {lo, hi};
                bad.push_back(v);
            }
        }
    }
    json out;
    out["suite"] = "symmetric_spectrum";
    out["draws"] = draws;
    out["points_checked"] = checked;
    out["violations"] = violations;
    out["violating_cases"] = bad;
    out["passed"] = violations == 0;
    return out;
}

// ------------------------------------------------------------------ commands

CommandResult cmd_equilibria(const Scenario& sc, const std::string& out_dir) {
    check_keys(sc, "command", {"name", "out", "u_max", "tol", "seed"});
    const double tol = sc.get_double_or("command", "tol", 1e-10);
    const std::string echo = serialize_scenario(sc);
    std::ostringstream msg;
    const std::string fam = sc.get("model", "family");
    if (is_scalar_family(fam)) {
        const ScalarModel model = scalar_from_scenario(sc);
        const double u_max = sc.get_double_or("command", "u_max", 0.0);
        const auto eq = find_equilibria(model, u_max, tol);
        const auto regime = classify_allee(model, u_max, tol);
        io::write_scalar_equilibria_csv(out_path(out_dir, sc, ".csv"), eq, echo);
        msg << eq.roots.size() << " equilibria; regime = " << to_string(regime.regime);
        if (regime.r_crit) msg << "; r_crit = " << io::format17(*regime.r_crit);
        return {0, msg.str()};
    }
    const PlanarMap map = planar_from_scenario(sc);
    PlanarEquilibria eq = boundary_equilibria(map);
    eq.interior = interior_equilibria(map, tol, &eq.ambiguous);
    io::write_planar_equilibria_csv(out_path(out_dir, sc, ".csv"), eq, echo);
    msg << eq.boundary.size() << " boundary + " << eq.interior.size() << " interior equilibria";
    if (!eq.h1) return {2, "hypothesis violation: " + eq.h1_note + " (" + msg.str() + ")"};
    return {0, msg.str()};
}

CommandResult cmd_nullclines(const Scenario& sc, const std::string& out_dir) {
    check_keys(sc, "command", {"name", "out", "samples", "seed"});
    const PlanarMap map = planar_from_scenario(sc);
    const int samples = sc.get_int_or("command", "samples", 512);
    const auto nc = nullclines(map, samples);
    io::write_nullclines_csv(out_path(out_dir, sc, ".csv"), nc, serialize_scenario(sc));
    std::ostringstream msg;
    msg << "F1(x_c) = " << io::format17(nc.F1_at_xc) << ", F2(y_c) = " << io::format17(nc.F2_at_yc)
        << ", predicted = " << to_string(nc.predicted) << ", located = " << nc.located.size();
    return {0, msg.str()};
}

CommandResult cmd_basins(const Scenario& sc, const std::string& out_dir, int threads) {
    check_keys(sc, "command",
               {"name", "out", "window", "nx", "ny", "max_steps", "match_radius",
                "max_undetermined", "seed"});
    const PlanarMap map = planar_from_scenario(sc);

    const std::string win = sc.get("command", "window");
    double x_lo, x_hi, y_lo, y_hi;
    if (std::sscanf(win.c_str(), "%lf,%lf,%lf,%lf", &x_lo, &x_hi, &y_lo, &y_hi) != 4)
        throw ScenarioError("scenario: window must be x_lo,x_hi,y_lo,y_hi");
    const int nx = sc.get_int_or("command", "nx", 200);
    const int ny = sc.get_int_or("command", "ny", 200);
    const int max_steps = sc.get_int_or("command", "max_steps", 5000);
    const double mr = sc.get_double_or("command", "match_radius", 1e-6);
    const double max_und = sc.get_double_or("command", "max_undetermined", 0.01);

    PlanarEquilibria eq = boundary_equilibria(map);
    eq.interior = interior_equilibria(map);
    RegistryOptions opt;
    opt.match_radius = mr;
    opt.window_x = x_hi;
    opt.window_y = y_hi;
    const AttractorRegistry reg = build_registry(map, eq, opt);
    const BasinRaster raster = basin_grid(map, reg, x_lo, x_hi, y_lo, y_hi, nx, ny, max_steps, threads);

    const std::string echo = serialize_scenario(sc);
    io::write_raster_csv(out_path(out_dir, sc, ".csv"), raster, echo);
    io::write_raster_ppm(out_path(out_dir, sc, ".ppm"), raster, reg, echo);

    std::ostringstream msg;
    msg << reg.entries.size() << " attractors;";
    for (const auto& e : reg.entries) {
        msg << " " << to_string(e.kind) << "[" << e.id
            << "]: area = " << raster.label_fraction(e.id)
            << ", components = " << component_count(raster, e.id) << ";";
    }
    const double und = raster.undetermined_fraction();
    msg << " undetermined = " << und;
    if (und > max_und) return {3, "budget exhausted: " + msg.str()};
    return {0, msg.str()};
}

CommandResult cmd_simulate(const Scenario& sc, const std::string& out_dir) {
    check_keys(sc, "command", {"name", "out", "u0", "x0", "y0", "steps", "max_period", "seed"});
    const int steps = sc.get_int_or("command", "steps", 1000);
    const int max_period = sc.get_int_or("command", "max_period", 64);
    const std::string echo = serialize_scenario(sc);
    std::ostringstream msg;
    const std::string fam = sc.get("model", "family");
    if (is_scalar_family(fam)) {
        const ScalarModel model = scalar_from_scenario(sc);
        const double u0 = sc.get_double("command", "u0");
        const Trajectory tr = simulate(model, u0, steps);
        io::write_scalar_trajectory_csv(out_path(out_dir, sc, ".csv"), tr, echo);
        const auto eq = find_equilibria(model);
        const auto cls = asymptotic_class(tr.values, eq, 1e-6, max_period);
        switch (cls.kind) {
            case AsymptoticClass::Kind::FixedPoint:
                msg << "fixed point " << io::format17(eq.roots[cls.index].value);
                break;
            case AsymptoticClass::Kind::Cycle: msg << "cycle of period " << cls.period; break;
            case AsymptoticClass::Kind::Aperiodic: msg << "aperiodic"; break;
            case AsymptoticClass::Kind::Undetermined: msg << "undetermined"; break;
        }
        if (steps >= 100 && !tr.diverged) {
            const auto ly = lyapunov(model, u0, steps, steps / 5);
            msg << "; lyapunov = " << ly.exponent;
        }
        if (tr.diverged) msg << "; truncated (overflow)";
        return {0, msg.str()};
    }
    const PlanarMap map = planar_from_scenario(sc);
    State s{sc.get_double("command", "x0"), sc.get_double("command", "y0")};
    std::vector<State> tr{s};
    tr.reserve(steps + 1);
    for (int t = 0; t < steps; ++t) {
        s = map.step(s);
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) break;
        tr.push_back(s);
    }
    io::write_planar_trajectory_csv(out_path(out_dir, sc, ".csv"), tr, echo);
    msg << "final state (" << io::format17(tr.back().x) << ", " << io::format17(tr.back().y) << ")";
    return {0, msg.str()};
}

CommandResult cmd_verify(const Scenario& sc, const std::string& out_dir,
                         std::optional<uint64_t> seed_override) {
    check_keys(sc, "command",
               {"name", "out", "suite", "draws", "orbits", "steps", "points", "extra_draws",
                "seed"});
    const std::string suite = sc.get("command", "suite");
    const uint64_t seed = scenario_seed(sc, seed_override);
    json report;
    if (suite == "monotone_convergence") {
        report = suite_monotone_convergence(sc.get_int_or("command", "draws", 200),
                                            sc.get_int_or("command", "orbits", 50),
                                            sc.get_int_or("command", "steps", 5000), seed);
    } else if (suite == "extinction_regions" || suite == "fold_extinction_regions") {
        std::optional<PlanarMap> base;
        const std::string fam = sc.get("model", "family");
        if (!is_scalar_family(fam)) base = planar_from_scenario(sc);
        report = suite_extinction_regions(base, sc.get_int_or("command", "extra_draws", 20),
                                          sc.get_int_or("command", "points", 10000),
                                          sc.get_int_or("command", "steps", 5000), seed,
                                          suite == "fold_extinction_regions");
    } else if (suite == "interior_count") {
        report = suite_interior_count(sc.get_int_or("command", "draws", 50), seed);
    } else if (suite == "symmetric_spectrum") {
        report = suite_symmetric_spectrum(sc.get_int_or("command", "draws", 100), seed);
    } else {
        throw ScenarioError("scenario: unknown verify suite '" + suite + "'");
    }
    report["version"] = kVersion;
    report["seed"] = seed;
    std::ofstream f(out_path(out_dir, sc, ".json"));
    if (!f) throw std::runtime_error("cannot open verify report for writing");
    f << report.dump(2) << "\n";
    const bool passed = report["passed"].get<bool>();
    std::ostringstream msg;
    msg << suite << ": " << (passed ? "pass" : "FAIL") << " (" << report["violations"].dump()
        << " violations)";
    return {passed ? 0 : 1, msg.str()};
}

}  // namespace

CommandResult run_scenario(const Scenario& scenario, const std::string& out_dir, int threads,
                           std::optional<uint64_t> seed_override) {
    const std::string name = scenario.get("command", "name");
    if (name == "equilibria") return cmd_equilibria(scenario, out_dir);
    if (name == "basins") return cmd_basins(scenario, out_dir, threads);
    if (name == "nullclines") return cmd_nullclines(scenario, out_dir);
    if (name == "simulate") return cmd_simulate(scenario, out_dir);
    if (name == "verify") return cmd_verify(scenario, out_dir, seed_override);
    throw ScenarioError("scenario: unknown command '" + name + "'");
}

}  // namespace popdyn
