#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "popdyn/planar_analysis.hpp"
#include "popdyn/planar_map.hpp"

namespace popdyn {

enum class AttractorKind { BoundaryE0, BoundaryExK, BoundaryEyK, Interior, Cycle, Aperiodic };
const char* to_string(AttractorKind k);

struct Attractor {
    int id = 0;
    AttractorKind kind = AttractorKind::Interior;
    std::vector<State> points;  // one point, a cycle's points, or tail samples
};

struct AttractorRegistry {
    std::vector<Attractor> entries;  // pairwise separated by > 2*match_radius
    double match_radius = 1e-6;
    std::vector<std::string> warnings;

    const Attractor* find(AttractorKind k) const;
    // distance from s to the entry's point set (max-norm per point)
    double distance(int id, State s) const;
};

struct RegistryOptions {
    double match_radius = 1e-6;
    int probe_grid = 12;      // probe orbits per side over the window
    int probe_steps = 4000;
    int probe_tail = 128;
    int max_cycle = 64;
    double window_x = 0.0;    // 0 picks twice the absorbing bound
    double window_y = 0.0;
};

// Locally stable candidates plus dynamically discovered cycles/aperiodic sets
// found by probe orbits whose tails match no registered entry.
AttractorRegistry build_registry(const PlanarMap& map, const PlanarEquilibria& eq,
                                 const RegistryOptions& opt = {});

// id of the first registry entry whose match ball holds the orbit 10
// consecutive steps; -1 when the budget runs out
int classify_orbit(const PlanarMap& map, State s0, const AttractorRegistry& reg, int max_steps,
                   double tol);

struct BasinRaster {
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    int nx = 0, ny = 0;
    int max_steps = 0;
    double tol = 0;
    std::vector<int16_t> labels;  // -1 = undetermined, else attractor id

    int label(int i, int j) const { return labels[static_cast<size_t>(i) * ny + j]; }
    State cell_center(int i, int j) const;
    double undetermined_fraction() const;
    std::vector<int> label_set() const;  // distinct non-negative labels present
    double label_fraction(int id) const;
};

// Cell-center classification over the window; deterministic for any thread
// count (cells are independent).
BasinRaster basin_grid(const PlanarMap& map, const AttractorRegistry& reg, double x_lo,
                       double x_hi, double y_lo, double y_hi, int nx, int ny,
                       int max_steps = 5000, int threads = 1);

// 4-connected components of one label, ignoring undetermined cells
int component_count(const BasinRaster& raster, int label);

// does any cell of the label sit on the given window edge
enum class Edge { Left, Right, Bottom, Top };
bool label_touches_edge(const BasinRaster& raster, int label, Edge edge);

// ---------------------------------------------------------------------------
// analytic extinction regions

enum class Region { O0, Oex, Oey, Ox, Oy, OexL, OeyL, O0L };
const char* to_string(Region r);

struct RegionSpec {
    Region region = Region::O0;
    // axis thresholds and carrying capacities
    double A1 = 0, A2 = 0, K1 = 0, K2 = 0;
    // competition-inflated constants and the scaled thresholds they induce
    double a1 = 0, a2 = 0;
    double A1a = 0, A2a = 0;  // valid when the matching condition holds
    bool h2 = false, h3 = false;
    // map parameters used by the ray regions
    double r1 = 0, r2 = 0, b1 = 0, b2 = 0, delta1 = 0, delta2 = 0, delta3 = 0, delta4 = 0;
};

// Throws HypothesisError when the region's hypotheses fail (H1 always; H2 for
// Ox, H3 for Oy, delta3>delta1 for OexL, delta4>delta2 for OeyL, both for O0L).
RegionSpec make_region_spec(const PlanarMap& map, Region region);

bool region_contains(const RegionSpec& spec, State s);

// a random point of the region (unbounded directions capped at twice the
// growth-rate bound)
State sample_region(const RegionSpec& spec, std::mt19937_64& rng);

struct ContainmentReport {
    Region region = Region::O0;
    int samples = 0;
    int violation_count = 0;
    std::vector<State> violations;  // first few offending initial states
};

// every sampled point of the region must reach the region's asserted limit
// (within tol, in at most max_steps); an empty report is the pass condition
ContainmentReport verify_containment(const PlanarMap& map, const RegionSpec& spec, int n_samples,
                                     int max_steps, double tol, std::mt19937_64& rng);

}  // namespace popdyn
