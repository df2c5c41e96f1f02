#pragma once

#include <string>
#include <vector>

#include "popdyn/basin.hpp"
#include "popdyn/planar_analysis.hpp"
#include "popdyn/scalar_analysis.hpp"

// CSV and pixmap writers. Every file starts with comment lines echoing the
// artifact version and the scenario that produced it, so a rerun with the
// same inputs is byte-identical.

namespace popdyn::io {

std::string format17(double v);

// "# key = value" echo lines; pass the serialized scenario text
std::vector<std::string> header_lines(const std::string& scenario_echo);

void write_scalar_equilibria_csv(const std::string& path, const ScalarEquilibria& eq,
                                 const std::string& scenario_echo);

void write_planar_equilibria_csv(const std::string& path, const PlanarEquilibria& eq,
                                 const std::string& scenario_echo);

void write_nullclines_csv(const std::string& path, const NullclineAnalysis& nc,
                          const std::string& scenario_echo);

void write_scalar_trajectory_csv(const std::string& path, const Trajectory& tr,
                                 const std::string& scenario_echo);

void write_planar_trajectory_csv(const std::string& path, const std::vector<State>& tr,
                                 const std::string& scenario_echo);

void write_raster_csv(const std::string& path, const BasinRaster& raster,
                      const std::string& scenario_echo);

// P6 pixmap (P3 when binary=false) with a fixed label palette: E0 red,
// ExK cyan, EyK black, interior blue, undetermined white
void write_raster_ppm(const std::string& path, const BasinRaster& raster,
                      const AttractorRegistry& reg, const std::string& scenario_echo,
                      bool binary = true);

}  // namespace popdyn::io
