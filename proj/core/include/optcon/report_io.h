#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "optcon/generator.h"
#include "optcon/graph.h"
#include "optcon/sim.h"

namespace optcon {

// Pretty-printed JSON documents. Doubles round-trip exactly; non-finite
// values are written as null.
std::string ReportToJson(const RunReport& report);
std::string LaplacianReportToJson(const LaplacianReport& report);
std::string GainsToJson(const GeneratorGains& gains,
                        const GeneratorGains& bound, bool meets_bound);

// Header t,y_1..y_N,r_1..r_N,u_1..u_N,theta_1..theta_N,v_1..v_N, one row per
// logged instant, shortest round-trip formatting.
void WriteTrajectoryCsv(std::ostream& out, const Trajectory& traj);

// Creates parent directories; throws Error(kIo) on failure.
void WriteFile(const std::filesystem::path& path, const std::string& text);

}  // namespace optcon
