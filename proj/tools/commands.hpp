#pragma once

#include "config.hpp"
#include "report.hpp"

namespace kaclab::cli {

RunReport runMomentsCommand(const RunConfig& cfg);
RunReport runKacRiceCommand(const RunConfig& cfg);
RunReport runCompareCommand(const RunConfig& cfg);
RunReport runConcentrationCommand(const RunConfig& cfg);
RunReport runBergmanCommand(const RunConfig& cfg);
RunReport runNearDiagCommand(const RunConfig& cfg);
RunReport runFitCommand(const RunConfig& cfg);
RunReport runComplexCommand(const RunConfig& cfg);

}  // namespace kaclab::cli
