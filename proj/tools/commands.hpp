#pragma once

#include <string>

#include "config.hpp"

namespace udw::cli {

// each command returns the full output document (CSV or JSON text)
std::string cmd_povm(const RunConfig& c);
std::string cmd_update(const RunConfig& c, int threads);
std::string cmd_scan(const RunConfig& c, int threads);
std::string cmd_compare(const RunConfig& c);
std::string cmd_abc(const RunConfig& c);

// least-squares slope of log|r| against log(lambda); NaN when any residual is zero
double loglog_slope(const std::vector<double>& lambdas, const std::vector<double>& residuals);

} // namespace udw::cli
