#pragma once

#include <string>

#include "cirfilter/config.hpp"

namespace cirfilter::cli {

/// Command bodies shared by the executable and the integration tests.
/// Every command is a pure function of (config, out_dir): outputs are
/// byte-identical across runs for a fixed seed. Each returns the process
/// exit code for a completed run and throws on bad input / internal errors
/// (the executable maps exception classes onto exit codes 2 / 1).
int run_simulate(const RunConfig& config, const std::string& out_dir);
int run_filter(const RunConfig& config, const std::string& out_dir);
int run_survival(const RunConfig& config, const std::string& out_dir);
int run_mixture(const RunConfig& config, const std::string& out_dir);
int run_validate(const RunConfig& config, const std::string& out_dir);

/// Formats one value the way every CSV writer here does ("%.12g").
std::string csv_number(double value);

}  // namespace cirfilter::cli
