#ifndef NOPA_COMMANDS_HPP
#define NOPA_COMMANDS_HPP

#include <string>

#include "nopa/config.hpp"

namespace nopa {

// Command-level entry points shared by the C API and the CLI.  Each is a
// thin composition of library calls producing the documented CSV/JSON text.

std::string cmd_design(const RunConfig& cfg);

std::string cmd_spectrum(const RunConfig& cfg, double f_min_hz, double f_max_hz,
                         int points);

std::string cmd_threshold(const RunConfig& cfg, const std::string& mode);

std::string cmd_scan(const RunConfig& cfg, const std::string& stage);

struct NoiseCommandOutput {
  std::string csv;
  std::string stats_json;
};

NoiseCommandOutput cmd_noise(const RunConfig& cfg,
                             const std::string& quadrature);

}  // namespace nopa

#endif
