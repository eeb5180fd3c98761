#ifndef NOPA_CONFIG_HPP
#define NOPA_CONFIG_HPP

#include <string>

#include "nopa/cavity.hpp"
#include "nopa/measurement.hpp"
#include "nopa/quantum.hpp"
#include "nopa/resonance.hpp"

namespace nopa {

// Everything one device description provides; loaded from a single JSON file
// and schema-validated before any computation.
struct RunConfig {
  CavitySystem system;
  PumpConfig pump;  // threshold/chi resolved from whichever the file gives
  DetectionChain detection;
  double analysis_frequency_hz = 2e6;
  double phase_jitter_rad = 0.0;
  NoiseTraceConfig noise;
  ScanWaveform scan;
  double scan_detector_noise = 0.0;
  SearchDomain domain;

  bool has_threshold = false;
  bool has_chi = false;

  // kappa of the subharmonic cavity at the reference operating point.
  double subharmonic_kappa_rad_s() const;
  double pump_t0() const;
  double pump_l0() const;
  double subharmonic_t() const;
  double subharmonic_l() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text,
                           const std::string& base_dir);

}  // namespace nopa

#endif
