#ifndef NOPA_MEASUREMENT_HPP
#define NOPA_MEASUREMENT_HPP

#include <cstdint>
#include <vector>

#include "nopa/cavity.hpp"
#include "nopa/quantum.hpp"

namespace nopa {

struct ScanWaveform {
  enum class Shape { Triangle, Sawtooth };
  Shape shape = Shape::Triangle;
  double amplitude_m = 1.2e-6;  // trim sweep range; must cover >= one subharmonic FSR
  double period_s = 20e-3;
  int samples = 4096;
};

struct ScanTrace {
  std::vector<double> time_s;
  std::vector<double> trim_m;
  std::vector<double> pump_transmission;
  std::vector<double> subharmonic_transmission;
};

struct NoiseTraceConfig {
  double set_level_db = 0.0;  // relative to SNL
  double rbw_hz = 10e3;
  double vbw_hz = 100.0;
  double duration_s = 0.2;
  double sample_rate_hz = 2500.0;
  double enl_db = -15.0;  // below SNL
  std::uint64_t rng_seed = 1;
};

struct NoiseTrace {
  std::vector<double> time_s;
  std::vector<double> power_db;
  std::vector<double> snl_db;
  std::vector<double> enl_db;
};

struct LevelEstimate {
  double level_db = 0.0;
  double sem_db = 0.0;            // standard error of the mean difference
  double per_point_std_db = 0.0;  // scatter of the per-point differences
  std::size_t points = 0;
};

// Cavity-length scan: Airy transmission per trim sample for pump and for the
// summed signal+idler; subharmonic peaks are amplified by the parametric
// gain in proportion to the pump circulating power at that trim.  Detector
// noise is additive Gaussian; noise_level 0 gives a noise-free trace.
ScanTrace simulate_cavity_scan(const CavitySystem& sys, double temperature_c,
                               double d, const PumpConfig& pump,
                               const ScanWaveform& waveform,
                               double noise_level, std::uint64_t seed);

// Spectrum-analyzer style trace: every displayed point is
// 10 log10(mean of round(RBW/VBW) exponential power draws) at the set level;
// SNL and ENL references are generated the same way.
NoiseTrace simulate_noise_trace(const NoiseTraceConfig& config);

LevelEstimate estimate_db_from_trace(const std::vector<double>& trace_db,
                                     const std::vector<double>& snl_db);

// Relative-phase jitter mixes the two branches:
// corr' = corr cos^2(sigma) + anti sin^2(sigma), and symmetrically.
QuadratureVariances apply_phase_jitter(const QuadratureVariances& vars,
                                       double sigma_rad);

}  // namespace nopa

#endif
