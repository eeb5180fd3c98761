#include "nopa/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace nopa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed 9-significant-digit formatting for every CSV value.
std::string g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

nlohmann::json solution_to_json(const ResonanceSolution& sol) {
  return {
      {"temperature_c", sol.temperature_c},
      {"wedge_offset_mm", sol.wedge_offset_m * 1e3},
      {"length_trim_um", sol.length_trim_m * 1e6},
      {"mode_numbers",
       {{"signal", sol.m_signal}, {"idler", sol.m_idler}, {"pump", sol.m_pump}}},
      {"residuals",
       {{"signal", sol.residual.signal},
        {"idler", sol.residual.idler},
        {"pump", sol.residual.pump}}},
      {"classification", classification_name(sol.classification)},
  };
}

void require_threshold(const RunConfig& cfg) {
  if (!cfg.has_threshold) {
    throw DomainError("config provides neither 'threshold_power_w' nor 'chi' "
                      "in the quantum section");
  }
}

// Analytic temperature period of the signal-idler double resonance.
double double_resonance_period_c(const RunConfig& cfg, double t_ref) {
  const CavitySystem& sys = cfg.system;
  const double lambda = sys.signal.vacuum_wavelength_m;
  const double slope_s =
      sys.dispersion.set(sys.signal.polarization_axis).dn_dT(lambda * 1e6);
  const double slope_i =
      sys.dispersion.set(sys.idler.polarization_axis).dn_dT(lambda * 1e6);
  const double rate = std::abs(slope_s - slope_i) * 2.0 *
                      sys.geometry.crystal.length_m * kTwoPi / lambda;
  if (rate <= 0.0) {
    throw ModelError("signal and idler have identical thermo-optic slopes");
  }
  (void)t_ref;
  return kTwoPi / rate;
}

struct StagePoint {
  double temperature_c = 0.0;
  double d = 0.0;
  bool pump_on = false;
};

StagePoint stage_operating_point(const RunConfig& cfg,
                                 const std::string& stage) {
  const CavitySystem& sys = cfg.system;
  const ResonanceSolution triple = solve_triple_resonance(sys, cfg.domain);
  if (stage == "triple") {
    return {triple.temperature_c, triple.wedge_offset_m, true};
  }
  if (stage == "double") {
    // Step d away from the triple point until the pump peak no longer
    // coincides with the overlapped subharmonic peak.
    for (int k = 1; k <= 80; ++k) {
      const double d = triple.wedge_offset_m + k * 5e-6;
      if (d > cfg.domain.d_high_m) break;
      const ResonanceSolution dr = solve_double_resonance(sys, cfg.domain, d);
      if (classify_scan(sys, dr.temperature_c, d) == ResonanceClass::Double) {
        return {dr.temperature_c, d, false};
      }
    }
    throw ModelError("could not find a double-resonance-only wedge offset "
                     "near the triple point");
  }
  if (stage == "single") {
    // Half the double-resonance temperature period splits the subharmonic
    // peaks maximally.
    const double period = double_resonance_period_c(cfg, triple.temperature_c);
    for (double sign : {1.0, -1.0}) {
      const double t = triple.temperature_c + sign * 0.5 * period;
      if (t < cfg.domain.temperature_low_c || t > cfg.domain.temperature_high_c) {
        continue;
      }
      if (classify_scan(sys, t, triple.wedge_offset_m) ==
          ResonanceClass::Single) {
        return {t, triple.wedge_offset_m, false};
      }
    }
    throw ModelError("could not find a single-resonance temperature in the "
                     "solver domain");
  }
  throw DomainError("unknown scan stage '" + stage +
                    "' (expected single, double or triple)");
}

}  // namespace

std::string cmd_design(const RunConfig& cfg) {
  const CavitySystem& sys = cfg.system;
  const PhaseMatchingResult pm = phase_matching_temperature(
      sys.dispersion, sys.signal, sys.idler, sys.pump);
  const ResonanceSolution dbl = solve_double_resonance(sys, cfg.domain);
  const ResonanceSolution triple = solve_triple_resonance(sys, cfg.domain);

  nlohmann::json out = {
      {"format_version", 1},
      {"phase_matching_temperature_c", pm.temperature_c},
      {"double_resonance", solution_to_json(dbl)},
      {"triple_resonance", solution_to_json(triple)},
  };
  return out.dump(2) + "\n";
}

std::string cmd_spectrum(const RunConfig& cfg, double f_min_hz, double f_max_hz,
                         int points) {
  require_threshold(cfg);
  if (!(f_min_hz >= 0.0) || !(f_max_hz > f_min_hz) || points < 2) {
    throw DomainError("spectrum needs 0 <= fmin < fmax and at least 2 points");
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = f_min_hz + (f_max_hz - f_min_hz) * i / (points - 1);
  }
  const QuadratureSpectrum spec = variance_spectrum(
      cfg.pump.pump_power_w, cfg.pump.threshold_power_w,
      cfg.subharmonic_kappa_rad_s(), cfg.detection.detection_efficiency,
      cfg.detection.escape_efficiency, grid);

  std::ostringstream out;
  out << "# format_version: 1\n";
  out << "f_hz,x_sum,x_diff,y_sum,y_diff,corr_db\n";
  for (std::size_t i = 0; i < spec.frequency_hz.size(); ++i) {
    const double corr_db = -10.0 * std::log10(0.5 * spec.x_sum[i]);
    out << g9(spec.frequency_hz[i]) << ',' << g9(spec.x_sum[i]) << ','
        << g9(spec.x_diff[i]) << ',' << g9(spec.y_sum[i]) << ','
        << g9(spec.y_diff[i]) << ',' << g9(corr_db) << '\n';
  }
  return out.str();
}

std::string cmd_threshold(const RunConfig& cfg, const std::string& mode) {
  if (mode != "resonant" && mode != "nonresonant") {
    throw DomainError("threshold mode must be 'resonant' or 'nonresonant'");
  }
  require_threshold(cfg);
  const double resonant = cfg.pump.threshold_power_w;
  const double buildup = pump_buildup(cfg.pump_t0(), cfg.pump_l0());
  const double nonresonant = resonant * buildup;

  nlohmann::json out = {
      {"format_version", 1},
      {"mode", mode},
      {"threshold_w", mode == "resonant" ? resonant : nonresonant},
      {"resonant_threshold_w", resonant},
      {"nonresonant_threshold_w", nonresonant},
      {"buildup", buildup},
      {"chi", cfg.pump.nonlinear_coefficient_chi},
      {"t0", cfg.pump_t0()},
      {"l0", cfg.pump_l0()},
  };
  return out.dump(2) + "\n";
}

std::string cmd_scan(const RunConfig& cfg, const std::string& stage) {
  const StagePoint point = stage_operating_point(cfg, stage);
  PumpConfig pump = cfg.pump;
  if (!point.pump_on) pump.pump_power_w = 0.0;
  if (point.pump_on) require_threshold(cfg);

  const ScanTrace trace = simulate_cavity_scan(
      cfg.system, point.temperature_c, point.d, pump, cfg.scan,
      cfg.scan_detector_noise, cfg.noise.rng_seed);

  std::ostringstream out;
  out << "# format_version: 1\n";
  out << "# stage: " << stage << ", temperature_c: " << g9(point.temperature_c)
      << ", wedge_offset_mm: " << g9(point.d * 1e3) << '\n';
  out << "time_s,trim_m,pump_transmission,subharmonic_transmission\n";
  for (std::size_t i = 0; i < trace.time_s.size(); ++i) {
    out << g9(trace.time_s[i]) << ',' << g9(trace.trim_m[i]) << ','
        << g9(trace.pump_transmission[i]) << ','
        << g9(trace.subharmonic_transmission[i]) << '\n';
  }
  return out.str();
}

NoiseCommandOutput cmd_noise(const RunConfig& cfg,
                             const std::string& quadrature) {
  if (quadrature != "x" && quadrature != "y") {
    throw DomainError("noise quadrature must be 'x' or 'y'");
  }
  require_threshold(cfg);

  const QuadratureVariances ideal = quadrature_variances(
      cfg.pump.pump_power_w, cfg.pump.threshold_power_w,
      cfg.analysis_frequency_hz, cfg.subharmonic_kappa_rad_s(),
      cfg.detection.detection_efficiency, cfg.detection.escape_efficiency);
  const QuadratureVariances vars =
      apply_phase_jitter(ideal, cfg.phase_jitter_rad);

  const double corr = quadrature == "x" ? vars.x_sum : vars.y_diff;
  const double anti = quadrature == "x" ? vars.x_diff : vars.y_sum;
  const double corr_db = 10.0 * std::log10(0.5 * corr);
  const double anti_db = 10.0 * std::log10(0.5 * anti);

  NoiseTraceConfig ncfg = cfg.noise;
  ncfg.set_level_db = corr_db;
  const NoiseTrace trace = simulate_noise_trace(ncfg);

  // Anticorrelated trace from the next seed block; SNL/ENL come from the
  // correlated run.
  NoiseTraceConfig acfg = cfg.noise;
  acfg.set_level_db = anti_db;
  acfg.rng_seed = cfg.noise.rng_seed + 3;
  const NoiseTrace anti_trace = simulate_noise_trace(acfg);

  const LevelEstimate corr_est =
      estimate_db_from_trace(trace.power_db, trace.snl_db);
  const LevelEstimate anti_est =
      estimate_db_from_trace(anti_trace.power_db, trace.snl_db);

  NoiseCommandOutput out;
  std::ostringstream csv;
  csv << "# format_version: 1\n";
  csv << "# quadrature: " << quadrature << '\n';
  csv << "time_s,snl_db,correlated_db,anticorrelated_db,enl_db\n";
  for (std::size_t i = 0; i < trace.time_s.size(); ++i) {
    csv << g9(trace.time_s[i]) << ',' << g9(trace.snl_db[i]) << ','
        << g9(trace.power_db[i]) << ',' << g9(anti_trace.power_db[i]) << ','
        << g9(trace.enl_db[i]) << '\n';
  }
  out.csv = csv.str();

  nlohmann::json stats = {
      {"format_version", 1},
      {"quadrature", quadrature},
      {"correlation_db_estimate", corr_est.level_db},
      {"correlation_db_sem", corr_est.sem_db},
      {"correlation_db_per_point_std", corr_est.per_point_std_db},
      {"anticorrelation_db_estimate", anti_est.level_db},
      {"anticorrelation_db_sem", anti_est.sem_db},
      {"predicted_correlation_db", corr_db},
      {"predicted_anticorrelation_db", anti_db},
      {"points", corr_est.points},
  };
  out.stats_json = stats.dump(2) + "\n";
  return out;
}

}  // namespace nopa
