#include "nopa.h"

#include <cstring>
#include <string>

#include "nopa/commands.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
nopa_status guarded(Fn&& fn) {
  try {
    fn();
    return NOPA_OK;
  } catch (const nopa::ModelError& e) {
    g_last_error = e.what();
    return NOPA_ERR_MODEL;
  } catch (const nopa::Error& e) {
    g_last_error = e.what();
    return NOPA_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NOPA_ERR_CONFIG;
  }
}

nopa_status require(const void* ptr, const char* what) {
  if (ptr) return NOPA_OK;
  g_last_error = std::string("null ") + what;
  return NOPA_ERR_CONFIG;
}

}  // namespace

struct nopa_config {
  nopa::RunConfig cfg;
};

extern "C" {

unsigned nopa_abi_version(void) { return 1; }

const char* nopa_last_error(void) { return g_last_error.c_str(); }

void nopa_string_free(char* str) { delete[] str; }

nopa_config* nopa_config_load(const char* path) {
  if (require(path, "path") != NOPA_OK) return nullptr;
  nopa_config* handle = nullptr;
  const nopa_status st = guarded([&] {
    handle = new nopa_config{nopa::load_run_config(path)};
  });
  return st == NOPA_OK ? handle : nullptr;
}

void nopa_config_free(nopa_config* cfg) { delete cfg; }

nopa_status nopa_cmd_design(const nopa_config* cfg, char** out_json) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(out_json, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out_json = dup_string(nopa::cmd_design(cfg->cfg)); });
}

nopa_status nopa_cmd_spectrum(const nopa_config* cfg, double f_min_hz,
                              double f_max_hz, int points, char** out_csv) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(out_csv, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out_csv = dup_string(nopa::cmd_spectrum(cfg->cfg, f_min_hz, f_max_hz,
                                             points));
  });
}

nopa_status nopa_cmd_threshold(const nopa_config* cfg, const char* mode,
                               char** out_json) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(mode, "mode"); st != NOPA_OK) return st;
  if (auto st = require(out_json, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(nopa::cmd_threshold(cfg->cfg, mode));
  });
}

nopa_status nopa_cmd_scan(const nopa_config* cfg, const char* stage,
                          char** out_csv) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(stage, "stage"); st != NOPA_OK) return st;
  if (auto st = require(out_csv, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out_csv = dup_string(nopa::cmd_scan(cfg->cfg, stage));
  });
}

nopa_status nopa_cmd_noise(const nopa_config* cfg, const char* quadrature,
                           char** out_csv, char** out_stats_json) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(quadrature, "quadrature"); st != NOPA_OK) return st;
  if (auto st = require(out_csv, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    const nopa::NoiseCommandOutput out = nopa::cmd_noise(cfg->cfg, quadrature);
    *out_csv = dup_string(out.csv);
    if (out_stats_json) *out_stats_json = dup_string(out.stats_json);
  });
}

nopa_status nopa_finesse(double total_transmissivity, double loss,
                         double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out = nopa::finesse(total_transmissivity, loss); });
}

nopa_status nopa_escape_efficiency(double transmissivity, double loss,
                                   double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out = nopa::escape_efficiency(transmissivity, loss); });
}

nopa_status nopa_correlation_variance(double pump_power_w,
                                      double threshold_power_w,
                                      double frequency_hz, double kappa_rad_s,
                                      double eta_det, double eta_esc,
                                      int anticorrelated, double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out = nopa::correlation_variance(
        pump_power_w, threshold_power_w, frequency_hz, kappa_rad_s, eta_det,
        eta_esc,
        anticorrelated ? nopa::CorrelationBranch::Anticorrelated
                       : nopa::CorrelationBranch::Correlated);
  });
}

nopa_status nopa_threshold_power(double t0, double l0, double t, double l,
                                 double chi, double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out = nopa::threshold_power(t0, l0, t, l, chi); });
}

nopa_status nopa_fit_chi(double measured_threshold_w, double t0, double l0,
                         double t, double l, double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out = nopa::fit_chi(measured_threshold_w, t0, l0, t, l);
  });
}

nopa_status nopa_pump_buildup(double t0, double l0, double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out = nopa::pump_buildup(t0, l0); });
}

nopa_status nopa_infer_pump_loss(double threshold_ratio, double t0,
                                 double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] { *out = nopa::infer_pump_loss(threshold_ratio, t0); });
}

nopa_status nopa_parametric_gain(double pump_power_w, double threshold_power_w,
                                 int deamplify, double* out) {
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out = nopa::parametric_gain(pump_power_w, threshold_power_w,
                                 deamplify ? nopa::GainPhase::Deamplify
                                           : nopa::GainPhase::Amplify);
  });
}

nopa_status nopa_refractive_index(const nopa_config* cfg, char axis,
                                  double wavelength_m, double temperature_c,
                                  double* out) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(out, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out = nopa::refractive_index(cfg->cfg.system.dispersion,
                                  nopa::axis_from_name(std::string(1, axis)),
                                  wavelength_m, temperature_c);
  });
}

nopa_status nopa_phase_matching_temperature(const nopa_config* cfg,
                                            double* out_c) {
  if (auto st = require(cfg, "config"); st != NOPA_OK) return st;
  if (auto st = require(out_c, "output pointer"); st != NOPA_OK) return st;
  return guarded([&] {
    *out_c = nopa::phase_matching_temperature(
                 cfg->cfg.system.dispersion, cfg->cfg.system.signal,
                 cfg->cfg.system.idler, cfg->cfg.system.pump)
                 .temperature_c;
  });
}

}  // extern "C"
