#include "nopa/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace nopa {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw DomainError(std::string("config: missing or non-numeric field '") +
                      key + "'");
  }
  return obj.at(key).get<double>();
}

const json& require_object(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_object()) {
    throw DomainError(std::string("config: missing section '") + key + "'");
  }
  return obj.at(key);
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw DomainError(std::string("config: '") + name + "' must be positive");
  }
}

}  // namespace

double RunConfig::subharmonic_kappa_rad_s() const {
  double t_ref;
  try {
    t_ref = phase_matching_temperature(system.dispersion, system.signal,
                                       system.idler, system.pump)
                .temperature_c;
  } catch (const Error&) {
    t_ref = 0.5 * (domain.temperature_low_c + domain.temperature_high_c);
  }
  const double n = system.index(ModeRole::Signal, t_ref);
  const CavityModeParams p = make_mode_params(
      system.geometry, system.signal, system.subharmonic_coupling, n);
  return p.decay_rate_rad_s;
}

double RunConfig::pump_t0() const {
  return system.pump_coupling.input_transmissivity;
}

double RunConfig::pump_l0() const {
  return system.pump_coupling.output_transmissivity +
         system.pump_coupling.intracavity_loss;
}

double RunConfig::subharmonic_t() const {
  return system.subharmonic_coupling.output_transmissivity;
}

double RunConfig::subharmonic_l() const {
  return system.subharmonic_coupling.intracavity_loss +
         system.subharmonic_coupling.input_transmissivity;
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed config JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (doc.value("format_version", 0) != 1) {
      throw DomainError("config: unsupported or missing format_version "
                        "(expected 1)");
    }

    // Dispersion data file, relative to the config file's directory.
    const std::string disp = doc.at("dispersion_file").get<std::string>();
    std::filesystem::path disp_path(disp);
    if (disp_path.is_relative()) {
      disp_path = std::filesystem::path(base_dir) / disp_path;
    }
    cfg.system.dispersion = load_dispersion_model(disp_path.string());

    const json& modes = require_object(doc, "modes");
    const double lambda_s =
        require_number(modes, "subharmonic_wavelength_nm") * 1e-9;
    check_positive(lambda_s, "subharmonic_wavelength_nm");
    const CrystalAxis signal_axis =
        axis_from_name(modes.at("signal_axis").get<std::string>());
    const CrystalAxis idler_axis =
        axis_from_name(modes.at("idler_axis").get<std::string>());
    const CrystalAxis pump_axis =
        axis_from_name(modes.at("pump_axis").get<std::string>());
    if (signal_axis == idler_axis) {
      throw DomainError("config: signal_axis and idler_axis must differ "
                        "(type-II interaction)");
    }
    cfg.system.signal = {ModeRole::Signal, lambda_s, signal_axis};
    cfg.system.idler = {ModeRole::Idler, lambda_s, idler_axis};
    cfg.system.pump = {ModeRole::Pump, 0.5 * lambda_s, pump_axis};

    const json& geom = require_object(doc, "geometry");
    NopaGeometry& g = cfg.system.geometry;
    g.crystal.length_m = require_number(geom, "crystal_length_mm") * 1e-3;
    check_positive(g.crystal.length_m, "crystal_length_mm");
    const auto aperture = geom.at("aperture_mm").get<std::vector<double>>();
    if (aperture.size() != 2) {
      throw DomainError("config: 'aperture_mm' must be [width, height]");
    }
    g.crystal.aperture_width_m = aperture[0] * 1e-3;
    g.crystal.aperture_height_m = aperture[1] * 1e-3;
    g.crystal.wedge_angle_rad =
        require_number(geom, "wedge_angle_deg") * std::numbers::pi / 180.0;
    if (g.crystal.wedge_angle_rad < 0.0 ||
        g.crystal.wedge_angle_rad > 5.0 * std::numbers::pi / 180.0) {
      throw DomainError("config: 'wedge_angle_deg' must lie in [0, 5]");
    }
    g.air_gap_m = require_number(geom, "air_gap_mm") * 1e-3;
    check_positive(g.air_gap_m, "air_gap_mm");
    g.mirror_radius_m = require_number(geom, "mirror_radius_mm") * 1e-3;
    check_positive(g.mirror_radius_m, "mirror_radius_mm");

    const json& front = require_object(geom, "front_face");
    const json& mirror = require_object(geom, "output_mirror");
    const json& loss = require_object(geom, "intracavity_loss");
    const double lambda_p = 0.5 * lambda_s;

    g.crystal.front_face.points = {
        {lambda_s, require_number(front, "subharmonic_T"), 0.0},
        {lambda_p, require_number(front, "pump_T"), 0.0}};
    g.crystal.front_face.validate();
    g.intracavity_loss_subharmonic = require_number(loss, "subharmonic");
    g.intracavity_loss_pump = require_number(loss, "pump");
    if (g.intracavity_loss_subharmonic < 0.0 ||
        g.intracavity_loss_subharmonic > 0.2 ||
        g.intracavity_loss_pump < 0.0 || g.intracavity_loss_pump > 0.2) {
      throw DomainError("config: intracavity losses must lie in [0, 0.2]");
    }

    CoatingSpec mirror_spec;
    mirror_spec.points = {
        {lambda_s, require_number(mirror, "subharmonic_T"), 0.0},
        {lambda_p, require_number(mirror, "pump_T"), 0.0}};
    mirror_spec.validate();

    cfg.system.subharmonic_coupling = {
        g.crystal.front_face.at(lambda_s).transmissivity,
        mirror_spec.at(lambda_s).transmissivity,
        g.intracavity_loss_subharmonic};
    cfg.system.pump_coupling = {g.crystal.front_face.at(lambda_p).transmissivity,
                                mirror_spec.at(lambda_p).transmissivity,
                                g.intracavity_loss_pump};
    check_positive(cfg.system.subharmonic_coupling.output_transmissivity,
                   "output_mirror.subharmonic_T");
    check_positive(cfg.system.pump_coupling.input_transmissivity,
                   "front_face.pump_T");

    const json& quantum = require_object(doc, "quantum");
    cfg.pump.pump_power_w = require_number(quantum, "pump_power_w");
    if (cfg.pump.pump_power_w < 0.0) {
      throw DomainError("config: 'pump_power_w' must be non-negative");
    }
    cfg.has_threshold = quantum.contains("threshold_power_w");
    cfg.has_chi = quantum.contains("chi");
    if (cfg.has_threshold) {
      cfg.pump.threshold_power_w = require_number(quantum, "threshold_power_w");
      check_positive(cfg.pump.threshold_power_w, "threshold_power_w");
    }
    if (cfg.has_chi) {
      cfg.pump.nonlinear_coefficient_chi = require_number(quantum, "chi");
      check_positive(cfg.pump.nonlinear_coefficient_chi, "chi");
    }
    if (cfg.has_chi && !cfg.has_threshold) {
      cfg.pump.threshold_power_w = threshold_power(
          cfg.pump_t0(), cfg.pump_l0(), cfg.subharmonic_t(),
          cfg.subharmonic_l(), cfg.pump.nonlinear_coefficient_chi);
      cfg.has_threshold = true;
    } else if (cfg.has_threshold && !cfg.has_chi) {
      cfg.pump.nonlinear_coefficient_chi =
          fit_chi(cfg.pump.threshold_power_w, cfg.pump_t0(), cfg.pump_l0(),
                  cfg.subharmonic_t(), cfg.subharmonic_l());
      cfg.has_chi = true;
    }
    if (cfg.has_threshold &&
        cfg.pump.pump_power_w >= cfg.pump.threshold_power_w) {
      throw DomainError("config: 'pump_power_w' must stay below the "
                        "oscillation threshold");
    }
    cfg.detection.detection_efficiency =
        require_number(quantum, "detection_efficiency");
    if (!(cfg.detection.detection_efficiency > 0.0 &&
          cfg.detection.detection_efficiency <= 1.0)) {
      throw DomainError("config: 'detection_efficiency' must lie in (0, 1]");
    }
    cfg.detection.escape_efficiency =
        escape_efficiency(cfg.subharmonic_t(), cfg.subharmonic_l());
    cfg.analysis_frequency_hz = require_number(quantum, "analysis_frequency_hz");
    check_positive(cfg.analysis_frequency_hz, "analysis_frequency_hz");
    cfg.phase_jitter_rad = quantum.value("phase_jitter_rad", 0.0);
    if (cfg.phase_jitter_rad < 0.0 ||
        cfg.phase_jitter_rad > std::numbers::pi / 4.0) {
      throw DomainError("config: 'phase_jitter_rad' must lie in [0, pi/4]");
    }

    const json& meas = require_object(doc, "measurement");
    cfg.noise.rbw_hz = require_number(meas, "rbw_hz");
    cfg.noise.vbw_hz = require_number(meas, "vbw_hz");
    cfg.noise.duration_s = require_number(meas, "duration_s");
    cfg.noise.sample_rate_hz = require_number(meas, "sample_rate_hz");
    cfg.noise.enl_db = require_number(meas, "enl_db");
    cfg.noise.rng_seed = meas.at("seed").get<std::uint64_t>();
    if (cfg.noise.vbw_hz >= cfg.noise.rbw_hz) {
      throw DomainError("config: 'vbw_hz' must be smaller than 'rbw_hz'");
    }

    const json& scan = require_object(meas, "scan");
    const std::string shape = scan.at("shape").get<std::string>();
    if (shape == "triangle") {
      cfg.scan.shape = ScanWaveform::Shape::Triangle;
    } else if (shape == "sawtooth") {
      cfg.scan.shape = ScanWaveform::Shape::Sawtooth;
    } else {
      throw DomainError("config: scan 'shape' must be triangle or sawtooth");
    }
    cfg.scan.amplitude_m = require_number(scan, "amplitude_um") * 1e-6;
    cfg.scan.period_s = require_number(scan, "period_ms") * 1e-3;
    cfg.scan.samples = scan.at("samples").get<int>();
    if (cfg.scan.samples < 2) {
      throw DomainError("config: scan 'samples' must be at least 2");
    }
    cfg.scan_detector_noise = scan.value("detector_noise", 0.0);
    if (cfg.scan.amplitude_m < 0.5 * lambda_s) {
      throw DomainError("config: scan 'amplitude_um' must cover one "
                        "subharmonic free spectral range");
    }

    const json& solver = require_object(doc, "solver");
    const auto t_range = solver.at("temperature_range_c").get<std::vector<double>>();
    const auto d_range = solver.at("d_range_mm").get<std::vector<double>>();
    const auto trim_range = solver.at("trim_range_um").get<std::vector<double>>();
    if (t_range.size() != 2 || d_range.size() != 2 || trim_range.size() != 2 ||
        t_range[0] >= t_range[1] || d_range[0] >= d_range[1] ||
        trim_range[0] >= trim_range[1]) {
      throw DomainError("config: solver ranges must be non-empty [low, high] "
                        "pairs");
    }
    cfg.domain.temperature_low_c = t_range[0];
    cfg.domain.temperature_high_c = t_range[1];
    cfg.domain.d_low_m = d_range[0] * 1e-3;
    cfg.domain.d_high_m = d_range[1] * 1e-3;
    cfg.domain.trim_low_m = trim_range[0] * 1e-6;
    cfg.domain.trim_high_m = trim_range[1] * 1e-6;
    cfg.domain.temperature_step_c = solver.value("temperature_step_c", 0.05);
    cfg.domain.d_step_m = solver.value("d_step_um", 20.0) * 1e-6;
    cfg.domain.residual_tolerance = solver.value("residual_tolerance", 1e-8);
    check_positive(cfg.domain.temperature_step_c, "temperature_step_c");
    check_positive(cfg.domain.d_step_m, "d_step_um");
    check_positive(cfg.domain.residual_tolerance, "residual_tolerance");
    if (cfg.domain.d_low_m < 0.0 ||
        cfg.domain.d_high_m > g.crystal.aperture_width_m) {
      throw DomainError("config: solver d range must lie within the crystal "
                        "aperture");
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(
      buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace nopa
