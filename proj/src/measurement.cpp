#include "nopa/measurement.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "nopa/resonance.hpp"

namespace nopa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Deterministic draws on top of the standard-specified mt19937_64 output
// sequence, so traces are bit-identical across platforms.
class TraceRng {
public:
  explicit TraceRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double exponential() { return -std::log1p(-uniform()); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double waveform_position(const ScanWaveform& w, double time_s) {
  const double frac = time_s / w.period_s - std::floor(time_s / w.period_s);
  if (w.shape == ScanWaveform::Shape::Sawtooth) return frac;
  return frac < 0.5 ? 2.0 * frac : 2.0 * (1.0 - frac);
}

// Circulating pump power normalized to its resonant value.
double normalized_buildup(double detuning_rad, const ModeCoupling& c) {
  const double r1 = std::sqrt(1.0 - c.input_transmissivity);
  const double r2 = std::sqrt(1.0 - c.output_transmissivity);
  const double a = std::sqrt(1.0 - c.intracavity_loss);
  const double rho = r1 * r2 * a;
  const double one_minus = (1.0 - rho) * (1.0 - rho);
  const double s = std::sin(0.5 * detuning_rad);
  return one_minus / (one_minus + 4.0 * rho * s * s);
}

std::vector<double> trace_points(double level_linear, std::size_t n_points,
                                 std::size_t n_average, std::uint64_t seed) {
  TraceRng rng(seed);
  std::vector<double> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_average; ++k) acc += rng.exponential();
    out.push_back(10.0 * std::log10(level_linear * acc /
                                    static_cast<double>(n_average)));
  }
  return out;
}

}  // namespace

ScanTrace simulate_cavity_scan(const CavitySystem& sys, double temperature_c,
                               double d, const PumpConfig& pump,
                               const ScanWaveform& waveform,
                               double noise_level, std::uint64_t seed) {
  if (waveform.samples < 2) throw DomainError("scan needs at least 2 samples");
  if (waveform.amplitude_m < 0.5 * sys.signal.vacuum_wavelength_m) {
    throw DomainError("scan amplitude must cover at least one subharmonic "
                      "free spectral range (half the subharmonic wavelength)");
  }
  if (noise_level < 0.0) throw DomainError("negative detector noise level");

  const double gain =
      pump.pump_power_w > 0.0
          ? parametric_gain(pump.pump_power_w, pump.threshold_power_w,
                            GainPhase::Amplify)
          : 1.0;

  TraceRng rng(seed);
  ScanTrace trace;
  trace.time_s.reserve(waveform.samples);
  trace.trim_m.reserve(waveform.samples);
  trace.pump_transmission.reserve(waveform.samples);
  trace.subharmonic_transmission.reserve(waveform.samples);

  const ModeCoupling& sub = sys.subharmonic_coupling;
  const ModeCoupling& pmp = sys.pump_coupling;

  for (int i = 0; i < waveform.samples; ++i) {
    const double t = waveform.period_s * i / waveform.samples;
    const double trim = waveform.amplitude_m * waveform_position(waveform, t);
    const ResonanceResidual res =
        fractional_detunings(sys, temperature_c, d, trim);

    const double delta_p = kTwoPi * res.pump;
    const double pump_tx =
        airy_transmission(delta_p, pmp.input_transmissivity,
                          pmp.output_transmissivity, pmp.intracavity_loss);

    const double tx_s =
        airy_transmission(kTwoPi * res.signal, sub.input_transmissivity,
                          sub.output_transmissivity, sub.intracavity_loss);
    const double tx_i =
        airy_transmission(kTwoPi * res.idler, sub.input_transmissivity,
                          sub.output_transmissivity, sub.intracavity_loss);
    const double gain_factor =
        1.0 + (gain - 1.0) * normalized_buildup(delta_p, pmp);

    double pump_out = pump_tx;
    double sub_out = (tx_s + tx_i) * gain_factor;
    if (noise_level > 0.0) {
      pump_out += noise_level * rng.gaussian();
      sub_out += noise_level * rng.gaussian();
    }

    trace.time_s.push_back(t);
    trace.trim_m.push_back(trim);
    trace.pump_transmission.push_back(pump_out);
    trace.subharmonic_transmission.push_back(sub_out);
  }
  return trace;
}

NoiseTrace simulate_noise_trace(const NoiseTraceConfig& config) {
  if (config.vbw_hz <= 0.0 || config.rbw_hz <= 0.0) {
    throw DomainError("RBW and VBW must be positive");
  }
  if (config.vbw_hz >= config.rbw_hz) {
    throw DomainError("VBW must be smaller than RBW");
  }
  const double n_points_d = config.duration_s * config.sample_rate_hz;
  if (!(n_points_d >= 100.0)) {
    throw DomainError("duration * sample_rate must give at least 100 points");
  }
  const auto n_points = static_cast<std::size_t>(std::llround(n_points_d));
  const auto n_average = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(config.rbw_hz / config.vbw_hz)));

  NoiseTrace trace;
  trace.time_s.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    trace.time_s.push_back(static_cast<double>(i) / config.sample_rate_hz);
  }
  const double set_linear = std::pow(10.0, config.set_level_db / 10.0);
  const double enl_linear = std::pow(10.0, config.enl_db / 10.0);
  trace.power_db = trace_points(set_linear, n_points, n_average, config.rng_seed);
  trace.snl_db = trace_points(1.0, n_points, n_average, config.rng_seed + 1);
  trace.enl_db = trace_points(enl_linear, n_points, n_average, config.rng_seed + 2);
  return trace;
}

LevelEstimate estimate_db_from_trace(const std::vector<double>& trace_db,
                                     const std::vector<double>& snl_db) {
  if (trace_db.size() != snl_db.size()) {
    throw DomainError("trace and SNL reference have different lengths");
  }
  if (trace_db.empty()) throw DomainError("empty trace");

  const std::size_t n = trace_db.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += trace_db[i] - snl_db[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = trace_db[i] - snl_db[i] - mean;
    var += diff * diff;
  }
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;

  LevelEstimate est;
  est.level_db = mean;
  est.per_point_std_db = std::sqrt(var);
  est.sem_db = est.per_point_std_db / std::sqrt(static_cast<double>(n));
  est.points = n;
  return est;
}

QuadratureVariances apply_phase_jitter(const QuadratureVariances& vars,
                                       double sigma_rad) {
  if (sigma_rad < 0.0 || sigma_rad > std::numbers::pi / 4.0) {
    throw DomainError("phase jitter sigma must lie in [0, pi/4]");
  }
  const double c2 = std::cos(sigma_rad) * std::cos(sigma_rad);
  const double s2 = 1.0 - c2;
  auto mix = [c2, s2](double primary, double other) {
    return primary * c2 + other * s2;
  };
  QuadratureVariances out;
  out.x_sum = mix(vars.x_sum, vars.x_diff);
  out.x_diff = mix(vars.x_diff, vars.x_sum);
  out.y_sum = mix(vars.y_sum, vars.y_diff);
  out.y_diff = mix(vars.y_diff, vars.y_sum);
  return out;
}

}  // namespace nopa
