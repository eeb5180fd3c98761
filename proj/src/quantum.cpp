#include "nopa/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nopa {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_fraction(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError(std::string(name) + " = " + std::to_string(value) +
                      " must lie in (0, 1)");
  }
}

}  // namespace

double correlation_variance(double pump_power_w, double threshold_power_w,
                            double frequency_hz, double kappa_rad_s,
                            double eta_det, double eta_esc,
                            CorrelationBranch branch) {
  if (pump_power_w < 0.0) throw DomainError("pump power must be non-negative");
  if (threshold_power_w <= 0.0) throw DomainError("threshold power must be positive");
  if (frequency_hz < 0.0) throw DomainError("analysis frequency must be non-negative");
  if (kappa_rad_s <= 0.0) throw DomainError("cavity decay rate must be positive");
  if (pump_power_w > threshold_power_w) {
    throw ModelError("pump power above threshold: the below-threshold model "
                     "does not apply");
  }

  const double a = std::sqrt(pump_power_w / threshold_power_w);
  const double roll_off = 4.0 * std::pow(kTwoPi * frequency_hz / kappa_rad_s, 2);
  const double eta = eta_det * eta_esc;

  if (branch == CorrelationBranch::Correlated) {
    return 2.0 * (1.0 - eta * 4.0 * a / ((1.0 + a) * (1.0 + a) + roll_off));
  }
  const double denom = (1.0 - a) * (1.0 - a) + roll_off;
  if (denom == 0.0) {
    throw ModelError("anticorrelated variance diverges at threshold (P = "
                     "P_thr, f = 0)");
  }
  return 2.0 * (1.0 + eta * 4.0 * a / denom);
}

QuadratureVariances quadrature_variances(double pump_power_w,
                                         double threshold_power_w,
                                         double frequency_hz,
                                         double kappa_rad_s, double eta_det,
                                         double eta_esc) {
  const double corr =
      correlation_variance(pump_power_w, threshold_power_w, frequency_hz,
                           kappa_rad_s, eta_det, eta_esc,
                           CorrelationBranch::Correlated);
  const double anti =
      correlation_variance(pump_power_w, threshold_power_w, frequency_hz,
                           kappa_rad_s, eta_det, eta_esc,
                           CorrelationBranch::Anticorrelated);
  // X-sum and Y-diff are the correlated combinations of a deamplifying NOPA.
  QuadratureVariances v;
  v.x_sum = corr;
  v.y_diff = corr;
  v.x_diff = anti;
  v.y_sum = anti;
  return v;
}

double threshold_power(double t0, double l0, double t, double l, double chi) {
  check_fraction(t0, "T0");
  if (l0 < 0.0 || l0 >= 1.0) throw DomainError("L0 must lie in [0, 1)");
  check_fraction(t, "T");
  if (l < 0.0 || l >= 1.0) throw DomainError("L must lie in [0, 1)");
  if (chi <= 0.0) {
    throw DomainError("nonlinear coefficient chi must be positive");
  }
  const double num = (t0 + l0) * (t0 + l0) * (t + l) * (t + l);
  return num / (8.0 * chi * chi * t0);
}

double fit_chi(double measured_threshold_w, double t0, double l0, double t,
               double l) {
  if (measured_threshold_w <= 0.0) {
    throw DomainError("measured threshold must be positive");
  }
  check_fraction(t0, "T0");
  if (l0 < 0.0 || l0 >= 1.0) throw DomainError("L0 must lie in [0, 1)");
  check_fraction(t, "T");
  if (l < 0.0 || l >= 1.0) throw DomainError("L must lie in [0, 1)");
  return (t0 + l0) * (t + l) / std::sqrt(8.0 * t0 * measured_threshold_w);
}

double pump_buildup(double t0, double l0) {
  check_fraction(t0, "T0");
  if (l0 < 0.0 || l0 >= 1.0) throw DomainError("L0 must lie in [0, 1)");
  return 4.0 * t0 / ((t0 + l0) * (t0 + l0));
}

double infer_pump_loss(double threshold_ratio, double t0) {
  if (threshold_ratio <= 1.0) {
    throw DomainError("threshold ratio must exceed 1");
  }
  check_fraction(t0, "T0");
  const double l0 = 2.0 * std::sqrt(t0 / threshold_ratio) - t0;
  if (l0 < 0.0) {
    throw ModelError("threshold ratio " + std::to_string(threshold_ratio) +
                     " is inconsistent with the buildup model for T0 = " +
                     std::to_string(t0) + " (implies negative pump loss)");
  }
  return l0;
}

double parametric_gain(double pump_power_w, double threshold_power_w,
                       GainPhase phase) {
  if (pump_power_w < 0.0) throw DomainError("pump power must be non-negative");
  if (threshold_power_w <= 0.0) throw DomainError("threshold power must be positive");
  const double a = std::sqrt(pump_power_w / threshold_power_w);
  if (phase == GainPhase::Amplify) {
    if (a >= 1.0) {
      throw ModelError("parametric gain diverges at or above threshold");
    }
    return 1.0 / ((1.0 - a) * (1.0 - a));
  }
  return 1.0 / ((1.0 + a) * (1.0 + a));
}

EntanglementReport entanglement_report(const QuadratureVariances& vars) {
  for (double v : {vars.x_sum, vars.x_diff, vars.y_sum, vars.y_diff}) {
    if (v <= 0.0) throw DomainError("variances must be positive");
  }
  EntanglementReport report;
  report.correlation_db = -10.0 * std::log10(0.5 * vars.x_sum);
  report.anti_correlation_db = 10.0 * std::log10(0.5 * vars.x_diff);
  report.duan_value = vars.x_sum + vars.y_diff;
  report.entangled = report.duan_value < 4.0;
  return report;
}

QuadratureSpectrum variance_spectrum(double pump_power_w,
                                     double threshold_power_w,
                                     double kappa_rad_s, double eta_det,
                                     double eta_esc,
                                     const std::vector<double>& frequency_grid_hz) {
  for (std::size_t i = 0; i < frequency_grid_hz.size(); ++i) {
    if (frequency_grid_hz[i] < 0.0) {
      throw DomainError("frequency grid must be non-negative");
    }
    if (i > 0 && frequency_grid_hz[i] <= frequency_grid_hz[i - 1]) {
      throw DomainError("frequency grid must be strictly ascending");
    }
  }
  QuadratureSpectrum spec;
  spec.frequency_hz = frequency_grid_hz;
  spec.x_sum.reserve(frequency_grid_hz.size());
  spec.x_diff.reserve(frequency_grid_hz.size());
  spec.y_sum.reserve(frequency_grid_hz.size());
  spec.y_diff.reserve(frequency_grid_hz.size());
  for (double f : frequency_grid_hz) {
    const QuadratureVariances v = quadrature_variances(
        pump_power_w, threshold_power_w, f, kappa_rad_s, eta_det, eta_esc);
    spec.x_sum.push_back(v.x_sum);
    spec.x_diff.push_back(v.x_diff);
    spec.y_sum.push_back(v.y_sum);
    spec.y_diff.push_back(v.y_diff);
  }
  return spec;
}

}  // namespace nopa
