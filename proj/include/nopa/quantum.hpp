#ifndef NOPA_QUANTUM_HPP
#define NOPA_QUANTUM_HPP

#include <vector>

#include "nopa/errors.hpp"

namespace nopa {

struct PumpConfig {
  double pump_power_w = 0.0;
  double threshold_power_w = 0.0;
  double nonlinear_coefficient_chi = 0.0;  // 1/sqrt(W)
  bool pump_resonant = true;
};

struct DetectionChain {
  double detection_efficiency = 1.0;
  double escape_efficiency = 1.0;
};

// Two-mode quadrature variances normalized so the shot-noise limit is 2 per
// combination.
struct QuadratureVariances {
  double x_sum = 2.0;
  double x_diff = 2.0;
  double y_sum = 2.0;
  double y_diff = 2.0;
};

struct QuadratureSpectrum {
  std::vector<double> frequency_hz;
  std::vector<double> x_sum;
  std::vector<double> x_diff;
  std::vector<double> y_sum;
  std::vector<double> y_diff;
};

struct EntanglementReport {
  double correlation_db = 0.0;       // positive = below SNL
  double anti_correlation_db = 0.0;  // positive = above SNL
  double duan_value = 4.0;           // x_sum + y_diff
  bool entangled = false;            // duan_value < 4
};

enum class CorrelationBranch { Correlated, Anticorrelated };
enum class GainPhase { Amplify, Deamplify };

// Below-threshold two-mode variance:
//   2 (1 -+ eta_det eta_esc 4 sqrt(P/Pthr) /
//          ((1 +- sqrt(P/Pthr))^2 + 4 (2 pi f / kappa)^2))
// with the upper signs for the correlated branch.
double correlation_variance(double pump_power_w, double threshold_power_w,
                            double frequency_hz, double kappa_rad_s,
                            double eta_det, double eta_esc,
                            CorrelationBranch branch);

QuadratureVariances quadrature_variances(double pump_power_w,
                                         double threshold_power_w,
                                         double frequency_hz,
                                         double kappa_rad_s, double eta_det,
                                         double eta_esc);

// P_thr = (T0 + L0)^2 (T + L)^2 / (8 chi^2 T0).
double threshold_power(double t0, double l0, double t, double l, double chi);

// Inversion of the threshold formula for chi.
double fit_chi(double measured_threshold_w, double t0, double l0, double t,
               double l);

// Resonant circulating-power enhancement B = 4 T0 / (T0 + L0)^2; the
// threshold without pump resonance is the resonant threshold times B.
double pump_buildup(double t0, double l0);

// L0 = 2 sqrt(T0 / ratio) - T0, the pump loss consistent with a measured
// resonant/non-resonant threshold ratio.
double infer_pump_loss(double threshold_ratio, double t0);

// G = (1 -+ sqrt(P/Pthr))^-2, minus sign for amplification.
double parametric_gain(double pump_power_w, double threshold_power_w,
                       GainPhase phase);

EntanglementReport entanglement_report(const QuadratureVariances& vars);

QuadratureSpectrum variance_spectrum(double pump_power_w,
                                     double threshold_power_w,
                                     double kappa_rad_s, double eta_det,
                                     double eta_esc,
                                     const std::vector<double>& frequency_grid_hz);

}  // namespace nopa

#endif
