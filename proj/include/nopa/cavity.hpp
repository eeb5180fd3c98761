#ifndef NOPA_CAVITY_HPP
#define NOPA_CAVITY_HPP

#include "nopa/errors.hpp"
#include "nopa/material.hpp"

namespace nopa {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Power transmissivity plus excess loss of one coating at one wavelength.
struct CoatingPoint {
  double wavelength_m = 0.0;
  double transmissivity = 0.0;
  double loss = 0.0;
};

struct CoatingSpec {
  std::vector<CoatingPoint> points;

  // Exact wavelength lookup (1 pm tolerance); coatings are specified per
  // design wavelength, not interpolated.
  const CoatingPoint& at(double wavelength_m) const;
  void validate() const;
};

struct WedgedCrystal {
  double length_m = 0.0;          // l_x, along propagation
  double aperture_width_m = 0.0;  // translation range of the wedge
  double aperture_height_m = 0.0;
  double wedge_angle_rad = 0.0;   // theta, cut on the end face in the y-z plane
  CoatingSpec front_face;
  CoatingSpec end_face;
};

struct NopaGeometry {
  WedgedCrystal crystal;
  double air_gap_m = 0.0;        // l_air at zero length trim
  double mirror_radius_m = 0.0;  // concave output mirror
  double intracavity_loss_subharmonic = 0.0;  // L
  double intracavity_loss_pump = 0.0;         // L0
};

// Cavity coupling for one mode, resolved from the coatings.
struct ModeCoupling {
  double input_transmissivity = 0.0;
  double output_transmissivity = 0.0;
  double intracavity_loss = 0.0;

  double total_transmissivity() const {
    return input_transmissivity + output_transmissivity;
  }
};

struct CavityModeParams {
  OpticalMode mode;
  double round_trip_optical_length_m = 0.0;
  double fsr_hz = 0.0;
  double finesse = 0.0;
  double decay_rate_rad_s = 0.0;  // amplitude decay kappa; HWHM in Hz = kappa / 2 pi
  double escape_efficiency = 0.0;
};

// Round-trip optical path l(n, d) = 2 n (l_x - d tan theta) + 2 (l_air + trim + d tan theta).
double optical_path_length(const NopaGeometry& geom, double n, double d,
                           double length_trim = 0.0);

struct GouyResult {
  double round_trip_rad = 0.0;  // full round-trip Gaussian phase accumulation
  double phi_g_rad = 0.0;       // round_trip / 4, the per-pass convention
  double g1g2 = 0.0;            // stability product
};

// Round-trip Gouy phase by complex-beam-parameter propagation through the
// reduced-length crystal, air gap and concave mirror.
GouyResult round_trip_gouy(const NopaGeometry& geom, double n, double d = 0.0,
                           double length_trim = 0.0);

// Phi = (2 pi / lambda) l(n, d) - 4 Phi_G(n).
double round_trip_phase(const NopaGeometry& geom, const OpticalMode& mode,
                        const DispersionModel& model, double temperature_c,
                        double d, double length_trim);

double wrap_phase(double phase_rad);  // into [-pi, pi)

// Airy finesse with exponential round-trip attenuation: with amplitude
// survival q = exp(-(T_total + L)/2), F = pi sqrt(q) / (1 - q).  Agrees with
// 2 pi / (T_total + L) to well under 3% for T_total + L < 0.2.
double finesse(double total_transmissivity, double loss);

double escape_efficiency(double transmissivity, double loss);

// kappa = (T + L) * FSR / 2 in rad/s (amplitude decay); the cavity intensity
// half width at half maximum in Hz is kappa / 2 pi.
double decay_rate(double total_transmissivity, double loss, double fsr_hz);

// Transmitted power fraction of a two-mirror cavity vs round-trip detuning.
double airy_transmission(double detuning_rad, double input_transmissivity,
                         double output_transmissivity, double loss);

CavityModeParams make_mode_params(const NopaGeometry& geom,
                                  const OpticalMode& mode,
                                  const ModeCoupling& coupling, double n,
                                  double d = 0.0, double length_trim = 0.0);

// Geometry, dispersion and couplings of one device; the working unit the
// solver and simulators operate on.
struct CavitySystem {
  NopaGeometry geometry;
  DispersionModel dispersion;
  OpticalMode signal;
  OpticalMode idler;
  OpticalMode pump;
  ModeCoupling subharmonic_coupling;
  ModeCoupling pump_coupling;

  const OpticalMode& mode(ModeRole role) const;
  const ModeCoupling& coupling(ModeRole role) const;
  double index(ModeRole role, double temperature_c) const;
  double phase(ModeRole role, double temperature_c, double d,
               double length_trim) const;
};

}  // namespace nopa

#endif
