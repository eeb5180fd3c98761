#include "nopa/cavity.hpp"

#include <cmath>
#include <numbers>

namespace nopa {

namespace {
constexpr double kPi = std::numbers::pi;
}

const CoatingPoint& CoatingSpec::at(double wavelength_m) const {
  for (const auto& p : points) {
    if (std::abs(p.wavelength_m - wavelength_m) < 1e-12) return p;
  }
  throw DomainError("coating has no entry at wavelength " +
                    std::to_string(wavelength_m * 1e9) + " nm");
}

void CoatingSpec::validate() const {
  for (const auto& p : points) {
    if (p.transmissivity < 0.0 || p.loss < 0.0 ||
        p.transmissivity + p.loss > 1.0) {
      throw DomainError("coating entry at " +
                        std::to_string(p.wavelength_m * 1e9) +
                        " nm violates T + loss <= 1");
    }
  }
}

double optical_path_length(const NopaGeometry& geom, double n, double d,
                           double length_trim) {
  if (n <= 1.0) throw DomainError("optical_path_length needs n > 1");
  if (d < 0.0 || d > geom.crystal.aperture_width_m) {
    throw DomainError("wedge offset d = " + std::to_string(d * 1e3) +
                      " mm outside the crystal aperture [0, " +
                      std::to_string(geom.crystal.aperture_width_m * 1e3) +
                      "] mm");
  }
  const double tan_theta = std::tan(geom.crystal.wedge_angle_rad);
  return 2.0 * n * (geom.crystal.length_m - d * tan_theta) +
         2.0 * (geom.air_gap_m + length_trim + d * tan_theta);
}

GouyResult round_trip_gouy(const NopaGeometry& geom, double n, double d,
                           double length_trim) {
  const double tan_theta = std::tan(geom.crystal.wedge_angle_rad);
  const double crystal_len = geom.crystal.length_m - d * tan_theta;
  const double air_len = geom.air_gap_m + length_trim + d * tan_theta;
  const double reduced = crystal_len / n;  // diffraction length inside the crystal
  const double l_eff = reduced + air_len;

  const double g1 = 1.0;  // flat front face
  const double g2 = 1.0 - l_eff / geom.mirror_radius_m;
  const double g1g2 = g1 * g2;
  if (!(g1g2 > 0.0 && g1g2 < 1.0)) {
    throw ModelError("cavity unstable for n = " + std::to_string(n) +
                     ": g1*g2 = " + std::to_string(g1g2));
  }

  // Eigenmode has its waist on the flat face; Rayleigh range from the
  // wavefront-matching condition at the concave mirror.
  const double z_r = std::sqrt(l_eff * (geom.mirror_radius_m - l_eff));

  // One-way accumulation, segment by segment (crystal at reduced length,
  // then air); the mirror adds no Gouy phase.
  double z = 0.0, one_way = 0.0;
  for (double seg : {reduced, air_len}) {
    one_way += std::atan((z + seg) / z_r) - std::atan(z / z_r);
    z += seg;
  }

  GouyResult result;
  result.round_trip_rad = 2.0 * one_way;
  result.phi_g_rad = result.round_trip_rad / 4.0;
  result.g1g2 = g1g2;
  return result;
}

double round_trip_phase(const NopaGeometry& geom, const OpticalMode& mode,
                        const DispersionModel& model, double temperature_c,
                        double d, double length_trim) {
  const double n = refractive_index(model, mode.polarization_axis,
                                    mode.vacuum_wavelength_m, temperature_c);
  const double l = optical_path_length(geom, n, d, length_trim);
  const GouyResult gouy = round_trip_gouy(geom, n, d, length_trim);
  return 2.0 * kPi / mode.vacuum_wavelength_m * l - 4.0 * gouy.phi_g_rad;
}

double wrap_phase(double phase_rad) {
  double w = std::remainder(phase_rad, 2.0 * kPi);
  if (w >= kPi) w -= 2.0 * kPi;  // remainder returns [-pi, pi]; fold +pi
  return w;
}

double finesse(double total_transmissivity, double loss) {
  const double s = total_transmissivity + loss;
  if (s <= 0.0) {
    throw DomainError("finesse diverges for a lossless, uncoupled cavity");
  }
  if (s >= 1.0) throw DomainError("finesse needs T_total + L < 1");
  const double q = std::exp(-0.5 * s);  // round-trip amplitude survival
  return kPi * std::sqrt(q) / (1.0 - q);
}

double escape_efficiency(double transmissivity, double loss) {
  if (transmissivity <= 0.0) {
    throw DomainError("escape efficiency undefined for zero output coupling");
  }
  if (loss < 0.0) throw DomainError("negative intracavity loss");
  return transmissivity / (transmissivity + loss);
}

double decay_rate(double total_transmissivity, double loss, double fsr_hz) {
  return 0.5 * (total_transmissivity + loss) * fsr_hz;
}

double airy_transmission(double detuning_rad, double input_transmissivity,
                         double output_transmissivity, double loss) {
  const double r1 = std::sqrt(1.0 - input_transmissivity);
  const double r2 = std::sqrt(1.0 - output_transmissivity);
  const double a = std::sqrt(1.0 - loss);
  const double rho = r1 * r2 * a;  // round-trip amplitude survival
  const double t_num = input_transmissivity * output_transmissivity * a;
  const double denom = (1.0 - rho) * (1.0 - rho) +
                       4.0 * rho * std::sin(0.5 * detuning_rad) *
                           std::sin(0.5 * detuning_rad);
  return t_num / denom;
}

CavityModeParams make_mode_params(const NopaGeometry& geom,
                                  const OpticalMode& mode,
                                  const ModeCoupling& coupling, double n,
                                  double d, double length_trim) {
  CavityModeParams p;
  p.mode = mode;
  p.round_trip_optical_length_m = optical_path_length(geom, n, d, length_trim);
  p.fsr_hz = kSpeedOfLight / p.round_trip_optical_length_m;
  p.finesse = finesse(coupling.total_transmissivity(), coupling.intracavity_loss);
  p.decay_rate_rad_s = decay_rate(coupling.total_transmissivity(),
                                  coupling.intracavity_loss, p.fsr_hz);
  p.escape_efficiency =
      escape_efficiency(coupling.output_transmissivity, coupling.intracavity_loss);
  return p;
}

const OpticalMode& CavitySystem::mode(ModeRole role) const {
  switch (role) {
    case ModeRole::Signal: return signal;
    case ModeRole::Idler: return idler;
    case ModeRole::Pump: return pump;
  }
  throw DomainError("unknown mode role");
}

const ModeCoupling& CavitySystem::coupling(ModeRole role) const {
  return role == ModeRole::Pump ? pump_coupling : subharmonic_coupling;
}

double CavitySystem::index(ModeRole role, double temperature_c) const {
  const OpticalMode& m = mode(role);
  return refractive_index(dispersion, m.polarization_axis,
                          m.vacuum_wavelength_m, temperature_c);
}

double CavitySystem::phase(ModeRole role, double temperature_c, double d,
                           double length_trim) const {
  return round_trip_phase(geometry, mode(role), dispersion, temperature_c, d,
                          length_trim);
}

}  // namespace nopa
