#ifndef NOPA_MATERIAL_HPP
#define NOPA_MATERIAL_HPP

#include <array>
#include <string>
#include <vector>

#include "nopa/errors.hpp"

namespace nopa {

// Principal dielectric axes of the biaxial crystal.  Propagation is along x
// (alpha-cut); cavity modes polarize along y and z.
enum class CrystalAxis { X, Y, Z };

const char* axis_name(CrystalAxis axis);
CrystalAxis axis_from_name(const std::string& name);

enum class ModeRole { Signal, Idler, Pump };

const char* role_name(ModeRole role);

struct OpticalMode {
  ModeRole role;
  double vacuum_wavelength_m;
  CrystalAxis polarization_axis;
};

// Per-axis dispersion fit:
//   n^2(lambda) = constant + sum_k numerator_k / (lambda^2 - center_k)
//                 + lambda2_coefficient * lambda^2        (lambda in um)
//   dn/dT(lambda) = sum_k thermo_optic[k] * lambda^-k     (1/K, lambda in um)
struct SellmeierSet {
  struct Resonance {
    double numerator = 0.0;
    double center_um2 = 0.0;
  };

  CrystalAxis axis = CrystalAxis::X;
  double constant = 0.0;
  std::vector<Resonance> resonances;
  double lambda2_coefficient = 0.0;
  std::vector<double> thermo_optic;

  double index_squared(double lambda_um) const;
  double index(double lambda_um) const;
  double dn_dT(double lambda_um) const;
};

struct DispersionModel {
  double reference_temperature_c = 20.0;
  std::array<SellmeierSet, 3> sets;  // indexed by CrystalAxis
  std::string source;

  const SellmeierSet& set(CrystalAxis axis) const;
};

// n(lambda, T) = n_Sellmeier(lambda) + dn/dT(lambda) * (T - T_ref).
// Valid for lambda in [0.4, 1.5] um and T in [0, 200] C.
double refractive_index(const DispersionModel& model, CrystalAxis axis,
                        double lambda_m, double temperature_c);

struct PhaseMatchingResult {
  double temperature_c = 0.0;
  double bracket_low_c = 0.0;
  double bracket_high_c = 0.0;
};

// Solves n_p(lambda_p, T) = (n_s(lambda_s, T) + n_i(lambda_s, T)) / 2 for the
// collinear type-II interaction by bracketed bisection to |dn| < 1e-9.
PhaseMatchingResult phase_matching_temperature(const DispersionModel& model,
                                               const OpticalMode& signal,
                                               const OpticalMode& idler,
                                               const OpticalMode& pump,
                                               double window_low_c = 20.0,
                                               double window_high_c = 120.0);

// Loads and validates a dispersion coefficient file (schema in README).
DispersionModel load_dispersion_model(const std::string& path);
DispersionModel parse_dispersion_model(const std::string& json_text);

}  // namespace nopa

#endif
