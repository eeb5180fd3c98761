#ifndef NOPA_RESONANCE_HPP
#define NOPA_RESONANCE_HPP

#include <cstdint>
#include <vector>

#include "nopa/cavity.hpp"

namespace nopa {

// Per-mode round-trip phase mod 2 pi, divided by 2 pi; each in [-0.5, 0.5).
struct ResonanceResidual {
  double signal = 0.0;
  double idler = 0.0;
  double pump = 0.0;

  double max_abs() const;
};

enum class ResonanceClass { Single, Double, Triple };

const char* classification_name(ResonanceClass c);

struct ResonanceSolution {
  double temperature_c = 0.0;
  double wedge_offset_m = 0.0;
  double length_trim_m = 0.0;
  std::int64_t m_signal = 0;
  std::int64_t m_idler = 0;
  std::int64_t m_pump = 0;
  ResonanceResidual residual;
  ResonanceClass classification = ResonanceClass::Single;
};

struct SearchDomain {
  double temperature_low_c = 45.0;
  double temperature_high_c = 80.0;
  double d_low_m = 0.0;
  double d_high_m = 3e-3;
  double trim_low_m = 0.0;
  double trim_high_m = 1e-6;
  double temperature_step_c = 0.05;
  double d_step_m = 20e-6;
  double residual_tolerance = 1e-8;  // fraction of 2 pi
};

ResonanceResidual fractional_detunings(const CavitySystem& sys,
                                       double temperature_c, double d,
                                       double length_trim);

// Signal and idler simultaneously resonant at one (temperature, trim), at
// fixed wedge offset d; returns the solution nearest the phase-matching
// temperature.
ResonanceSolution solve_double_resonance(const CavitySystem& sys,
                                         const SearchDomain& domain,
                                         double d = 0.0);

// All three modes resonant; sequential search (temperature, then wedge
// offset) followed by a joint 3-D Newton polish.  Returns the solution with
// the smallest non-negative d.
ResonanceSolution solve_triple_resonance(const CavitySystem& sys,
                                         const SearchDomain& domain);

// Every triple-resonance solution in the domain, ascending in d.
std::vector<ResonanceSolution> find_triple_resonances(const CavitySystem& sys,
                                                      const SearchDomain& domain);

// Labels an operating point by scanning the length trim over one subharmonic
// free spectral range; peaks coincide when separated by less than one cavity
// linewidth.
ResonanceClass classify_scan(const CavitySystem& sys, double temperature_c,
                             double d);

}  // namespace nopa

#endif
