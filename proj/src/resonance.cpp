#include "nopa/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace nopa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fold_into(double value, double low, double period) {
  double folded = std::fmod(value - low, period);
  if (folded < 0.0) folded += period;
  return low + folded;
}

// Smallest separation of two points on a circle of the given circumference.
double circular_distance(double a, double b, double circumference) {
  double diff = std::abs(a - b);
  diff = std::fmod(diff, circumference);
  return std::min(diff, circumference - diff);
}

struct PhaseEval {
  double signal, idler, pump;
};

PhaseEval phases(const CavitySystem& sys, double t, double d, double trim) {
  return {sys.phase(ModeRole::Signal, t, d, trim),
          sys.phase(ModeRole::Idler, t, d, trim),
          sys.phase(ModeRole::Pump, t, d, trim)};
}

// Relative subharmonic phase; independent of trim up to the (tiny) Gouy
// difference because the two wavelengths are equal.
double relative_subharmonic_phase(const CavitySystem& sys, double t, double d,
                                  double trim) {
  return sys.phase(ModeRole::Idler, t, d, trim) -
         sys.phase(ModeRole::Signal, t, d, trim);
}

// Trim that zeroes the signal residual, nearest to trim0.  The phase is
// linear in trim except through the Gouy term, so a couple of fixed-point
// steps converge to machine precision.
double trim_for_signal_resonance(const CavitySystem& sys, double t, double d,
                                 double trim0) {
  const double lambda = sys.signal.vacuum_wavelength_m;
  double trim = trim0;
  for (int i = 0; i < 4; ++i) {
    const double w = wrap_phase(sys.phase(ModeRole::Signal, t, d, trim));
    trim -= w * lambda / (4.0 * kPi);
  }
  return trim;
}

double reference_temperature(const CavitySystem& sys,
                             const SearchDomain& domain) {
  try {
    return phase_matching_temperature(sys.dispersion, sys.signal, sys.idler,
                                      sys.pump)
        .temperature_c;
  } catch (const Error&) {
    return 0.5 * (domain.temperature_low_c + domain.temperature_high_c);
  }
}

bool newton_refine_double(const CavitySystem& sys, double d, double tol,
                          double& t, double& trim) {
  const double dt = 1e-5;     // K
  const double dtr = 1e-12;   // m
  for (int iter = 0; iter < 40; ++iter) {
    const double rs = wrap_phase(sys.phase(ModeRole::Signal, t, d, trim)) / kTwoPi;
    const double ri = wrap_phase(sys.phase(ModeRole::Idler, t, d, trim)) / kTwoPi;
    if (std::max(std::abs(rs), std::abs(ri)) < tol) return true;

    const double rs_t =
        wrap_phase(sys.phase(ModeRole::Signal, t + dt, d, trim)) / kTwoPi;
    const double ri_t =
        wrap_phase(sys.phase(ModeRole::Idler, t + dt, d, trim)) / kTwoPi;
    const double rs_r =
        wrap_phase(sys.phase(ModeRole::Signal, t, d, trim + dtr)) / kTwoPi;
    const double ri_r =
        wrap_phase(sys.phase(ModeRole::Idler, t, d, trim + dtr)) / kTwoPi;

    const double j11 = (rs_t - rs) / dt, j12 = (rs_r - rs) / dtr;
    const double j21 = (ri_t - ri) / dt, j22 = (ri_r - ri) / dtr;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) return false;
    t -= (rs * j22 - ri * j12) / det;
    trim -= (ri * j11 - rs * j21) / det;
  }
  return false;
}

struct LinearSolve3 {
  bool ok = false;
  double x0 = 0.0, x1 = 0.0, x2 = 0.0;
};

LinearSolve3 solve3(const double j[3][3], const double r[3]) {
  const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                     j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                     j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
  LinearSolve3 out;
  if (std::abs(det) < 1e-300) return out;
  auto det3 = [](double a0, double a1, double a2, double b0, double b1,
                 double b2, double c0, double c1, double c2) {
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) +
           a2 * (b0 * c1 - b1 * c0);
  };
  out.ok = true;
  out.x0 = det3(r[0], j[0][1], j[0][2], r[1], j[1][1], j[1][2], r[2], j[2][1],
                j[2][2]) / det;
  out.x1 = det3(j[0][0], r[0], j[0][2], j[1][0], r[1], j[1][2], j[2][0], r[2],
                j[2][2]) / det;
  out.x2 = det3(j[0][0], j[0][1], r[0], j[1][0], j[1][1], r[1], j[2][0],
                j[2][1], r[2]) / det;
  return out;
}

bool newton_refine_triple(const CavitySystem& sys, double tol, double& t,
                          double& d, double& trim) {
  const double dt = 1e-5, dd = 1e-9, dtr = 1e-12;
  for (int iter = 0; iter < 40; ++iter) {
    auto residual = [&](double tt, double ddd, double tr) {
      PhaseEval p = phases(sys, tt, ddd, tr);
      return std::array<double, 3>{wrap_phase(p.signal) / kTwoPi,
                                   wrap_phase(p.idler) / kTwoPi,
                                   wrap_phase(p.pump) / kTwoPi};
    };
    const auto r0 = residual(t, d, trim);
    if (std::max({std::abs(r0[0]), std::abs(r0[1]), std::abs(r0[2])}) < tol) {
      return true;
    }
    const auto rt = residual(t + dt, d, trim);
    const auto rd = residual(t, d + dd, trim);
    const auto rr = residual(t, d, trim + dtr);
    double j[3][3], r[3];
    for (int i = 0; i < 3; ++i) {
      j[i][0] = (rt[i] - r0[i]) / dt;
      j[i][1] = (rd[i] - r0[i]) / dd;
      j[i][2] = (rr[i] - r0[i]) / dtr;
      r[i] = r0[i];
    }
    const LinearSolve3 step = solve3(j, r);
    if (!step.ok) {
      throw ModelError("triple-resonance Jacobian is singular at T = " +
                       std::to_string(t) + " C, d = " + std::to_string(d * 1e3) +
                       " mm");
    }
    t -= step.x0;
    d -= step.x1;
    trim -= step.x2;
  }
  return false;
}

ResonanceSolution make_solution(const CavitySystem& sys, double t, double d,
                                double trim, ResonanceClass cls) {
  ResonanceSolution sol;
  sol.temperature_c = t;
  sol.wedge_offset_m = d;
  sol.length_trim_m = trim;
  const PhaseEval p = phases(sys, t, d, trim);
  sol.m_signal = std::llround(p.signal / kTwoPi);
  sol.m_idler = std::llround(p.idler / kTwoPi);
  sol.m_pump = std::llround(p.pump / kTwoPi);
  sol.residual = fractional_detunings(sys, t, d, trim);
  sol.classification = cls;
  return sol;
}

// All (temperature, trim) double-resonance points at fixed d, refined to the
// requested tolerance, ascending in temperature.
std::vector<ResonanceSolution> double_resonances_at(const CavitySystem& sys,
                                                    const SearchDomain& domain,
                                                    double d) {
  const double lambda = sys.signal.vacuum_wavelength_m;
  const double trim_period = 0.5 * lambda;
  if (domain.trim_high_m - domain.trim_low_m < trim_period) {
    throw DomainError("trim range must span at least half a subharmonic "
                      "wavelength");
  }
  const double trim_mid = 0.5 * (domain.trim_low_m + domain.trim_high_m);

  const int steps = std::max(
      8, static_cast<int>(std::ceil((domain.temperature_high_c -
                                     domain.temperature_low_c) /
                                    domain.temperature_step_c)));
  std::vector<double> grid_t(steps + 1), grid_psi(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    grid_t[i] = domain.temperature_low_c +
                (domain.temperature_high_c - domain.temperature_low_c) * i / steps;
    grid_psi[i] = relative_subharmonic_phase(sys, grid_t[i], d, trim_mid);
  }

  const auto [psi_min_it, psi_max_it] =
      std::minmax_element(grid_psi.begin(), grid_psi.end());
  if (*psi_max_it - *psi_min_it < 1e-6) {
    throw ModelError("signal-idler relative phase is constant in temperature "
                     "(identical thermo-optic response); double resonance is "
                     "degenerate");
  }

  std::vector<ResonanceSolution> found;
  for (int i = 0; i < steps; ++i) {
    const double u1 = grid_psi[i], u2 = grid_psi[i + 1];
    const long long k_lo = static_cast<long long>(
        std::ceil(std::min(u1, u2) / kTwoPi - 1e-12));
    const long long k_hi = static_cast<long long>(
        std::floor(std::max(u1, u2) / kTwoPi + 1e-12));
    for (long long k = k_lo; k <= k_hi; ++k) {
      const double target = k * kTwoPi;
      double lo = grid_t[i], hi = grid_t[i + 1];
      double f_lo = u1 - target;
      double f_hi = u2 - target;
      if (std::signbit(f_lo) == std::signbit(f_hi)) continue;
      for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid =
            relative_subharmonic_phase(sys, mid, d, trim_mid) - target;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      double t = 0.5 * (lo + hi);
      double trim = fold_into(trim_for_signal_resonance(sys, t, d, trim_mid),
                              domain.trim_low_m, trim_period);
      if (!newton_refine_double(sys, d, domain.residual_tolerance, t, trim)) {
        continue;
      }
      trim = fold_into(trim, domain.trim_low_m, trim_period);
      if (t < domain.temperature_low_c - 1e-9 ||
          t > domain.temperature_high_c + 1e-9) {
        continue;
      }
      found.push_back(make_solution(sys, t, d, trim, ResonanceClass::Double));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) {
              return a.temperature_c < b.temperature_c;
            });
  return found;
}

}  // namespace

double ResonanceResidual::max_abs() const {
  return std::max({std::abs(signal), std::abs(idler), std::abs(pump)});
}

const char* classification_name(ResonanceClass c) {
  switch (c) {
    case ResonanceClass::Single: return "single";
    case ResonanceClass::Double: return "double";
    case ResonanceClass::Triple: return "triple";
  }
  return "?";
}

ResonanceResidual fractional_detunings(const CavitySystem& sys,
                                       double temperature_c, double d,
                                       double length_trim) {
  const PhaseEval p = phases(sys, temperature_c, d, length_trim);
  return {wrap_phase(p.signal) / kTwoPi, wrap_phase(p.idler) / kTwoPi,
          wrap_phase(p.pump) / kTwoPi};
}

ResonanceSolution solve_double_resonance(const CavitySystem& sys,
                                         const SearchDomain& domain, double d) {
  const std::vector<ResonanceSolution> all = double_resonances_at(sys, domain, d);
  if (all.empty()) {
    throw ModelError("no double-resonance solution in temperature range [" +
                     std::to_string(domain.temperature_low_c) + ", " +
                     std::to_string(domain.temperature_high_c) + "] C");
  }
  const double t_ref = reference_temperature(sys, domain);
  return *std::min_element(all.begin(), all.end(),
                           [t_ref](const auto& a, const auto& b) {
                             return std::abs(a.temperature_c - t_ref) <
                                    std::abs(b.temperature_c - t_ref);
                           });
}

std::vector<ResonanceSolution> find_triple_resonances(
    const CavitySystem& sys, const SearchDomain& domain) {
  if (sys.geometry.crystal.wedge_angle_rad <= 0.0) {
    throw ModelError("degenerate wedge (theta = 0): the wedge offset d has no "
                     "effect on the relative phases");
  }
  if (domain.d_low_m < 0.0 ||
      domain.d_high_m > sys.geometry.crystal.aperture_width_m) {
    throw DomainError("d range outside the crystal aperture");
  }

  // Follow a double-resonance branch to a probe offset d by picking the
  // solution nearest in temperature to the branch's last known temperature.
  auto branch_double = [&](double d, double t_near) {
    const auto all = double_resonances_at(sys, domain, d);
    if (all.empty()) return std::optional<ResonanceSolution>();
    return std::optional<ResonanceSolution>(*std::min_element(
        all.begin(), all.end(), [t_near](const auto& a, const auto& b) {
          return std::abs(a.temperature_c - t_near) <
                 std::abs(b.temperature_c - t_near);
        }));
  };

  const int steps = std::max(
      4, static_cast<int>(std::ceil((domain.d_high_m - domain.d_low_m) /
                                    domain.d_step_m)));
  struct GridPoint {
    double d = 0.0;
    std::vector<ResonanceSolution> doubles;
    std::vector<double> w_pump;
  };
  std::vector<GridPoint> grid(steps + 1);
  double w_min = 0.0, w_max = 0.0;
  bool any_valid = false;
  for (int i = 0; i <= steps; ++i) {
    GridPoint& g = grid[i];
    g.d = domain.d_low_m + (domain.d_high_m - domain.d_low_m) * i / steps;
    g.doubles = double_resonances_at(sys, domain, g.d);
    for (const auto& sol : g.doubles) {
      const double w = wrap_phase(
          sys.phase(ModeRole::Pump, sol.temperature_c, g.d, sol.length_trim_m));
      g.w_pump.push_back(w);
      if (!any_valid) {
        w_min = w_max = w;
        any_valid = true;
      } else {
        w_min = std::min(w_min, w);
        w_max = std::max(w_max, w);
      }
    }
  }
  if (!any_valid) {
    throw ModelError("no double-resonance solution anywhere in the d range; "
                     "cannot search for triple resonance");
  }

  std::vector<ResonanceSolution> solutions;
  for (int i = 0; i < steps; ++i) {
    const GridPoint& a = grid[i];
    const GridPoint& b = grid[i + 1];
    for (std::size_t ia = 0; ia < a.doubles.size(); ++ia) {
      // Continue this double-resonance branch to the next grid point: the
      // partner is the solution nearest in temperature.  A large temperature
      // jump means the branch left the search window between the two grid
      // points, and the pump residual is not continuous across that.
      const double t_a = a.doubles[ia].temperature_c;
      std::size_t ib = b.doubles.size();
      double best_dt = 2.0;
      for (std::size_t j = 0; j < b.doubles.size(); ++j) {
        const double dt = std::abs(b.doubles[j].temperature_c - t_a);
        if (dt < best_dt) {
          best_dt = dt;
          ib = j;
        }
      }
      if (ib == b.doubles.size()) continue;
      const double w_a = a.w_pump[ia];
      const double w_b = b.w_pump[ib];
      if (std::signbit(w_a) == std::signbit(w_b)) continue;
      // A sign change through +-pi is a wrap, not a root.
      if (std::abs(w_a - w_b) > kPi) continue;

      // Bisection on the pump residual along d, re-solving the subharmonic
      // double resonance (same branch) at every probe.
      double lo = a.d, hi = b.d, f_lo = w_a;
      double t_seed = t_a, trim_seed = a.doubles[ia].length_trim_m;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto sol = branch_double(mid, t_seed);
        if (!sol) break;
        t_seed = sol->temperature_c;
        trim_seed = sol->length_trim_m;
        const double f_mid = wrap_phase(sys.phase(ModeRole::Pump, t_seed, mid,
                                                  trim_seed));
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }

      double t = t_seed, d = 0.5 * (lo + hi), trim = trim_seed;
      if (!newton_refine_triple(sys, domain.residual_tolerance, t, d, trim)) {
        continue;
      }
      trim = fold_into(trim, domain.trim_low_m,
                       0.5 * sys.signal.vacuum_wavelength_m);
      // Re-verify after folding (fold shifts every phase by full turns).
      if (fractional_detunings(sys, t, d, trim).max_abs() >
          domain.residual_tolerance) {
        continue;
      }
      if (d < domain.d_low_m - 1e-12 || d > domain.d_high_m + 1e-12) continue;
      if (t < domain.temperature_low_c || t > domain.temperature_high_c) {
        continue;
      }
      const bool duplicate =
          std::any_of(solutions.begin(), solutions.end(), [&](const auto& s) {
            return std::abs(s.wedge_offset_m - d) < 1e-6 &&
                   std::abs(s.temperature_c - t) < 0.1;
          });
      if (!duplicate) {
        solutions.push_back(
            make_solution(sys, t, d, trim, ResonanceClass::Triple));
      }
    }
  }

  if (solutions.empty()) {
    throw ModelError(
        "pump residual has no usable zero crossing in the d range; wrapped "
        "pump phase swept [" + std::to_string(w_min) + ", " +
        std::to_string(w_max) + "] rad");
  }
  std::sort(solutions.begin(), solutions.end(),
            [](const auto& a, const auto& b) {
              return a.wedge_offset_m < b.wedge_offset_m;
            });
  return solutions;
}

ResonanceSolution solve_triple_resonance(const CavitySystem& sys,
                                         const SearchDomain& domain) {
  return find_triple_resonances(sys, domain).front();
}

ResonanceClass classify_scan(const CavitySystem& sys, double temperature_c,
                             double d) {
  const double lambda_s = sys.signal.vacuum_wavelength_m;
  const double lambda_p = sys.pump.vacuum_wavelength_m;
  const double fsr_trim = 0.5 * lambda_s;  // one subharmonic FSR in trim

  auto resonant_trim = [&](ModeRole role) {
    const double lambda = sys.mode(role).vacuum_wavelength_m;
    const double w = wrap_phase(sys.phase(role, temperature_c, d, 0.0));
    return fold_into(-w * lambda / (4.0 * kPi), 0.0, 0.5 * lambda);
  };

  const double trim_s = resonant_trim(ModeRole::Signal);
  const double trim_i = resonant_trim(ModeRole::Idler);
  const double trim_p = resonant_trim(ModeRole::Pump);

  const double width_sub =
      fsr_trim / finesse(sys.subharmonic_coupling.total_transmissivity(),
                         sys.subharmonic_coupling.intracavity_loss);
  const double width_pump =
      (0.5 * lambda_p) / finesse(sys.pump_coupling.total_transmissivity(),
                                 sys.pump_coupling.intracavity_loss);

  if (circular_distance(trim_s, trim_i, fsr_trim) >= width_sub) {
    return ResonanceClass::Single;
  }
  const double sub_peak = 0.5 * (trim_s + trim_i);
  // Pump resonances recur every lambda_p / 2 in trim.
  double pump_sep = circular_distance(sub_peak, trim_p, 0.5 * lambda_p);
  if (pump_sep < std::max(width_sub, width_pump)) {
    return ResonanceClass::Triple;
  }
  return ResonanceClass::Double;
}

}  // namespace nopa
