#include "nopa/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nopa {

namespace {

constexpr double kLambdaLowUm = 0.4;
constexpr double kLambdaHighUm = 1.5;
constexpr double kTempLowC = 0.0;
constexpr double kTempHighC = 200.0;

}  // namespace

const char* axis_name(CrystalAxis axis) {
  switch (axis) {
    case CrystalAxis::X: return "x";
    case CrystalAxis::Y: return "y";
    case CrystalAxis::Z: return "z";
  }
  return "?";
}

CrystalAxis axis_from_name(const std::string& name) {
  if (name == "x") return CrystalAxis::X;
  if (name == "y") return CrystalAxis::Y;
  if (name == "z") return CrystalAxis::Z;
  throw DomainError("unknown crystal axis '" + name + "' (expected x, y or z)");
}

const char* role_name(ModeRole role) {
  switch (role) {
    case ModeRole::Signal: return "signal";
    case ModeRole::Idler: return "idler";
    case ModeRole::Pump: return "pump";
  }
  return "?";
}

double SellmeierSet::index_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  double n2 = constant + lambda2_coefficient * l2;
  for (const auto& r : resonances) n2 += r.numerator / (l2 - r.center_um2);
  return n2;
}

double SellmeierSet::index(double lambda_um) const {
  const double n2 = index_squared(lambda_um);
  if (n2 <= 0.0) {
    throw DomainError("Sellmeier fit for axis " + std::string(axis_name(axis)) +
                      " gives non-physical n^2 at lambda = " +
                      std::to_string(lambda_um) + " um");
  }
  return std::sqrt(n2);
}

double SellmeierSet::dn_dT(double lambda_um) const {
  double slope = 0.0;
  double inv_pow = 1.0;
  for (double c : thermo_optic) {
    slope += c * inv_pow;
    inv_pow /= lambda_um;
  }
  return slope;
}

const SellmeierSet& DispersionModel::set(CrystalAxis axis) const {
  return sets[static_cast<int>(axis)];
}

double refractive_index(const DispersionModel& model, CrystalAxis axis,
                        double lambda_m, double temperature_c) {
  const double lambda_um = lambda_m * 1e6;
  if (!(lambda_um >= kLambdaLowUm && lambda_um <= kLambdaHighUm)) {
    throw DomainError("wavelength " + std::to_string(lambda_um) +
                      " um outside the dispersion fit window [0.4, 1.5] um");
  }
  if (!(temperature_c >= kTempLowC && temperature_c <= kTempHighC)) {
    throw DomainError("temperature " + std::to_string(temperature_c) +
                      " C outside the dispersion fit window [0, 200] C");
  }
  const SellmeierSet& s = model.set(axis);
  return s.index(lambda_um) +
         s.dn_dT(lambda_um) * (temperature_c - model.reference_temperature_c);
}

PhaseMatchingResult phase_matching_temperature(const DispersionModel& model,
                                               const OpticalMode& signal,
                                               const OpticalMode& idler,
                                               const OpticalMode& pump,
                                               double window_low_c,
                                               double window_high_c) {
  if (signal.vacuum_wavelength_m != idler.vacuum_wavelength_m) {
    throw DomainError("phase matching assumes degenerate subharmonics");
  }
  if (std::abs(pump.vacuum_wavelength_m - 0.5 * signal.vacuum_wavelength_m) >
      1e-15) {
    throw DomainError("pump wavelength must be half the subharmonic wavelength");
  }
  if (signal.polarization_axis == idler.polarization_axis) {
    throw DomainError("type-II interaction needs orthogonal signal/idler axes");
  }

  auto mismatch = [&](double t) {
    const double np =
        refractive_index(model, pump.polarization_axis, pump.vacuum_wavelength_m, t);
    const double ns = refractive_index(model, signal.polarization_axis,
                                       signal.vacuum_wavelength_m, t);
    const double ni = refractive_index(model, idler.polarization_axis,
                                       idler.vacuum_wavelength_m, t);
    return np - 0.5 * (ns + ni);
  };

  // Coarse scan for a sign change; also catches a flat (temperature
  // independent) mismatch, which has either no root or infinitely many.
  constexpr int kScanPoints = 257;
  double prev_t = window_low_c;
  double prev_dn = mismatch(prev_t);
  double dn_min = prev_dn, dn_max = prev_dn;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i < kScanPoints; ++i) {
    const double t = window_low_c +
                     (window_high_c - window_low_c) * i / (kScanPoints - 1);
    const double dn = mismatch(t);
    dn_min = std::min(dn_min, dn);
    dn_max = std::max(dn_max, dn);
    if (!bracketed && std::signbit(dn) != std::signbit(prev_dn)) {
      lo = prev_t;
      hi = t;
      bracketed = true;
    }
    prev_t = t;
    prev_dn = dn;
  }

  if (dn_max - dn_min < 1e-12) {
    throw ModelError(
        "phase-matching mismatch is temperature independent (flat dn = " +
        std::to_string(dn_min) + "); condition is degenerate");
  }
  if (!bracketed) {
    throw ModelError("no phase-matching point: dn has no sign change in [" +
                     std::to_string(window_low_c) + ", " +
                     std::to_string(window_high_c) + "] C (dn range [" +
                     std::to_string(dn_min) + ", " + std::to_string(dn_max) +
                     "])");
  }

  PhaseMatchingResult result;
  result.bracket_low_c = lo;
  result.bracket_high_c = hi;
  double f_lo = mismatch(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(mid);
    if (std::abs(f_mid) < 1e-9 || hi - lo < 1e-12) {
      result.temperature_c = mid;
      return result;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  result.temperature_c = 0.5 * (lo + hi);
  return result;
}

namespace {

SellmeierSet parse_axis_entry(const nlohmann::json& entry) {
  SellmeierSet s;
  s.axis = axis_from_name(entry.at("axis").get<std::string>());
  const auto& fit = entry.at("sellmeier");
  s.constant = fit.at("constant").get<double>();
  for (const auto& r : fit.at("resonances")) {
    s.resonances.push_back(
        {r.at("numerator").get<double>(), r.at("center_um2").get<double>()});
  }
  s.lambda2_coefficient = fit.value("lambda2_coefficient", 0.0);
  s.thermo_optic = entry.at("thermo_optic").get<std::vector<double>>();
  return s;
}

void validate_set(const SellmeierSet& s) {
  // Index must stay physical and normally dispersive over the fit window.
  double prev_n = 0.0;
  for (int i = 0; i <= 110; ++i) {
    const double lambda = kLambdaLowUm + (kLambdaHighUm - kLambdaLowUm) * i / 110.0;
    const double n = s.index(lambda);
    if (!(n > 1.0 && n < 3.0)) {
      throw DomainError("dispersion set for axis " +
                        std::string(axis_name(s.axis)) + " gives n = " +
                        std::to_string(n) + " at " + std::to_string(lambda) +
                        " um (must be in (1, 3))");
    }
    if (i > 0 && n >= prev_n) {
      throw DomainError("dispersion set for axis " +
                        std::string(axis_name(s.axis)) +
                        " is not normally dispersive near " +
                        std::to_string(lambda) + " um");
    }
    prev_n = n;
  }
}

}  // namespace

DispersionModel parse_dispersion_model(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed dispersion JSON: ") + e.what());
  }

  DispersionModel model;
  try {
    model.reference_temperature_c = doc.at("reference_temperature_c").get<double>();
    model.source = doc.value("source", std::string());
    std::array<bool, 3> seen = {false, false, false};
    for (const auto& entry : doc.at("axes")) {
      SellmeierSet s = parse_axis_entry(entry);
      const int idx = static_cast<int>(s.axis);
      if (seen[idx]) {
        throw DomainError("dispersion file lists axis " +
                          std::string(axis_name(s.axis)) + " twice");
      }
      seen[idx] = true;
      validate_set(s);
      model.sets[idx] = s;
    }
    if (!(seen[0] && seen[1] && seen[2])) {
      throw DomainError("dispersion file must contain all three axes x, y, z");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("invalid dispersion file: ") + e.what());
  }
  if (!(model.reference_temperature_c >= kTempLowC &&
        model.reference_temperature_c <= kTempHighC)) {
    throw DomainError("reference_temperature_c out of range [0, 200]");
  }
  return model;
}

DispersionModel load_dispersion_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dispersion file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dispersion_model(buf.str());
}

}  // namespace nopa
