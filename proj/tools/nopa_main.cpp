// CLI front end; talks to the library exclusively through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "nopa.h"

namespace {

struct ConfigDeleter {
  void operator()(nopa_config* cfg) const { nopa_config_free(cfg); }
};
using ConfigPtr = std::unique_ptr<nopa_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { nopa_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

int fail(nopa_status status) {
  std::cerr << "error: " << nopa_last_error() << '\n';
  return status == NOPA_ERR_MODEL ? 2 : 1;
}

int write_output(const char* text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple-resonant NOPA design and simulation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // allow `nopa design --config ...` ordering

  std::string config_path;
  std::string out_path;
  app.add_option("--config", config_path, "Device configuration JSON")
      ->required();
  app.add_option("--out", out_path, "Write the result to a file instead of stdout");

  auto* design = app.add_subcommand(
      "design", "Solve the double- and triple-resonance operating point");

  double f_min = 0.0, f_max = 20e6;
  int points = 201;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Quadrature variance spectrum vs analysis frequency (CSV)");
  spectrum->add_option("--fmin", f_min, "Lowest analysis frequency [Hz]");
  spectrum->add_option("--fmax", f_max, "Highest analysis frequency [Hz]");
  spectrum->add_option("--points", points, "Number of frequency samples");

  std::string threshold_mode = "resonant";
  auto* threshold = app.add_subcommand(
      "threshold", "Oscillation threshold, pump buildup and chi (JSON)");
  threshold->add_option("--mode", threshold_mode,
                        "resonant or nonresonant pump cavity");

  std::string stage = "triple";
  auto* scan = app.add_subcommand(
      "scan", "Cavity-length scan transmission traces (CSV)");
  scan->add_option("--stage", stage, "single, double or triple resonance");

  std::string quadrature = "x";
  auto* noise = app.add_subcommand(
      "noise", "Spectrum-analyzer noise traces with SNL/ENL references (CSV)");
  noise->add_option("--quadrature", quadrature, "x (amplitude) or y (phase)");

  CLI11_PARSE(app, argc, argv);

  ConfigPtr cfg(nopa_config_load(config_path.c_str()));
  if (!cfg) {
    std::cerr << "error: " << nopa_last_error() << '\n';
    return 1;
  }

  char* raw = nullptr;
  if (design->parsed()) {
    const nopa_status st = nopa_cmd_design(cfg.get(), &raw);
    if (st != NOPA_OK) return fail(st);
    return write_output(StringPtr(raw).get(), out_path);
  }
  if (spectrum->parsed()) {
    const nopa_status st =
        nopa_cmd_spectrum(cfg.get(), f_min, f_max, points, &raw);
    if (st != NOPA_OK) return fail(st);
    return write_output(StringPtr(raw).get(), out_path);
  }
  if (threshold->parsed()) {
    const nopa_status st =
        nopa_cmd_threshold(cfg.get(), threshold_mode.c_str(), &raw);
    if (st != NOPA_OK) return fail(st);
    return write_output(StringPtr(raw).get(), out_path);
  }
  if (scan->parsed()) {
    const nopa_status st = nopa_cmd_scan(cfg.get(), stage.c_str(), &raw);
    if (st != NOPA_OK) return fail(st);
    return write_output(StringPtr(raw).get(), out_path);
  }
  if (noise->parsed()) {
    char* stats = nullptr;
    const nopa_status st =
        nopa_cmd_noise(cfg.get(), quadrature.c_str(), &raw, &stats);
    if (st != NOPA_OK) return fail(st);
    StringPtr stats_owner(stats);
    std::cerr << stats_owner.get();
    return write_output(StringPtr(raw).get(), out_path);
  }
  return 1;
}
