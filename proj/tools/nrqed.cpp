// nrqed: command-line front end.
//
//   nrqed verify    [-c config] [--workers N]
//   nrqed evolve    [-c config] [-o file]
//   nrqed spectrum  [-c config] [--workers N] [-o file]
//   nrqed modes     [-c config] [-o file]
//   nrqed export-h  [-c config] [--workers N] [-o file]
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 numerical failure.

#include "CLI11.hpp"

#include "nrqed/commands.hpp"
#include "nrqed/heap.hpp"

#include <fstream>
#include <iostream>

namespace {

enum Exit { ok = 0, verify_failed = 1, config_error = 2, numerical_error = 3 };

}  // namespace

int main(int argc, char** argv) {
  nrqed::tune_heap();

  CLI::App app{"Semiclassical and quantized nonrelativistic QED in a periodic box"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_path;
  int workers = 1;
  auto add_common = [&](CLI::App* sub, bool parallel) {
    sub->add_option("-c,--config", config_path, "INI configuration file (built-in defaults if omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_path, "write results here instead of standard output");
    if (parallel) sub->add_option("-w,--workers", workers, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  };
  auto* verify = app.add_subcommand("verify", "run the invariant suite and print a pass/fail table");
  auto* evolve = app.add_subcommand("evolve", "semiclassical run; prints a diagnostics stream");
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of the quantized Hamiltonian");
  auto* modes = app.add_subcommand("modes", "photon mode table");
  auto* export_h = app.add_subcommand("export-h", "Hamiltonian matrix as text");
  add_common(verify, true);
  add_common(evolve, false);
  add_common(spectrum, true);
  add_common(modes, false);
  add_common(export_h, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    const nrqed::Config config = config_path.empty() ? nrqed::Config{} : nrqed::load_config(config_path);
    nrqed::validate(config);
    std::ofstream file;
    if (!output_path.empty()) {
      file.open(output_path);
      if (!file) throw nrqed::ConfigError("cannot open output file " + output_path);
    }
    std::ostream& out = output_path.empty() ? std::cout : file;

    if (*verify) {
      const auto checks = nrqed::run_verify(config, workers);
      nrqed::write_checks(out, checks);
      for (const auto& c : checks)
        if (!c.passed) return verify_failed;
    } else if (*evolve) {
      nrqed::run_evolve(config, out);
    } else if (*spectrum) {
      nrqed::write_spectrum(out, nrqed::run_spectrum(config, workers));
    } else if (*modes) {
      nrqed::write_modes(out, config);
    } else if (*export_h) {
      nrqed::run_export(config, out, workers);
    }
    out.flush();
    if (!out) throw nrqed::NumericalError("failed to write output");
    return ok;
  } catch (const nrqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const nrqed::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const nrqed::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical_error;
  }
}
