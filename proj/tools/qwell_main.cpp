// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qwell/experiments.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qwell: desk-scale spectral and dynamical checks for "
               "qubit-to-Schrodinger-operator reductions"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = ".";
  auto* run = app.add_subcommand("run", "run experiments from a JSON spec");
  run->add_option("spec", spec_path, "experiment spec (JSON)")->required();
  run->add_option("-o,--output-dir", out_dir, "report directory");

  std::string val_path;
  auto* validate = app.add_subcommand("validate", "schema-check a spec without computing");
  validate->add_option("spec", val_path, "experiment spec (JSON)")->required();

  std::string enc_base, csv_out = "plot.csv";
  auto* plot = app.add_subcommand("plot-data", "export eigenfunction CSV from an encoding dump");
  plot->add_option("encoding", enc_base, "encoding base path (from a reduce run, without extension)")
      ->required();
  plot->add_option("-o,--output", csv_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      qwell::RunManifest manifest = qwell::run_experiments(slurp(spec_path), out_dir);
      for (const auto& o : manifest.outcomes)
        std::cout << (o.verdict ? "[pass] " : "[FAIL] ") << o.name << " (" << o.kind
                  << "): " << o.summary << "\n";
      std::cout << "manifest: " << out_dir << "/manifest.json\n";
      return manifest.all_pass() ? 0 : 1;
    }
    if (*validate) {
      qwell::validate_spec(slurp(val_path));
      std::cout << "spec ok\n";
      return 0;
    }
    if (*plot) {
      std::string written = qwell::emit_plotdata(enc_base, csv_out);
      std::cout << "wrote " << written << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
