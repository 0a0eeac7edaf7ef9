// Copyright 2026 The qwell Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qwell/linalg.hpp"

namespace qwell {

inline constexpr const char* kToolVersion = "0.1.0";

/// One named experiment with a kind-specific JSON payload. Supported kinds:
/// spectrum-1d, reduce, verify-spectrum, verify-dynamics, stoq-embed,
/// tim-embed, pert-suite, gap-law, sdg-sim.
struct ExperimentSpec {
  std::string name;
  std::string kind;
  std::string payload;  // JSON text
};

struct ExperimentOutcome {
  std::string name;
  std::string kind;
  bool verdict = false;
  double wall_ms = 0;
  std::vector<std::string> report_files;
  std::string summary;  // one-line human text
};

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  unsigned seed = 0;
  std::vector<ExperimentOutcome> outcomes;
  bool all_pass() const;
  std::string to_json(bool with_timestamp = true) const;
};

/// Parse a spec file: either one experiment object or
/// {"experiments": [...], "seed": ...}.
std::vector<ExperimentSpec> parse_spec(const std::string& json_text,
                                       unsigned* seed_out = nullptr);

/// Validate without computing; throws std::invalid_argument on schema errors.
void validate_spec(const std::string& json_text);

/// Run all experiments; reports are written under output_dir atomically
/// (tmp file + rename). Deterministic given (spec, seed).
RunManifest run_experiments(const std::string& json_text,
                            const std::string& output_dir);

/// Plot-data export: reads an encoding dump produced by `reduce`/`gap-law`
/// (JSON + vector binaries) and writes a CSV of (x, psi0, psi1, psi_right).
std::string emit_plotdata(const std::string& encoding_base,
                          const std::string& out_csv);

/// FNV-1a hash of canonicalized JSON, for the manifest.
std::string config_hash(const std::string& json_text);

}  // namespace qwell
