#pragma once

// Bundled audits behind `audit symbols|metric|quantizer`. Each returns one
// AuditRecord per check.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "gevlab/audits.hpp"

namespace gevlab {

struct SymbolSuiteParams {
  CoefficientParams coeff;
  double c = 1.0;
  std::size_t n = 256;   // xi lattice of this grid
  int nt = 5;            // times in [0, T]
  int nx = 41;           // points across B_r(x0)
  double stability = 0.1;  // allowed relative drift under 2x refinement
};

std::vector<AuditRecord> symbol_audit_suite(const SymbolSuiteParams& p);

struct MetricSuiteParams {
  CoefficientParams coeff;
  double c = 1.0;
  std::size_t pairs = 10'000;
  double xi_max = 64.0;
  double r = 0.1;
  std::uint64_t seed = 7;
};

std::vector<AuditRecord> metric_audit_suite(const MetricSuiteParams& p);

struct QuantizerSuiteParams {
  CoefficientParams coeff;
  double c = 0.5;                          // composition check (needs c < 1 to shrink)
  std::vector<std::size_t> ladder{128, 256, 512};
  double t = 0.0;
  double c_invert = 1.0;
  std::size_t n_invert = 128;
  int nu = 2;
  std::uint64_t seed = 11;
};

/// With dump_dir set, op(b) on the first ladder grid is written there as
/// op_b.bin (row-major complex doubles, little-endian).
std::vector<AuditRecord> quantizer_audit_suite(
    const QuantizerSuiteParams& p,
    const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

bool all_pass(const std::vector<AuditRecord>& records);

}  // namespace gevlab
