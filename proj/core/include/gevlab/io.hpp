#pragma once

// Flat-file outputs: CSV with 17 significant digits, JSON records, a
// git-style content hash and a raw little-endian matrix dump.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gevlab/audits.hpp"
#include "gevlab/cjs.hpp"
#include "gevlab/constraints.hpp"
#include "gevlab/energy.hpp"

namespace gevlab {

using Json = nlohmann::ordered_json;

/// "{:.17g}"
std::string format_double(double v);

std::string energy_csv(const std::vector<EnergyBreakdown>& rows);
std::string growth_csv(const GrowthFit& fit);
std::string constraint_csv(const std::vector<ConstraintRecord>& table);
std::string audit_csv(const std::vector<AuditRecord>& records);

Json to_json(const AuditRecord& r);
Json to_json(const std::vector<AuditRecord>& records);
/// {k, slope, intercept, residual, pass}
Json to_json(const GrowthFit& fit);

/// sha1 over "blob <len>\0" + content, lower-case hex.
std::string git_blob_hash(std::string_view content);

/// Row-major complex doubles (re, im), little-endian, no header.
void write_matrix_dump(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix_dump(const std::filesystem::path& path, Eigen::Index rows,
                         Eigen::Index cols);

void write_text(const std::filesystem::path& path, std::string_view content);
/// Two-space indentation plus a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace gevlab
