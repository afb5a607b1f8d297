#include "gevlab/io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gevlab/error.hpp"

namespace gevlab {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string energy_csv(const std::vector<EnergyBreakdown>& rows) {
  std::string out = "t,tau,E,E1,E2,E3,E4,r2,r3,r4\n";
  for (const auto& r : rows) {
    for (double v : {r.t, r.tau, r.E, r.E1, r.E2, r.E3, r.E4, r.r2, r.r3}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.r4);
    out += '\n';
  }
  return out;
}

std::string growth_csv(const GrowthFit& fit) {
  std::string out = "xi,eps,G,steps\n";
  for (const auto& r : fit.rows) {
    out += fmt::format("{},{},{},{}\n", format_double(r.xi), format_double(r.eps),
                       format_double(r.G), r.steps);
  }
  return out;
}

std::string constraint_csv(const std::vector<ConstraintRecord>& table) {
  std::string out = "sigma,c,nu";
  for (const char* name : kConstraintNames) out += fmt::format(",{}", name);
  out += ",feasible\n";
  for (const auto& r : table) {
    out += fmt::format("{},{},{}", format_double(to_double(r.sigma)), format_double(to_double(r.c)),
                       r.nu);
    for (std::size_t i = 0; i < r.slack.size(); ++i) {
      // inactive constraints are left empty
      out += r.active[i] ? "," + format_double(to_double(r.slack[i])) : std::string(",");
    }
    out += r.feasible ? ",1\n" : ",0\n";
  }
  return out;
}

std::string audit_csv(const std::vector<AuditRecord>& records) {
  std::string out = "check,constant,pass,witness\n";
  for (const auto& r : records) {
    std::string w;
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      if (i) w += ' ';
      w += format_double(r.witness[i]);
    }
    out += fmt::format("{},{},{},{}\n", r.check, format_double(r.constant), r.pass ? 1 : 0, w);
  }
  return out;
}

Json to_json(const AuditRecord& r) {
  Json j;
  j["check"] = r.check;
  // JSON has no inf/nan; keep them readable
  if (std::isfinite(r.constant)) {
    j["constant"] = r.constant;
  } else {
    j["constant"] = format_double(r.constant);
  }
  j["witness"] = r.witness;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const std::vector<AuditRecord>& records) {
  Json a = Json::array();
  for (const auto& r : records) a.push_back(to_json(r));
  return a;
}

Json to_json(const GrowthFit& fit) {
  return Json{{"k", fit.k},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"residual", fit.residual},
              {"pass", fit.pass}};
}

std::string git_blob_hash(std::string_view content) {
  std::string header = fmt::format("blob {}", content.size());
  header.push_back('\0');
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha1 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

void put_le(std::ofstream& os, double v) {
  static_assert(sizeof(double) == 8);
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double get_le(std::ifstream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw Error("matrix dump is truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_matrix_dump(const std::filesystem::path& path, const CMatrix& m) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(fmt::format("cannot open {} for writing", path.string()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_le(os, m(i, j).real());
      put_le(os, m(i, j).imag());
    }
  }
  if (!os) throw Error(fmt::format("write to {} failed", path.string()));
}

CMatrix read_matrix_dump(const std::filesystem::path& path, Eigen::Index rows,
                         Eigen::Index cols) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(fmt::format("cannot open {}", path.string()));
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = get_le(is);
      const double im = get_le(is);
      m(i, j) = {re, im};
    }
  }
  return m;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(fmt::format("cannot open {} for writing", path.string()));
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error(fmt::format("write to {} failed", path.string()));
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace gevlab
