#include "nexlab/bounds/report_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "nexlab/core/error.hpp"

namespace nexlab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw InternalError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json report_to_json(const BoundReport& r) {
  return nlohmann::json{{"check", to_string(r.check)}, {"lhs", r.lhs},         {"rhs", r.rhs},
                        {"slack", r.slack},            {"tol_budget", r.tol_budget}, {"verdict", to_string(r.verdict)},
                        {"context", r.context}};
}

std::string reports_to_json_text(std::span<const BoundReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(std::span<const BoundReport> reports) {
  std::string out = "check,lhs,rhs,slack,tol_budget,verdict,context\n";
  for (const auto& r : reports) {
    out += to_string(r.check);
    for (double v : {r.lhs, r.rhs, r.slack, r.tol_budget}) out += "," + format_double(v);
    out += ",";
    out += to_string(r.verdict);
    out += "," + csv_field(r.context.dump()) + "\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

}  // namespace nexlab
