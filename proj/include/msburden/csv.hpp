#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "msburden/errors.hpp"
#include "msburden/types.hpp"

// Canonical wide dataset format: one row per subject,
//   subject_id,arm,x_<label_1>,..,x_<label_K+1>,d_<label_1>,..,d_<label_K+1>
// The header carries the state labels in severity order, so the state space
// is recovered from the file alone. Numbers are written with shortest
// round-trip formatting and parsed back bit-exactly.

namespace msburden {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(const std::string& token, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error(errc::parse_error,
                "line " + std::to_string(line_no) + ": not a number: '" + token + "'");
  return v;
}

inline long parse_int(const std::string& token, std::size_t line_no) {
  long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error(errc::parse_error,
                "line " + std::to_string(line_no) + ": not an integer: '" + token + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream ss(line);
  while (std::getline(ss, token, ',')) out.push_back(token);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline void check_label_csv_safe(const std::string& label) {
  if (label.empty() || label.find_first_of(",\r\n\"") != std::string::npos ||
      label.front() == ' ' || label.back() == ' ')
    throw Error(errc::invalid_config, "state label not usable in a CSV header: '" + label + "'");
}

}  // namespace detail

inline void write_dataset_csv(std::ostream& os, const ArmDataset& treated,
                              const ArmDataset& control) {
  if (!(treated.state_space == control.state_space))
    throw Error(errc::state_space_mismatch, "arms use different state spaces");
  const auto& labels = treated.state_space.labels;
  for (const auto& l : labels) detail::check_label_csv_safe(l);

  os << "subject_id,arm";
  for (const auto& l : labels) os << ",x_" << l;
  for (const auto& l : labels) os << ",d_" << l;
  os << "\n";
  for (const ArmDataset* arm : {&treated, &control}) {
    for (const auto& r : arm->subjects) {
      os << r.subject_id << ',' << r.arm;
      for (double x : r.x) os << ',' << format_number(x);
      for (int d : r.delta) os << ',' << d;
      os << "\n";
    }
  }
}

inline void write_dataset_csv(const std::string& path, const ArmDataset& treated,
                              const ArmDataset& control) {
  std::ofstream os(path, std::ios::binary);  // binary: identical bytes on any platform
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_dataset_csv(os, treated, control);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

struct IngestResult {
  ArmDataset treated;
  ArmDataset control;
};

inline IngestResult ingest_csv(std::istream& is, const std::string& origin = "<stream>") {
  std::string line;
  if (!std::getline(is, line))
    throw Error(errc::parse_error, origin + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = detail::split_csv_line(line);
  if (header.size() < 4 || header[0] != "subject_id" || header[1] != "arm" ||
      header.size() % 2 != 0)
    throw Error(errc::header_mismatch,
                "expected header subject_id,arm,x_<label>...,d_<label>...");
  const std::size_t m = (header.size() - 2) / 2;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m; ++k) {
    const std::string& xcol = header[2 + k];
    const std::string& dcol = header[2 + m + k];
    if (xcol.rfind("x_", 0) != 0 || dcol.rfind("d_", 0) != 0 || xcol.substr(2) != dcol.substr(2))
      throw Error(errc::header_mismatch,
                  "columns " + std::to_string(k + 3) + " and " + std::to_string(k + 3 + m) +
                      " must pair x_<label> with d_<label>");
    labels.push_back(xcol.substr(2));
  }
  const StateSpace space = StateSpace::make(labels);

  std::vector<SubjectRecord> treated, control;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate a trailing blank line
    std::vector<std::string> tok = detail::split_csv_line(line);
    if (tok.size() != header.size())
      throw Error(errc::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " fields, got " +
                                         std::to_string(tok.size()));
    SubjectRecord r;
    r.subject_id = tok[0];
    r.arm = static_cast<int>(detail::parse_int(tok[1], line_no));
    r.x.reserve(m);
    r.delta.reserve(m);
    for (std::size_t k = 0; k < m; ++k) r.x.push_back(detail::parse_double(tok[2 + k], line_no));
    for (std::size_t k = 0; k < m; ++k)
      r.delta.push_back(static_cast<int>(detail::parse_int(tok[2 + m + k], line_no)));

    ValidationResult v = validate_subject(r, space);
    if (!v)
      throw Error(errc::validation_error, "line " + std::to_string(line_no) + ", subject '" +
                                              r.subject_id + "': " + errc_name(v.code) + ": " +
                                              v.detail);
    (r.arm == 1 ? treated : control).push_back(std::move(r));
  }

  return IngestResult{ArmDataset::make(1, space, std::move(treated)),
                      ArmDataset::make(0, space, std::move(control))};
}

inline IngestResult ingest_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(errc::parse_error, "cannot open: " + path);
  return ingest_csv(is, path);
}

}  // namespace msburden
