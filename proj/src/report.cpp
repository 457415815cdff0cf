#include "cubexp/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cubexp::report {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void RunReport::add_config(const std::string& key, const std::string& value) {
  config_.emplace_back(key, value);
}

void RunReport::add_config(const std::string& key, double value) {
  config_.emplace_back(key, format_double(value));
}

void RunReport::add_config(const std::string& key, std::uint64_t value) {
  config_.emplace_back(key, std::to_string(value));
}

void RunReport::add_check(CheckRecord record) {
  checks_.push_back(std::move(record));
}

bool RunReport::all_pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command_;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config_) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json rec;
    rec["name"] = c.name;
    rec["observed"] = c.observed;
    rec["threshold"] = c.threshold;
    rec["pass"] = c.pass;
    if (!c.note.empty()) rec["note"] = c.note;
    checks.push_back(rec);
  }
  j["checks"] = checks;
  j["pass"] = all_pass();
  return j.dump(2) + "\n";
}

void RunReport::write_json(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json();
}

namespace {

std::string csv_quote(const std::string& cell) {
  const bool needs = cell.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvWriter: row width mismatch");
  }
  rows_.push_back(cells);
}

std::string CsvWriter::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(header_[i]);
  }
  out += "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_quote(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_string();
}

void CsvWriter::write_plot_stub(const std::string& path,
                                const std::string& title) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# " << title << "\n";
  out << "# Columns:";
  for (std::size_t i = 0; i < header_.size(); ++i) {
    out << (i ? ", " : " ") << (i + 1) << "=" << header_[i];
  }
  out << "\n";
  out << "# gnuplot: set datafile separator ','; plot '<data.csv>' using 1:2 skip 1\n";
  out << "# python : import csv; rows = list(csv.DictReader(open('<data.csv>')))\n";
}

}  // namespace cubexp::report
