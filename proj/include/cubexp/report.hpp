// Machine-readable run reports: a JSON summary carrying the tool version,
// the fully resolved configuration, and one record per check (name,
// observed value, threshold, pass flag), plus RFC-4180 CSV grids for
// per-sample data. Key order and float formatting are deterministic so
// byte-identical reruns are testable.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cubexp::report {

inline constexpr const char* kToolName = "cubexp";
inline constexpr const char* kToolVersion = "0.1.0";

struct CheckRecord {
  std::string name;
  double observed = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void add_config(const std::string& key, const std::string& value);
  void add_config(const std::string& key, double value);
  void add_config(const std::string& key, std::uint64_t value);
  void add_check(CheckRecord record);

  bool all_pass() const;
  const std::vector<CheckRecord>& checks() const { return checks_; }

  std::string to_json() const;
  void write_json(const std::string& path) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<CheckRecord> checks_;
};

// Round-trip-exact decimal rendering of a double.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  std::string to_string() const;
  void write(const std::string& path) const;
  // Companion plotting stub naming the columns; plotter-agnostic.
  void write_plot_stub(const std::string& path, const std::string& title) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cubexp::report
