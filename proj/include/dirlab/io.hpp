#pragma once

// JSON and CSV plumbing shared by the command-line front end.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dirlab/cantor.hpp"
#include "dirlab/outer.hpp"

namespace dirlab {

// {"a0": x, "ratios": [...]} or {"a0": x, "ratio": r, "depth": n}; a0 defaults to pi.
CantorSpec cantor_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CantorSpec& spec);

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

// Writes atomically enough for our purposes (temporary file, then rename).
// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);

// Creates the directory if needed and checks that a file can be written in it.
void ensure_writable_dir(const std::filesystem::path& dir);

// Two columns theta,logmod with a header line; theta must be the uniform grid 2 pi k / n.
void write_modulus_csv(const std::filesystem::path& path, const BoundaryModulus& m);
BoundaryModulus read_modulus_csv(const std::filesystem::path& path);

}  // namespace dirlab
