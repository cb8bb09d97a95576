#include "dirlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dirlab {

CantorSpec cantor_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("Cantor set spec must be a JSON object");
  double a0 = j.value("a0", kPi);
  CantorSpec spec;
  if (j.contains("ratios")) {
    if (j.contains("ratio")) throw InvalidArgument("give either \"ratios\" or \"ratio\", not both");
    spec.a0 = a0;
    spec.ratios = j.at("ratios").get<std::vector<double>>();
  } else if (j.contains("ratio")) {
    if (!j.contains("depth")) throw InvalidArgument("\"ratio\" needs \"depth\"");
    int depth = j.at("depth").get<int>();
    if (depth < 0) throw InvalidArgument("depth must be nonnegative");
    spec = CantorSpec::geometric(a0, j.at("ratio").get<double>(), depth);
  } else {
    throw InvalidArgument("Cantor set spec needs \"ratios\" or \"ratio\"");
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const CantorSpec& spec) { return {{"a0", spec.a0}, {"ratios", spec.ratios}}; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot write " + path.string() + ": " + ec.message());
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
  auto probe = dir / ".dirlab_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw std::runtime_error("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

void write_modulus_csv(const std::filesystem::path& path, const BoundaryModulus& m) {
  CsvWriter csv({"theta", "logmod"});
  for (std::size_t k = 0; k < m.grid().size(); ++k) csv.row(std::vector<double>{m.grid().angle(k), m.logmod()[k]});
  write_file(path, csv.str());
}

BoundaryModulus read_modulus_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::string line;
  std::vector<double> theta, logmod;
  bool header = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.find_first_of("0123456789") == std::string::npos) continue;
    }
    std::istringstream in(line);
    std::string a, b;
    if (!std::getline(in, a, ',') || !std::getline(in, b)) throw InvalidArgument("malformed CSV line: " + line);
    auto parse = [&](const std::string& s) {
      try {
        return std::stod(s);
      } catch (const std::exception&) {
        throw InvalidArgument("malformed number in CSV: " + s);
      }
    };
    theta.push_back(parse(a));
    logmod.push_back(parse(b));
  }
  if (theta.size() < 4) throw InvalidArgument("modulus CSV needs at least 4 samples");
  CircleGrid grid(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (std::abs(theta[k] - grid.angle(k)) > 1e-9) {
      throw InvalidArgument("theta column must be the uniform grid 2 pi k / n (row " + std::to_string(k) + ")");
    }
  }
  return BoundaryModulus(grid, std::move(logmod));
}

}  // namespace dirlab
