#include "openchain/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "openchain/errors.hpp"

namespace openchain {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const TrajectoryRecord& record, const std::filesystem::path& path) {
  if (record.empty()) throw ConfigError("write_csv: empty record");
  std::string text;
  for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
    if (i) text += ',';
    text += kColumnNames[i];
  }
  text += '\n';
  for (const auto& s : record.samples) {
    const auto v = column_values(s);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) text += ',';
      text += format_double(v[i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

TrajectoryRecord read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  std::string expected;
  for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
    if (i) expected += ',';
    expected += kColumnNames[i];
  }
  if (line != expected) throw IoError(path.string() + ": unexpected header");
  TrajectoryRecord rec;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::array<double, kNumColumns> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i < kNumColumns; ++i) {
      const auto res = std::from_chars(p, end, v[i]);
      if (res.ec != std::errc()) {
        throw IoError(path.string() + ": bad number on line " + std::to_string(row));
      }
      p = res.ptr;
      if (i + 1 < kNumColumns) {
        if (p == end || *p != ',') {
          throw IoError(path.string() + ": too few columns on line " + std::to_string(row));
        }
        ++p;
      }
    }
    if (p != end) throw IoError(path.string() + ": too many columns on line " + std::to_string(row));
    MeasureSample s;
    s.t = v[0];
    s.I2_AB = v[1];
    s.I2_AC = v[2];
    s.I2_ABC = v[3];
    s.TMI = v[4];
    s.E2_AB = v[5];
    s.E2_AC = v[6];
    s.E2_ABC = v[7];
    s.TLN = v[8];
    s.S_A = v[9];
    s.total_sz = v[10];
    s.trace_err = v[11];
    s.herm_err = v[12];
    s.min_eig = v[13];
    rec.samples.push_back(s);
  }
  return rec;
}

}  // namespace openchain
