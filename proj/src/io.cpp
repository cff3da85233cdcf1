#include "nusl/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nusl::io {

namespace {

constexpr char kMagic[4] = {'N', 'U', 'S', 'L'};
constexpr std::uint32_t kBlobVersion = 1;

bool parse_double(const std::string& field, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(field, &pos);
    while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
      ++pos;
    return pos == field.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first) {  // header line
        first = false;
        continue;
      }
      throw std::runtime_error("unparseable CSV line in " + path + ": " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  atomic_write_text(path, out.str());
}

Matrix load_matrix_blob(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char header[16];
  if (!in.read(header, 16)) throw std::runtime_error("truncated header in " + path);
  if (std::memcmp(header, kMagic, 4) != 0)
    throw std::runtime_error("bad magic in " + path);
  std::uint32_t version, d, K;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&d, header + 8, 4);
  std::memcpy(&K, header + 12, 4);
  if (version != kBlobVersion)
    throw std::runtime_error("unsupported blob version in " + path);
  if (d == 0 || K == 0 || d > (1u << 24) || K > (1u << 24))
    throw std::runtime_error("implausible dimensions in " + path);
  Matrix m(d, K);
  // Column-major doubles, the native Eigen layout.
  if (!in.read(reinterpret_cast<char*>(m.data()),
               static_cast<std::streamsize>(sizeof(double) * d * K)))
    throw std::runtime_error("truncated data in " + path);
  return m;
}

void save_matrix_blob(const Matrix& m, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    char header[16];
    std::memcpy(header, kMagic, 4);
    std::uint32_t version = kBlobVersion;
    std::uint32_t d = static_cast<std::uint32_t>(m.rows());
    std::uint32_t K = static_cast<std::uint32_t>(m.cols());
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &d, 4);
    std::memcpy(header + 12, &K, 4);
    out.write(header, 16);
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

Matrix load_matrix(const std::string& path) {
  if (ends_with(path, ".csv")) return load_matrix_csv(path);
  return load_matrix_blob(path);
}

void save_matrix(const Matrix& m, const std::string& path) {
  if (ends_with(path, ".csv"))
    save_matrix_csv(m, path);
  else
    save_matrix_blob(m, path);
}

Vector load_vector(const std::string& path) {
  Matrix m = load_matrix(path);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw std::runtime_error(path + " is not a vector (1 x n or n x 1)");
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace nusl::io
