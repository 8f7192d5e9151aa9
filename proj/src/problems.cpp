#include "skm/problems.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skm/error.hpp"

namespace skm {

static_assert(std::endian::native == std::endian::little,
              "system file I/O assumes a little-endian host");

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::GaussianIID ? "gaussian" : "coherent";
}

ModelKind parse_model(std::string_view name) {
  if (name == "gaussian") return ModelKind::GaussianIID;
  if (name == "coherent") return ModelKind::CoherentUniform;
  fail(ErrorKind::InvalidArgument, "unknown model '" + std::string(name) +
                                       "' (expected gaussian or coherent)");
}

PlantedSolution plant_solution(const DenseMatrix& a, Rng& rng) {
  Vector x(a.cols());
  do {
    rng.fill_normal(x);
  } while (norm_sq(x) == 0.0);
  Vector b = matvec(a, x);
  return {std::move(b), std::move(x)};
}

PlantedSolution plant_solution(const DenseMatrix& a, std::uint64_t seed) {
  Rng rng(seed);
  return plant_solution(a, rng);
}

LinearSystem generate_system(const ModelSpec& spec) {
  require(spec.cols >= 1 && spec.rows >= spec.cols,
          "model dimensions must satisfy rows >= cols >= 1");
  Rng rng(spec.seed);
  std::vector<double> d(spec.rows * spec.cols);
  if (spec.kind == ModelKind::GaussianIID) {
    rng.fill_normal(d);
  } else {
    for (double& v : d) v = rng.uniform_real(0.8, 1.0);
  }
  DenseMatrix a(spec.rows, spec.cols, std::move(d));
  auto planted = plant_solution(a, rng);
  return LinearSystem(std::move(a), std::move(planted.b),
                      std::move(planted.x_star));
}

// ---------------------------------------------------------------- CSV

namespace {

[[noreturn]] void csv_error(std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << "CSV row " << line << ": " << what;
  fail(ErrorKind::Format, msg.str());
}

std::vector<std::string> split_fields(const std::string& line, char delim,
                                      std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) csv_error(lineno, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_number(std::string_view field, std::size_t lineno,
                    std::size_t col) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
    field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size() || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "column " << col + 1 << ": cannot parse '" << field
        << "' as a finite number";
    csv_error(lineno, msg.str());
  }
  return v;
}

}  // namespace

DenseMatrix parse_csv_matrix(std::istream& in, char delimiter,
                             std::size_t skip_rows) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> data;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno <= skip_rows) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line, delimiter, lineno);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      std::ostringstream msg;
      msg << "ragged row: " << fields.size() << " fields, expected " << cols;
      csv_error(lineno, msg.str());
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      data.push_back(parse_number(fields[j], lineno, j));
    }
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::Format, "CSV input contains no data rows");
  return DenseMatrix(rows, cols, std::move(data));
}

LinearSystem load_csv_system(const std::filesystem::path& path,
                             const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  const DenseMatrix raw = parse_csv_matrix(in, opts.delimiter, opts.skip_rows);

  try {
    if (!opts.target_column) {
      auto planted = plant_solution(raw, opts.plant_seed);
      return LinearSystem(raw, std::move(planted.b), std::move(planted.x_star));
    }
    const std::size_t t = *opts.target_column;
    if (t >= raw.cols()) {
      std::ostringstream msg;
      msg << "target column " << t << " out of range for " << raw.cols()
          << " columns";
      fail(ErrorKind::Format, msg.str());
    }
    if (raw.cols() < 2) {
      fail(ErrorKind::Format, "target column leaves no columns for A");
    }
    std::vector<double> a;
    a.reserve(raw.rows() * (raw.cols() - 1));
    Vector b(raw.rows());
    for (std::size_t i = 0; i < raw.rows(); ++i) {
      for (std::size_t j = 0; j < raw.cols(); ++j) {
        if (j == t) {
          b[i] = raw(i, j);
        } else {
          a.push_back(raw(i, j));
        }
      }
    }
    return LinearSystem(DenseMatrix(raw.rows(), raw.cols() - 1, std::move(a)),
                        std::move(b));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) {
      fail(ErrorKind::Format, path.string() + ": " + e.what());
    }
    throw;
  }
}

void save_csv_matrix(const DenseMatrix& a, const std::filesystem::path& path,
                     char delimiter) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  std::array<char, 64> buf{};
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << delimiter;
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a(i, j));
      out.write(buf.data(), res.ptr - buf.data());
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

// ------------------------------------------------------------- binary

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'K', 'M', 'S', 'Y', 'S', 0, 0};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_doubles(std::ostream& out, std::span<const double> v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) fail(ErrorKind::Format, "system file is truncated");
  return v;
}

std::vector<double> get_doubles(std::istream& in, std::size_t count) {
  std::vector<double> v(count);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) fail(ErrorKind::Format, "system file is truncated");
  return v;
}

}  // namespace

void write_system(const LinearSystem& sys, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kSystemFormatVersion);
  put<std::uint32_t>(out, sys.x_star() ? 1u : 0u);
  put<std::uint64_t>(out, sys.rows());
  put<std::uint64_t>(out, sys.cols());
  put_doubles(out, sys.a().data());
  put_doubles(out, sys.b());
  if (sys.x_star()) put_doubles(out, *sys.x_star());
}

LinearSystem read_system(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    fail(ErrorKind::Format, "not a system file (bad magic bytes)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kSystemFormatVersion) {
    std::ostringstream msg;
    msg << "unsupported system file version " << version << " (expected "
        << kSystemFormatVersion << ")";
    fail(ErrorKind::Format, msg.str());
  }
  const auto flags = get<std::uint32_t>(in);
  if (flags & ~1u) fail(ErrorKind::Format, "unknown system file flags");
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 34;
  if (rows == 0 || cols == 0 || rows > kMaxEntries / cols) {
    fail(ErrorKind::Format, "implausible dimensions in system file");
  }
  auto a = get_doubles(in, rows * cols);
  auto b = get_doubles(in, rows);
  std::optional<Vector> x_star;
  if (flags & 1u) x_star = get_doubles(in, cols);
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(ErrorKind::Format, "trailing bytes after system data");
  }
  try {
    return LinearSystem(DenseMatrix(rows, cols, std::move(a)), std::move(b),
                        std::move(x_star));
  } catch (const Error& e) {
    fail(ErrorKind::Format, std::string("invalid system file: ") + e.what());
  }
}

void save_system(const LinearSystem& sys, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  write_system(sys, out);
  out.flush();
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

LinearSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return read_system(in);
}

}  // namespace skm
