#include "wlb/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace wlb {

namespace {

constexpr Eigen::Index kDenseConversionMaxCols = 512;

bool is_separator(char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_separator(s.front())) s.remove_prefix(1);
  while (!s.empty() && (is_separator(s.back()) || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view token, std::size_t line,
                    const char* what) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw LibsvmParseError(line, std::string("malformed ") + what + " '" +
                                     std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw LibsvmParseError(line, std::string(what) + " is not finite");
  }
  return value;
}

std::int64_t parse_index(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw LibsvmParseError(line, "malformed feature index '" +
                                     std::string(token) + "'");
  }
  if (value <= 0) {
    throw LibsvmParseError(line, "feature index must be positive, got " +
                                     std::to_string(value));
  }
  return value;
}

// Splits a trimmed, comment-free line on runs of blanks.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_separator(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_record(std::string_view raw, std::size_t line_no,
                  LibsvmRecord& rec) {
  std::string_view line = raw;
  if (const auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  line = trim(line);
  if (line.empty()) return false;

  const auto tokens = tokenize(line);
  rec.label = parse_double(tokens.front(), line_no, "label");
  rec.entries.clear();
  std::int64_t prev_index = 0;
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const auto token = tokens[t];
    const auto colon = token.find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon == token.size() - 1) {
      throw LibsvmParseError(line_no, "expected index:value, got '" +
                                          std::string(token) + "'");
    }
    const std::int64_t index = parse_index(token.substr(0, colon), line_no);
    if (index <= prev_index) {
      throw LibsvmParseError(
          line_no, "feature indices must be strictly increasing (" +
                       std::to_string(index) + " after " +
                       std::to_string(prev_index) + ")");
    }
    prev_index = index;
    const double value = parse_double(token.substr(colon + 1), line_no, "value");
    // Explicit zeros are dropped: same semantics, canonical storage.
    if (value != 0.0) rec.entries.emplace_back(index, value);
  }
  return true;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, Eigen::Index declared_d,
                     const std::string& name) {
  std::vector<double> labels;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::Index max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  LibsvmRecord rec;
  while (std::getline(in, line)) {
    ++line_no;
    if (!parse_record(line, line_no, rec)) continue;
    const auto row = static_cast<Eigen::Index>(labels.size());
    labels.push_back(rec.label);
    for (const auto& [index, value] : rec.entries) {
      max_index = std::max(max_index, static_cast<Eigen::Index>(index));
      triplets.emplace_back(row, static_cast<Eigen::Index>(index - 1), value);
    }
  }
  if (in.bad()) {
    throw std::runtime_error("I/O error while reading LIBSVM stream");
  }
  if (labels.empty()) {
    throw LibsvmParseError(line_no, "no data rows found");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  const Eigen::Index d = std::max(declared_d, max_index);
  if (d < 1) {
    throw LibsvmParseError(line_no, "no feature index seen and none declared");
  }

  Eigen::SparseMatrix<double> X(n, d);
  X.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
  return Dataset(std::move(X), std::move(y), name);
}

Dataset parse_libsvm_file(const std::filesystem::path& path,
                          Eigen::Index declared_d) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return parse_libsvm(in, declared_d, path.stem().string());
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  std::ostringstream line;
  line.precision(17);

  if (!ds.is_sparse()) {
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      line.str("");
      line << ds.y()[i];
      for (Eigen::Index j = 0; j < ds.d(); ++j) {
        const double v = ds.dense()(i, j);
        if (v != 0.0) line << ' ' << (j + 1) << ':' << v;
      }
      out << line.str() << '\n';
    }
    return;
  }

  // Row-major view so each output line is one contiguous walk.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows(ds.sparse());
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    line.str("");
    line << ds.y()[i];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, i);
         it; ++it) {
      if (it.value() != 0.0) line << ' ' << (it.col() + 1) << ':' << it.value();
    }
    out << line.str() << '\n';
  }
}

const std::vector<DatasetRegistryEntry>& dataset_registry() {
  static const std::vector<DatasetRegistryEntry> registry = {
      {"breast_cancer", 683, 10, BoundsKind::real, "breast_cancer.libsvm",
       true, false},
      {"diabetes", 768, 8, BoundsKind::real, "diabetes.libsvm", true, false},
      {"leukemia", 72, 7129, BoundsKind::real, "leukemia.libsvm", true, false},
      {"dna", 2000, 180, BoundsKind::real, "dna.libsvm", true, false},
      {"rcv1", 20242, 19959, BoundsKind::rcv1_like, "rcv1.libsvm", true, true},
  };
  return registry;
}

const DatasetRegistryEntry* find_registry_entry(const std::string& name) {
  for (const auto& entry : dataset_registry()) {
    if (entry.name == name) return &entry;
  }
  return nullptr;
}

Benchmark load_real_benchmark(const DatasetRegistryEntry& entry,
                              const std::filesystem::path& data_dir) {
  std::filesystem::path path(entry.source);
  if (path.is_relative()) path = data_dir / path;
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file " + path.string());
  }

  Dataset parsed = parse_libsvm(in, 0, entry.name);
  if (parsed.n() != entry.n || parsed.d() > entry.d) {
    throw std::runtime_error(
        "dataset '" + entry.name + "' has shape (" +
        std::to_string(parsed.n()) + ", " + std::to_string(parsed.d()) +
        "), expected (" + std::to_string(entry.n) + ", " +
        std::to_string(entry.d) + ")");
  }
  if (parsed.d() < entry.d) {
    // Registry-declared width wins when larger: rebuild with padded columns.
    Eigen::SparseMatrix<double> X = parsed.sparse();
    X.conservativeResize(entry.n, entry.d);
    parsed = Dataset(std::move(X), parsed.y(), entry.name);
  }

  // Very wide data keeps sparse storage; moderate dimensions run faster
  // dense.
  if (!entry.keep_sparse && parsed.d() <= kDenseConversionMaxCols) {
    parsed = Dataset(Eigen::MatrixXd(parsed.sparse()), parsed.y(), entry.name);
  }
  if (entry.standardize) {
    parsed = standardize_columns(parsed);
  }

  const auto [lam_min, lam_max] = compute_bounds(parsed, entry.bounds_kind);
  CvConfig criterion;
  // Tiny fixtures (fewer rows than the default fold count) still load; the
  // split shrinks to leave-one-out rather than rejecting the file.
  if (static_cast<Eigen::Index>(criterion.k_folds) > parsed.n()) {
    criterion.k_folds = static_cast<int>(parsed.n());
  }
  return Benchmark(std::move(parsed), lam_min, lam_max, criterion,
                   FidelitySchedule{}, entry.name);
}

}  // namespace wlb
