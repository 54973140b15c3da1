#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlb/benchmark.hpp"
#include "wlb/dataset.hpp"

namespace wlb {

// One parsed line: `label (SP index:value)*` with strictly increasing
// 1-based indices. `#` starts a comment; blank lines are skipped.
struct LibsvmRecord {
  double label = 0.0;
  std::vector<std::pair<std::int64_t, double>> entries;
};

class LibsvmParseError : public std::runtime_error {
 public:
  LibsvmParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Streaming parse: rows are consumed one line at a time, never buffering the
// whole file. The column count is the maximum index seen, or `declared_d`
// when that is larger (trailing all-zero columns are representable).
Dataset parse_libsvm(std::istream& in, Eigen::Index declared_d = 0,
                     const std::string& name = "");
Dataset parse_libsvm_file(const std::filesystem::path& path,
                          Eigen::Index declared_d = 0);

// Serializer (round-trip partner of the parser); writes zero-entry rows as
// a bare label.
void write_libsvm(std::ostream& out, const Dataset& ds);

// Known real-world datasets and how to load them: expected shape, bound
// rule, and the file (relative to the data directory) holding them.
struct DatasetRegistryEntry {
  std::string name;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  BoundsKind bounds_kind = BoundsKind::real;
  std::string source;        // filename under the data directory
  bool standardize = true;
  bool keep_sparse = false;  // skip densification for very wide data
};

const std::vector<DatasetRegistryEntry>& dataset_registry();
const DatasetRegistryEntry* find_registry_entry(const std::string& name);

// Parse, validate shape against the registry entry, standardize, and attach
// bounds/criterion. `data_dir` resolves relative sources.
Benchmark load_real_benchmark(const DatasetRegistryEntry& entry,
                              const std::filesystem::path& data_dir);

// ||beta||_0 of the hypergradient-descent solution refit on the full
// dataset; a cheap probe of how many features the problem really uses.
int estimate_effective_dim(const Benchmark& bench, int budget,
                           std::uint64_t seed = 0);

}  // namespace wlb
