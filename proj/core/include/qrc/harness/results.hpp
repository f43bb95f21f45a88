#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace qrc::harness {

struct ResultRow {
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double sem = 0.0;
  int n = 0;
};

struct RowKey {
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string metric;
};

struct ResultMetadata {
  std::string experiment;
  std::string spec_text;  // canonical config text the run was driven by
  std::string spec_hash;  // FNV-1a 64 of spec_text, hex
  std::uint64_t master_seed = 0;
  std::string code_version;
  std::map<std::string, std::vector<std::string>> annotations;
};

class ResultTable {
 public:
  ResultTable() = default;
  ResultTable(std::vector<ResultRow> rows, ResultMetadata metadata)
      : rows_(std::move(rows)), metadata_(std::move(metadata)) {}

  /// samples[r][i] is realization r's value for keys[i].
  static ResultTable from_samples(std::span<const RowKey> keys, const std::vector<std::vector<double>>& samples,
                                  ResultMetadata metadata);

  const std::vector<ResultRow>& rows() const noexcept { return rows_; }
  ResultMetadata& metadata() noexcept { return metadata_; }
  const ResultMetadata& metadata() const noexcept { return metadata_; }

  /// Throws std::out_of_range if the row does not exist.
  const ResultRow& at(std::string_view sweep_param, double sweep_value, std::string_view metric) const;
  /// All rows of one metric in table order.
  std::vector<ResultRow> metric(std::string_view name) const;

  /// Header `sweep_param,sweep_value,metric,mean,stderr,n`; mean and stderr with
  /// 17 significant digits, sweep values in shortest round-trip form.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  /// Provenance sidecar (spec, seed, version, annotations).
  std::string metadata_json() const;

  /// Writes <stem>.csv and <stem>.json under `dir`, creating it if needed.
  void save(const std::filesystem::path& dir, const std::string& stem) const;

 private:
  std::vector<ResultRow> rows_;
  ResultMetadata metadata_;
};

std::string fnv1a_hex(std::string_view text);
std::string format_shortest(double value);
std::string format_17g(double value);

}  // namespace qrc::harness
