#include "qrc/harness/results.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qrc/harness/stats.hpp"

namespace qrc::harness {

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_shortest: conversion failed");
  return std::string(buf.data(), end);
}

std::string format_17g(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_17g: conversion failed");
  return std::string(buf.data(), end);
}

ResultTable ResultTable::from_samples(std::span<const RowKey> keys, const std::vector<std::vector<double>>& samples,
                                      ResultMetadata metadata) {
  std::vector<ResultRow> rows;
  rows.reserve(keys.size());
  std::vector<double> column(samples.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t r = 0; r < samples.size(); ++r) {
      if (samples[r].size() != keys.size()) {
        throw std::invalid_argument("ResultTable: realization " + std::to_string(r) + " has " +
                                    std::to_string(samples[r].size()) + " values for " +
                                    std::to_string(keys.size()) + " rows");
      }
      column[r] = samples[r][i];
    }
    const Summary s = summarize(column);
    rows.push_back({keys[i].sweep_param, keys[i].sweep_value, keys[i].metric, s.mean, s.sem, s.n});
  }
  return ResultTable(std::move(rows), std::move(metadata));
}

const ResultRow& ResultTable::at(std::string_view sweep_param, double sweep_value, std::string_view metric) const {
  for (const ResultRow& row : rows_) {
    if (row.sweep_param == sweep_param && row.sweep_value == sweep_value && row.metric == metric) return row;
  }
  throw std::out_of_range("ResultTable: no row " + std::string(sweep_param) + "=" + format_shortest(sweep_value) +
                          " metric " + std::string(metric));
}

std::vector<ResultRow> ResultTable::metric(std::string_view name) const {
  std::vector<ResultRow> out;
  for (const ResultRow& row : rows_) {
    if (row.metric == name) out.push_back(row);
  }
  return out;
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "sweep_param,sweep_value,metric,mean,stderr,n\n";
  for (const ResultRow& row : rows_) {
    out << row.sweep_param << ',' << format_shortest(row.sweep_value) << ',' << row.metric << ','
        << format_17g(row.mean) << ',' << format_17g(row.sem) << ',' << row.n << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

std::string ResultTable::metadata_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = metadata_.experiment;
  j["spec_hash"] = metadata_.spec_hash;
  j["master_seed"] = metadata_.master_seed;
  j["code_version"] = metadata_.code_version;
  j["spec"] = metadata_.spec_text;
  j["rows"] = rows_.size();
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (const auto& [key, values] : metadata_.annotations) notes[key] = values;
  j["annotations"] = notes;
  return j.dump(2) + "\n";
}

void ResultTable::save(const std::filesystem::path& dir, const std::string& stem) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (dir / (stem + ".csv")).string());
    write_csv(csv);
  }
  std::ofstream json(dir / (stem + ".json"), std::ios::binary);
  if (!json) throw std::runtime_error("cannot write " + (dir / (stem + ".json")).string());
  json << metadata_json();
}

}  // namespace qrc::harness
