#pragma once

#include <cmath>
#include <span>

namespace qrc::harness {

struct Summary {
  double mean = 0.0;
  double sem = 0.0;  // sample standard deviation / sqrt(n); 0 for n < 2
  int n = 0;
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sem = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  return s;
}

}  // namespace qrc::harness
