#include "qrc/harness/trajectory_io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "qrc/harness/results.hpp"

namespace qrc::harness {

void export_trajectory(const Trajectory& traj, std::span<const QubitPair> pairs, std::ostream& out) {
  std::vector<int> columns;
  for (const auto& [i, j] : pairs) {
    for (int q : {i, j}) {
      if (q < 1 || q > traj.n_qubits()) {
        throw std::out_of_range("export_trajectory: qubit " + std::to_string(q) + " outside [1, " +
                                std::to_string(traj.n_qubits()) + "]");
      }
      columns.push_back(q);
    }
  }
  out << "cycle";
  for (int q : columns) out << ",z" << q;
  out << '\n';
  for (Eigen::Index k = 0; k < traj.cycle_count(); ++k) {
    out << (k + 1);
    for (int q : columns) out << ',' << format_17g(traj.rows()(k, q - 1));
    out << '\n';
  }
}

void export_trajectory(const Trajectory& traj, std::span<const QubitPair> pairs, const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  export_trajectory(traj, pairs, out);
}

void export_series(std::span<const double> values, std::ostream& out) {
  out << "cycle,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) out << (k + 1) << ',' << format_17g(values[k]) << '\n';
}

}  // namespace qrc::harness
