#include "qrc/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qrc/harness/results.hpp"

namespace qrc::harness {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("config: invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                              "'");
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size() || v.empty()) bad_value(key, v);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size() || v.empty()) {
    // Accept integral scientific notation such as 1e5.
    const double d = parse_double(key, v);
    if (d < 0 || d != static_cast<double>(static_cast<Int>(d))) bad_value(key, v);
    return static_cast<Int>(d);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

std::vector<double> parse_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> parse_ints(std::string_view key, std::string_view v) {
  std::vector<int> out;
  for (auto item : split_list(v)) out.push_back(parse_int<int>(key, item));
  return out;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string fmt_double(double v) { return format_shortest(v); }
std::string fmt_int(long long v) { return std::to_string(v); }

std::string fmt_meas(std::uint64_t v) { return v == kIdealMeasurements ? std::string("inf") : std::to_string(v); }

Task parse_task(std::string_view key, std::string_view v) {
  if (v == "stm") return Task::Stm;
  if (v == "predict") return Task::Predict;
  bad_value(key, v);
}

SignalKind parse_signal(std::string_view key, std::string_view v) {
  if (v == "random") return SignalKind::Random;
  if (v == "cosine") return SignalKind::Cosine;
  if (v == "mackey_glass") return SignalKind::MackeyGlass;
  if (v == "ising") return SignalKind::Ising;
  bad_value(key, v);
}

using Setter = std::function<void(ExperimentSpec&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const ExperimentSpec&)>;

struct Field {
  const char* key;
  Setter set;
  Getter get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"task", [](auto& s, auto k, auto v) { s.task = parse_task(k, v); },
       [](const auto& s) { return std::string(to_string(s.task)); }},
      {"signal", [](auto& s, auto k, auto v) { s.signal = parse_signal(k, v); },
       [](const auto& s) { return std::string(to_string(s.signal)); }},
      {"omega", [](auto& s, auto k, auto v) { s.omega = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.omega); }},
      {"mg_alpha", [](auto& s, auto k, auto v) { s.mackey_glass.alpha = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.alpha); }},
      {"mg_beta", [](auto& s, auto k, auto v) { s.mackey_glass.beta = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.beta); }},
      {"mg_gamma", [](auto& s, auto k, auto v) { s.mackey_glass.gamma = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.gamma); }},
      {"mg_delay", [](auto& s, auto k, auto v) { s.mackey_glass.delay = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.delay); }},
      {"mg_dt", [](auto& s, auto k, auto v) { s.mackey_glass.dt = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.dt); }},
      {"mg_burn_in", [](auto& s, auto k, auto v) { s.mackey_glass.burn_in = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.burn_in); }},
      {"mg_initial_history", [](auto& s, auto k, auto v) { s.mackey_glass.initial_history = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.mackey_glass.initial_history); }},
      {"ising_spins", [](auto& s, auto k, auto v) { s.ising.n_spins = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.ising.n_spins); }},
      {"ising_j", [](auto& s, auto k, auto v) { s.ising.coupling = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.ising.coupling); }},
      {"ising_hx", [](auto& s, auto k, auto v) { s.ising.h_x = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.ising.h_x); }},
      {"ising_hz", [](auto& s, auto k, auto v) { s.ising.h_z = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.ising.h_z); }},
      {"ising_dt", [](auto& s, auto k, auto v) { s.ising.dt = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.ising.dt); }},
      {"ising_site", [](auto& s, auto k, auto v) { s.ising.observable_site = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.ising.observable_site); }},
      {"n_qubits", [](auto& s, auto k, auto v) { s.n_qubits = parse_ints(k, v); },
       [](const auto& s) { return join(s.n_qubits, fmt_int); }},
      {"a_in", [](auto& s, auto k, auto v) { s.a_in = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.a_in); }},
      {"a_fb", [](auto& s, auto k, auto v) { s.a_fb = parse_doubles(k, v); },
       [](const auto& s) { return join(s.a_fb, fmt_double); }},
      {"ansatz", [](auto& s, auto, auto v) { s.ansatz = AnsatzChoice::parse(v); },
       [](const auto& s) { return s.ansatz.to_string(); }},
      {"feedback_delay", [](auto& s, auto k, auto v) { s.feedback_delay = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.feedback_delay); }},
      {"n_meas",
       [](auto& s, auto k, auto v) {
         s.n_meas.clear();
         for (auto item : split_list(v)) {
           s.n_meas.push_back(item == "inf" ? kIdealMeasurements : parse_int<std::uint64_t>(k, item));
           if (item != "inf" && s.n_meas.back() == 0) bad_value(k, v);
         }
       },
       [](const auto& s) { return join(s.n_meas, fmt_meas); }},
      {"ensemble", [](auto& s, auto k, auto v) { s.ensemble = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.ensemble); }},
      {"washout", [](auto& s, auto k, auto v) { s.split.washout = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.split.washout); }},
      {"train", [](auto& s, auto k, auto v) { s.split.train = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.split.train); }},
      {"test", [](auto& s, auto k, auto v) { s.split.test = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.split.test); }},
      {"max_delay", [](auto& s, auto k, auto v) { s.max_delay = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.max_delay); }},
      {"max_horizon", [](auto& s, auto k, auto v) { s.max_horizon = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.max_horizon); }},
      {"shared_input", [](auto& s, auto k, auto v) { s.shared_input = parse_bool(k, v); },
       [](const auto& s) { return std::string(s.shared_input ? "true" : "false"); }},
      {"ablation", [](auto& s, auto k, auto v) { s.ablation = parse_bool(k, v); },
       [](const auto& s) { return std::string(s.ablation ? "true" : "false"); }},
      {"esn", [](auto& s, auto k, auto v) { s.esn = parse_bool(k, v); },
       [](const auto& s) { return std::string(s.esn ? "true" : "false"); }},
      {"esn_nodes", [](auto& s, auto k, auto v) { s.esn_nodes = parse_ints(k, v); },
       [](const auto& s) { return join(s.esn_nodes, fmt_int); }},
      {"esn_spectral_radii", [](auto& s, auto k, auto v) { s.esn_grid.spectral_radii = parse_doubles(k, v); },
       [](const auto& s) { return join(s.esn_grid.spectral_radii, fmt_double); }},
      {"esn_leak_rates", [](auto& s, auto k, auto v) { s.esn_grid.leak_rates = parse_doubles(k, v); },
       [](const auto& s) { return join(s.esn_grid.leak_rates, fmt_double); }},
      {"esn_ridge", [](auto& s, auto k, auto v) { s.esn_ridge = parse_double(k, v); },
       [](const auto& s) { return fmt_double(s.esn_ridge); }},
      {"esn_averaging",
       [](auto& s, auto k, auto v) {
         if (v == "mean_then_min") {
           s.esn_averaging = GridAveraging::MeanThenMin;
         } else if (v == "min_then_mean") {
           s.esn_averaging = GridAveraging::MinThenMean;
         } else {
           bad_value(k, v);
         }
       },
       [](const auto& s) {
         return std::string(s.esn_averaging == GridAveraging::MeanThenMin ? "mean_then_min" : "min_then_mean");
       }},
      {"esn_ensemble", [](auto& s, auto k, auto v) { s.esn_ensemble = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.esn_ensemble); }},
      {"master_seed", [](auto& s, auto k, auto v) { s.master_seed = parse_int<std::uint64_t>(k, v); },
       [](const auto& s) { return std::to_string(s.master_seed); }},
      {"threads", [](auto& s, auto k, auto v) { s.threads = parse_int<int>(k, v); },
       [](const auto& s) { return fmt_int(s.threads); }},
  };
  return table;
}

}  // namespace

AnsatzChoice AnsatzChoice::parse(std::string_view text) {
  text = trim(text);
  if (text == "haar") return {};
  if (text.starts_with("he:")) {
    const auto digits = text.substr(3);
    int layers = -1;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), layers);
    if (ec == std::errc{} && end == digits.data() + digits.size() && layers >= 0 && !digits.empty()) {
      return {false, layers};
    }
  }
  throw std::invalid_argument("ansatz must be 'haar' or 'he:<layers>', got '" + std::string(text) + "'");
}

std::string AnsatzChoice::to_string() const { return haar ? "haar" : "he:" + std::to_string(layers); }

std::string_view to_string(Task task) { return task == Task::Stm ? "stm" : "predict"; }

std::string_view to_string(SignalKind signal) {
  switch (signal) {
    case SignalKind::Random: return "random";
    case SignalKind::Cosine: return "cosine";
    case SignalKind::MackeyGlass: return "mackey_glass";
    case SignalKind::Ising: return "ising";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  split.validate();
  if (ensemble < 1) throw std::invalid_argument("spec: ensemble must be >= 1");
  if (esn_ensemble < 0) throw std::invalid_argument("spec: esn_ensemble must be >= 0");
  if (n_qubits.empty() || a_fb.empty() || n_meas.empty()) {
    throw std::invalid_argument("spec: n_qubits, a_fb and n_meas must be non-empty");
  }
  for (int n : n_qubits) {
    if (n < 6 || n > 10) throw std::invalid_argument("spec: n_qubits entries must be in [6, 10]");
  }
  for (double a : a_fb) {
    if (!(a >= 0.0)) throw std::invalid_argument("spec: a_fb entries must be non-negative");
  }
  if (!(a_in >= 0.0)) throw std::invalid_argument("spec: a_in must be non-negative");
  if (feedback_delay < 0) throw std::invalid_argument("spec: feedback_delay must be >= 0");
  if (max_delay < 0 || max_delay > split.washout) {
    throw std::invalid_argument("spec: max_delay must lie in [0, washout]");
  }
  if (max_horizon < 0) throw std::invalid_argument("spec: max_horizon must be >= 0");
  if (esn && esn_nodes.empty()) throw std::invalid_argument("spec: esn_nodes must be non-empty");
  mackey_glass.validate();
  ising.validate();
}

ExperimentSpec parse_config(std::string_view text, ExperimentSpec base) {
  std::map<std::string_view, const Field*> by_key;
  for (const Field& f : fields()) by_key.emplace(f.key, &f);
  std::set<std::string> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                                  "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  std::string(key) + "'");
    }
    it->second->set(base, key, value);
  }
  return base;
}

ExperimentSpec load_config(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string to_config_text(const ExperimentSpec& spec) {
  std::string out;
  for (const Field& f : fields()) {
    if (std::string_view(f.key) == "threads") continue;
    out += f.key;
    out += " = ";
    out += f.get(spec);
    out += '\n';
  }
  return out;
}

}  // namespace qrc::harness
