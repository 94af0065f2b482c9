#include "suds/config.hpp"

#include <cmath>
#include <map>
#include <set>

#include "io_util.hpp"

namespace suds {

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  return std::string(s.substr(b, e - b + 1));
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::string_view sv(text);
    size_t start = 0;
    int lineno = 0;
    while (start <= sv.size()) {
      size_t pos = sv.find('\n', start);
      if (pos == std::string_view::npos) pos = sv.size();
      std::string_view line = sv.substr(start, pos - start);
      start = pos + 1;
      ++lineno;
      size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      std::string t = trim(line);
      if (t.empty()) continue;
      size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(std::string_view(t).substr(0, eq));
      std::string val = trim(std::string_view(t).substr(eq + 1));
      if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      kv_[key] = val;
      if (start > sv.size()) break;
    }
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  double number(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return parse_number(it->second, key);
  }

  int integer(const std::string& key, int fallback) const {
    return static_cast<int>(number(key, fallback));
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }

  std::vector<double> list(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    used_.insert(key);
    std::vector<double> out;
    for (auto part : detail::split(it->second, ',')) {
      std::string p = trim(part);
      if (p.empty()) throw ConfigError("empty element in list '" + key + "'");
      out.push_back(parse_number(p, key));
    }
    return out;
  }

  void check_all_used() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.count(key)) throw ConfigError("unknown config key: " + key);
    }
  }

 private:
  static double parse_number(const std::string& s, const std::string& key) {
    if (s == "pi") return M_PI;
    try {
      size_t consumed = 0;
      double v = std::stod(s, &consumed);
      if (consumed != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad number for '" + key + "': " + s);
    }
  }

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size()));
}

/// Broadcast a scalar-or-list config entry to length n.
VectorXd broadcast(const KeyValues& kv, const std::string& key, int n, double fallback) {
  std::vector<double> v = kv.list(key);
  if (v.empty()) return VectorXd::Constant(n, fallback);
  if (static_cast<int>(v.size()) == 1) return VectorXd::Constant(n, v[0]);
  if (static_cast<int>(v.size()) != n)
    throw ConfigError("'" + key + "' needs 1 or " + std::to_string(n) + " values");
  return to_vec(v);
}

}  // namespace

SystemConfig parse_system_config(const std::string& text) {
  KeyValues kv(text);
  SystemConfig cfg;
  SwimmerParams& p = cfg.params;
  p.variant = variant_from_name(kv.text("variant", "purcell3"));

  // Shape size per variant, to size the arrays below.
  int n = 2;
  switch (p.variant) {
    case SwimmerVariant::kLinearPassive:
    case SwimmerVariant::kPushmepullyou:
      n = 2;
      p.links = 0;
      break;
    case SwimmerVariant::kPurcell3:
      p.links = 3;
      n = 2;
      break;
    case SwimmerVariant::kPurcell9:
      p.links = 9;
      n = 8;
      break;
    case SwimmerVariant::kChain:
      p.links = kv.integer("links", 3);
      n = p.links - 1;
      break;
  }
  if (p.variant != SwimmerVariant::kChain) kv.integer("links", p.links);

  p.L = kv.number("L", p.variant == SwimmerVariant::kLinearPassive ? 2.0 : 1.0);
  p.l = kv.number("l", 0.5);
  p.c = kv.number("c", 1.0);
  p.ratio = kv.number("ratio", 2.0);

  std::vector<double> act = kv.list("actuated");
  if (act.empty()) {
    // Paper assignments: last coordinate for the two-coordinate swimmers is
    // the drive; chains drive the first half of the joints.
    if (p.variant == SwimmerVariant::kLinearPassive ||
        p.variant == SwimmerVariant::kPushmepullyou) {
      p.actuated = {1};
    } else {
      for (int j = 0; j < std::max(1, n / 2); ++j) p.actuated.push_back(j);
    }
  } else {
    for (double a : act) p.actuated.push_back(static_cast<int>(a) - 1);  // 1-based in files
  }
  const int n_a = static_cast<int>(p.actuated.size());
  const int n_p = n - n_a;
  if (n_p < 0) throw ConfigError("more actuated indices than shape coordinates");

  double k_default = 0.0, rest_default = 0.0;
  switch (p.variant) {
    case SwimmerVariant::kLinearPassive: k_default = 1.0; rest_default = 1.0; break;
    case SwimmerVariant::kPushmepullyou: k_default = 10.0; rest_default = M_PI / 2.0; break;
    case SwimmerVariant::kPurcell3: k_default = 2.0; break;
    default: k_default = 10.0; break;
  }
  p.elements.k = broadcast(kv, "k", n_p, k_default);
  p.elements.r_rest = broadcast(kv, "r_rest", n_p, rest_default);
  p.elements.d = broadcast(kv, "d", n_p, 0.0);

  cfg.gait.freq = 2.0 * M_PI * kv.number("freq_hz", 1.0);
  double amp_default = 1.4, off_default = 0.0;
  if (p.variant == SwimmerVariant::kLinearPassive) {
    amp_default = -0.5;
    off_default = 1.0;
  } else if (p.variant == SwimmerVariant::kPushmepullyou) {
    amp_default = M_PI / 3.0;
    off_default = M_PI / 2.0;
  }
  cfg.gait.amplitude = broadcast(kv, "amplitude", n_a, amp_default);
  cfg.gait.offset = broadcast(kv, "offset", n_a, off_default);
  if (kv.has("lag")) {
    cfg.gait.lag = broadcast(kv, "lag", n_a, 0.0);
  } else {
    // Traveling wave: joint i lags by i * wave_lag seconds.
    const double wl = kv.number("wave_lag", 0.0);
    cfg.gait.lag.resize(n_a);
    for (int i = 0; i < n_a; ++i) cfg.gait.lag[i] = wl * (i + 1);
  }

  cfg.noise_lambda = kv.number("lambda", 5.0);
  cfg.noise_sigma = kv.number("sigma", 0.0);
  kv.check_all_used();

  // Fail fast on inconsistent parameters.
  make_system(p);
  return cfg;
}

SystemConfig load_system_config(const std::string& path) {
  return parse_system_config(detail::read_file(path));
}

SystemConfig preset_config(const std::string& name) {
  std::string text;
  if (name == "linear_passive") {
    text =
        "variant = linear_passive\n"
        "L = 2\nl = 0.5\nc = 1\nk = 1\nr_rest = 1\nd = 0\n"
        "sigma = 0.1\n";
  } else if (name == "pushmepullyou") {
    text =
        "variant = pushmepullyou\n"
        "L = 1\nc = 1\nk = 10\nr_rest = 1.5707963267948966\nd = 0\n"
        "sigma = 0.2\n";
  } else if (name == "purcell3") {
    text =
        "variant = purcell3\n"
        "L = 1\nc = 1\nratio = 2\nk = 2\nr_rest = 0\nd = 0\n"
        "amplitude = 1.4\nsigma = 0.3\n";
  } else if (name == "purcell9") {
    text =
        "variant = purcell9\n"
        "L = 1\nc = 1\nratio = 2\nactuated = 1,2,3,4\n"
        "k = 20,15,10,5\nr_rest = 0\nd = 0\n"
        "amplitude = 1.4\nwave_lag = 0.7853981633974483\nsigma = 0.3\n";
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return parse_system_config(text);
}

std::string format_system_config(const SystemConfig& config) {
  using detail::fmt_double;
  const SwimmerParams& p = config.params;
  std::ostringstream os;
  os << "variant = " << variant_name(p.variant) << "\n";
  if (p.variant == SwimmerVariant::kChain) os << "links = " << p.links << "\n";
  os << "L = " << fmt_double(p.L) << "\n";
  if (p.variant == SwimmerVariant::kLinearPassive) os << "l = " << fmt_double(p.l) << "\n";
  os << "c = " << fmt_double(p.c) << "\n";
  os << "ratio = " << fmt_double(p.ratio) << "\n";
  os << "actuated = ";
  for (size_t i = 0; i < p.actuated.size(); ++i)
    os << (i ? "," : "") << p.actuated[i] + 1;
  os << "\n";
  auto emit = [&](const char* key, const VectorXd& v) {
    os << key << " = ";
    for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt_double(v[i]);
    os << "\n";
  };
  emit("k", p.elements.k);
  emit("r_rest", p.elements.r_rest);
  emit("d", p.elements.d);
  os << "freq_hz = " << fmt_double(config.gait.freq / (2.0 * M_PI)) << "\n";
  emit("amplitude", config.gait.amplitude);
  emit("offset", config.gait.offset);
  emit("lag", config.gait.lag);
  os << "lambda = " << fmt_double(config.noise_lambda) << "\n";
  os << "sigma = " << fmt_double(config.noise_sigma) << "\n";
  return os.str();
}

}  // namespace suds
