#include "suds/simulate.hpp"

#include <cmath>

#include "json.hpp"

#include "io_util.hpp"

namespace suds {

using nlohmann::json;

std::pair<VectorXd, VectorXd> reference(const GaitSpec& spec, double t) {
  const int n = static_cast<int>(spec.offset.size());
  VectorXd r(n), rdot(n);
  for (int i = 0; i < n; ++i) {
    const double ph = spec.freq * (t - spec.lag[i]);
    r[i] = spec.offset[i] + spec.amplitude[i] * std::sin(ph);
    rdot[i] = spec.amplitude[i] * spec.freq * std::cos(ph);
  }
  return {r, rdot};
}

VectorXd ou_step(const VectorXd& delta_a, double dt, const NoiseSpec& noise,
                 std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw ConfigError("ou_step needs dt > 0");
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd out = delta_a;
  const double sq = noise.sigma * std::sqrt(dt);
  for (int i = 0; i < out.size(); ++i) {
    out[i] += -noise.lambda * delta_a[i] * dt + sq * gauss(rng);
  }
  return out;
}

Trajectory simulate_trial(const SudsSystem& system, const GaitSpec& gait,
                          const NoiseSpec& noise, int n_cycles, int samples_per_cycle,
                          const SimOptions& options) {
  const Dimensions& d = system.dims();
  if (n_cycles < 1 || samples_per_cycle < 2) throw ConfigError("invalid trial span");
  if (gait.offset.size() != d.n_a || gait.amplitude.size() != d.n_a ||
      gait.lag.size() != d.n_a)
    throw DimensionMismatch("gait spec arrays must have length n_a");
  if (!(gait.freq > 0.0)) throw ConfigError("gait frequency must be positive");
  if (!(noise.lambda > 0.0) || noise.sigma < 0.0) throw ConfigError("invalid noise spec");

  const double T = gait.period();
  const double dt = T / samples_per_cycle;
  const int warmup_steps = options.warmup_cycles * samples_per_cycle;
  const int record_steps = n_cycles * samples_per_cycle;
  const int total_steps = warmup_steps + record_steps;

  Trajectory traj;
  traj.meta.gait = gait;
  traj.meta.noise = noise;
  traj.meta.dims = d;
  traj.meta.actuated = system.actuated_indices();
  traj.meta.n_cycles = n_cycles;
  traj.meta.samples_per_cycle = samples_per_cycle;
  traj.meta.warmup_cycles = options.warmup_cycles;
  traj.meta.dt = dt;
  traj.meta.system_name = system.name();
  traj.t.resize(record_steps);
  traj.g.resize(record_steps, 3);
  traj.ghat.resize(record_steps, 3);
  traj.r.resize(record_steps, d.n);
  traj.rdot.resize(record_steps, d.n);
  traj.r_ref.resize(record_steps, d.n_a);
  traj.rdot_ref.resize(record_steps, d.n_a);

  std::mt19937_64 rng(noise.seed);
  VectorXd delta = VectorXd::Zero(d.n_a);
  VectorXd r_p = options.r_p0.size() ? options.r_p0 : system.passive_elements().r_rest;
  if (r_p.size() != d.n_p) throw DimensionMismatch("r_p0 length != n_p");
  GroupElement g = options.g0;

  // Body velocity and passive rates at an intra-step time with the OU
  // deviation frozen; the deviation also bends the velocity handed to the
  // solver through its attraction drift (the white-noise spike is excluded).
  auto eval_rates = [&](double s, const VectorXd& rp, const VectorXd& dlt,
                        SudsVelocity* v, VectorXd* ra, VectorXd* radot) {
    auto [rr, rrdot] = reference(gait, s);
    *ra = rr + dlt;
    *radot = rrdot - noise.lambda * dlt;
    ShapeState st;
    st.r_a = *ra;
    st.r_p = rp;
    st.rdot_a = *radot;
    st.rdot_p = VectorXd::Zero(d.n_p);
    *v = suds_velocity(system, st, *radot);
  };

  struct Deriv {
    Eigen::Vector3d udot;
    VectorXd rpdot;
  };
  auto f = [&](double s, const Eigen::Vector3d& u, const VectorXd& rp,
               const VectorXd& dlt) -> Deriv {
    SudsVelocity v;
    VectorXd ra, radot;
    eval_rates(s, rp, dlt, &v, &ra, &radot);
    Eigen::Vector3d xi(v.ghat.vx, v.ghat.vy, v.ghat.omega_z);
    return Deriv{se2_dexpinv(u) * xi, v.rdot_p};
  };

  for (int k = 0; k < total_steps; ++k) {
    const double tk = k * dt;
    delta = ou_step(delta, dt, noise, rng);

    try {
      SudsVelocity v;
      VectorXd ra, radot;
      eval_rates(tk, r_p, delta, &v, &ra, &radot);

      if (k >= warmup_steps) {
        const int i = k - warmup_steps;
        auto [rr, rrdot] = reference(gait, tk);
        traj.t[i] = tk - warmup_steps * dt;
        traj.g(i, 0) = g.x;
        traj.g(i, 1) = g.y;
        traj.g(i, 2) = g.heading;
        traj.ghat(i, 0) = v.ghat.vx;
        traj.ghat(i, 1) = v.ghat.vy;
        traj.ghat(i, 2) = v.ghat.omega_z;
        traj.r.row(i) = system.assemble(ra, r_p);
        traj.rdot.row(i) = system.assemble(radot, v.rdot_p);
        traj.r_ref.row(i) = rr;
        traj.rdot_ref.row(i) = rrdot;
      }

      // RK4 on (u, r_p) with u in exponential coordinates about the current
      // pose (Munthe-Kaas); the group update is left-equivariant by
      // construction because the shape dynamics never see the pose.
      const Eigen::Vector3d u0 = Eigen::Vector3d::Zero();
      const Deriv k1 = f(tk, u0, r_p, delta);
      const Deriv k2 =
          f(tk + 0.5 * dt, u0 + 0.5 * dt * k1.udot, r_p + 0.5 * dt * k1.rpdot, delta);
      const Deriv k3 =
          f(tk + 0.5 * dt, u0 + 0.5 * dt * k2.udot, r_p + 0.5 * dt * k2.rpdot, delta);
      const Deriv k4 = f(tk + dt, u0 + dt * k3.udot, r_p + dt * k3.rpdot, delta);
      const Eigen::Vector3d u_end =
          (dt / 6.0) * (k1.udot + 2.0 * k2.udot + 2.0 * k3.udot + k4.udot);
      r_p += (dt / 6.0) * (k1.rpdot + 2.0 * k2.rpdot + 2.0 * k3.rpdot + k4.rpdot);
      g = compose(g, se2_exp(BodyVelocity{u_end.x(), u_end.y(), u_end.z()}, 1.0));
    } catch (const SudsError& e) {
      // Abort with the offending state attached.
      std::ostringstream ss;
      const VectorXd ra_now = reference(gait, tk).first + delta;
      ss << e.what() << " [t=" << tk << ", r_a=(" << ra_now.transpose() << "), r_p=("
         << r_p.transpose() << ")]";
      throw SingularConstraint(ss.str());
    }
  }

  return traj;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json params_to_json(const SwimmerParams& p) {
  json j;
  j["variant"] = variant_name(p.variant);
  j["links"] = p.links;
  j["L"] = p.L;
  j["l"] = p.l;
  j["c"] = p.c;
  j["ratio"] = p.ratio;
  j["k"] = std::vector<double>(p.elements.k.begin(), p.elements.k.end());
  j["r_rest"] = std::vector<double>(p.elements.r_rest.begin(), p.elements.r_rest.end());
  j["d"] = std::vector<double>(p.elements.d.begin(), p.elements.d.end());
  std::vector<int> act1;
  for (int a : p.actuated) act1.push_back(a + 1);  // 1-based in files
  j["actuated"] = act1;
  return j;
}

SwimmerParams params_from_json(const json& j) {
  SwimmerParams p;
  p.variant = variant_from_name(j.at("variant").get<std::string>());
  p.links = j.value("links", 3);
  p.L = j.at("L").get<double>();
  p.l = j.value("l", 0.5);
  p.c = j.at("c").get<double>();
  p.ratio = j.value("ratio", 2.0);
  auto vec = [&](const char* key) {
    std::vector<double> v = j.value(key, std::vector<double>{});
    return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size())).eval();
  };
  p.elements.k = vec("k");
  p.elements.r_rest = vec("r_rest");
  p.elements.d = vec("d");
  for (int a : j.value("actuated", std::vector<int>{})) p.actuated.push_back(a - 1);
  return p;
}

json gait_to_json(const GaitSpec& g) {
  json j;
  j["freq"] = g.freq;
  j["offset"] = std::vector<double>(g.offset.begin(), g.offset.end());
  j["amplitude"] = std::vector<double>(g.amplitude.begin(), g.amplitude.end());
  j["lag"] = std::vector<double>(g.lag.begin(), g.lag.end());
  return j;
}

GaitSpec gait_from_json(const json& j) {
  GaitSpec g;
  g.freq = j.at("freq").get<double>();
  auto vec = [&](const char* key) {
    std::vector<double> v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size())).eval();
  };
  g.offset = vec("offset");
  g.amplitude = vec("amplitude");
  g.lag = vec("lag");
  return g;
}

}  // namespace

void save_trajectory(const Trajectory& traj, const std::string& csv_path,
                     const std::string& meta_path) {
  const Dimensions& d = traj.meta.dims;
  std::ostringstream os;
  os << "t,g.x,g.y,g.theta,ghat.vx,ghat.vy,ghat.wz";
  for (int i = 0; i < d.n; ++i) os << ",r." << i + 1;
  for (int i = 0; i < d.n; ++i) os << ",rdot." << i + 1;
  for (int i = 0; i < d.n_a; ++i) os << ",rref." << i + 1;
  for (int i = 0; i < d.n_a; ++i) os << ",rrefdot." << i + 1;
  os << "\n";
  using detail::fmt_double;
  for (int i = 0; i < traj.samples(); ++i) {
    os << fmt_double(traj.t[i]);
    for (int j = 0; j < 3; ++j) os << ',' << fmt_double(traj.g(i, j));
    for (int j = 0; j < 3; ++j) os << ',' << fmt_double(traj.ghat(i, j));
    for (int j = 0; j < d.n; ++j) os << ',' << fmt_double(traj.r(i, j));
    for (int j = 0; j < d.n; ++j) os << ',' << fmt_double(traj.rdot(i, j));
    for (int j = 0; j < d.n_a; ++j) os << ',' << fmt_double(traj.r_ref(i, j));
    for (int j = 0; j < d.n_a; ++j) os << ',' << fmt_double(traj.rdot_ref(i, j));
    os << '\n';
  }
  detail::atomic_write(csv_path, os.str());

  json meta;
  meta["system"] = params_to_json(traj.meta.params);
  meta["gait"] = gait_to_json(traj.meta.gait);
  meta["noise"] = {{"lambda", traj.meta.noise.lambda},
                   {"sigma", traj.meta.noise.sigma},
                   {"seed", traj.meta.noise.seed}};
  meta["dims"] = {{"n", d.n}, {"n_a", d.n_a}, {"n_p", d.n_p}, {"group_dim", d.group_dim}};
  std::vector<int> act1;
  for (int a : traj.meta.actuated) act1.push_back(a + 1);
  meta["actuated"] = act1;
  meta["n_cycles"] = traj.meta.n_cycles;
  meta["samples_per_cycle"] = traj.meta.samples_per_cycle;
  meta["warmup_cycles"] = traj.meta.warmup_cycles;
  meta["dt"] = traj.meta.dt;
  meta["system_name"] = traj.meta.system_name;
  detail::atomic_write(meta_path, meta.dump(2) + "\n");
}

Trajectory load_trajectory(const std::string& csv_path, const std::string& meta_path) {
  Trajectory traj;
  json meta;
  try {
    meta = json::parse(detail::read_file(meta_path));
  } catch (const json::exception& e) {
    throw IoError("bad trajectory metadata " + meta_path + ": " + e.what());
  }
  try {
    traj.meta.params = params_from_json(meta.at("system"));
    traj.meta.gait = gait_from_json(meta.at("gait"));
    traj.meta.noise.lambda = meta.at("noise").at("lambda").get<double>();
    traj.meta.noise.sigma = meta.at("noise").at("sigma").get<double>();
    traj.meta.noise.seed = meta.at("noise").at("seed").get<std::uint64_t>();
    traj.meta.dims.n = meta.at("dims").at("n").get<int>();
    traj.meta.dims.n_a = meta.at("dims").at("n_a").get<int>();
    traj.meta.dims.n_p = meta.at("dims").at("n_p").get<int>();
    traj.meta.dims.group_dim = meta.at("dims").at("group_dim").get<int>();
    for (int a : meta.at("actuated").get<std::vector<int>>())
      traj.meta.actuated.push_back(a - 1);
    traj.meta.n_cycles = meta.at("n_cycles").get<int>();
    traj.meta.samples_per_cycle = meta.at("samples_per_cycle").get<int>();
    traj.meta.warmup_cycles = meta.at("warmup_cycles").get<int>();
    traj.meta.dt = meta.at("dt").get<double>();
    traj.meta.system_name = meta.value("system_name", "");
  } catch (const json::exception& e) {
    throw IoError("trajectory metadata missing fields: " + std::string(e.what()));
  }

  const Dimensions& d = traj.meta.dims;
  const std::string body = detail::read_file(csv_path);
  std::vector<std::string_view> lines;
  {
    std::string_view sv(body);
    size_t start = 0;
    while (start < sv.size()) {
      size_t pos = sv.find('\n', start);
      if (pos == std::string_view::npos) pos = sv.size();
      if (pos > start) lines.push_back(sv.substr(start, pos - start));
      start = pos + 1;
    }
  }
  if (lines.empty()) throw IoError("empty trajectory csv: " + csv_path);
  const int ncol = 7 + 2 * d.n + 2 * d.n_a;
  if (static_cast<int>(detail::split(lines[0], ',').size()) != ncol)
    throw IoError("trajectory csv column count does not match metadata dims");
  const int N = static_cast<int>(lines.size()) - 1;
  traj.t.resize(N);
  traj.g.resize(N, 3);
  traj.ghat.resize(N, 3);
  traj.r.resize(N, d.n);
  traj.rdot.resize(N, d.n);
  traj.r_ref.resize(N, d.n_a);
  traj.rdot_ref.resize(N, d.n_a);
  for (int i = 0; i < N; ++i) {
    auto f = detail::split(lines[i + 1], ',');
    if (static_cast<int>(f.size()) != ncol)
      throw IoError("trajectory csv row " + std::to_string(i + 2) + " malformed");
    int c = 0;
    traj.t[i] = detail::parse_double(f[c++]);
    for (int j = 0; j < 3; ++j) traj.g(i, j) = detail::parse_double(f[c++]);
    for (int j = 0; j < 3; ++j) traj.ghat(i, j) = detail::parse_double(f[c++]);
    for (int j = 0; j < d.n; ++j) traj.r(i, j) = detail::parse_double(f[c++]);
    for (int j = 0; j < d.n; ++j) traj.rdot(i, j) = detail::parse_double(f[c++]);
    for (int j = 0; j < d.n_a; ++j) traj.r_ref(i, j) = detail::parse_double(f[c++]);
    for (int j = 0; j < d.n_a; ++j) traj.rdot_ref(i, j) = detail::parse_double(f[c++]);
  }
  return traj;
}

TrajectoryStats trajectory_stats(const Trajectory& traj) {
  TrajectoryStats s;
  const int N = traj.samples();
  if (N < 2 || traj.meta.n_cycles < 1) return s;
  s.net_x_per_cycle = (traj.g(N - 1, 0) - traj.g(0, 0)) / traj.meta.n_cycles;
  double acc = 0.0;
  int cnt = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < traj.meta.dims.n_a; ++j) {
      const double dev = traj.r(i, traj.meta.actuated[j]) - traj.r_ref(i, j);
      acc += dev * dev;
      ++cnt;
    }
  }
  s.deviation_std = cnt ? std::sqrt(acc / cnt) : 0.0;
  return s;
}

}  // namespace suds
