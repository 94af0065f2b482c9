#include "suds/phase.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "io_util.hpp"

namespace suds {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double residue(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

VectorXd unwrap(const VectorXd& wrapped) {
  VectorXd out(wrapped.size());
  if (wrapped.size() == 0) return out;
  out[0] = wrapped[0];
  for (int i = 1; i < wrapped.size(); ++i) {
    out[i] = out[i - 1] + wrap_angle(wrapped[i] - wrapped[i - 1]);
  }
  return out;
}

}  // namespace

double PhaseMap::uniformize(double x) const {
  // Integral of the truncated residue density: x plus a periodic correction
  // that vanishes at 0 and 2pi.  Uniform residues give the identity map.
  double out = x;
  for (int k = 1; k <= uni_a.size(); ++k) {
    out += 2.0 / k *
           (uni_a[k - 1] * std::sin(k * x) + uni_b[k - 1] * (std::cos(k * x) - 1.0));
  }
  return out;
}

VectorXd PhaseMap::apply(const MatrixXd& shapes) const {
  const int N = static_cast<int>(shapes.rows());
  if (shapes.cols() != mean.size()) throw DimensionMismatch("shape width != phase map dims");
  VectorXd proto(N);
  for (int i = 0; i < N; ++i) {
    const VectorXd x = shapes.row(i).transpose() - mean;
    const double z1 = projection.col(0).dot(x);
    const double z2 = projection.col(1).dot(x);
    proto[i] = orient * std::atan2(z2, z1);
  }
  const VectorXd psi = unwrap(proto);
  VectorXd phi(N);
  for (int i = 0; i < N; ++i) {
    const double rho = residue(psi[i]);
    const double winding = std::floor((psi[i] - rho) / kTwoPi + 0.5);
    phi[i] = kTwoPi * winding + uniformize(rho);
  }
  return phi;
}

PhaseSeries estimate_phase(const MatrixXd& shapes, double dt, PhaseMap* map_out) {
  const int N = static_cast<int>(shapes.rows());
  const int n = static_cast<int>(shapes.cols());
  if (N < 16 || n < 2) throw ConfigError("phase estimation needs a multivariate series");
  if (!(dt > 0.0)) throw ConfigError("phase estimation needs dt > 0");

  PhaseMap map;
  map.mean = shapes.colwise().mean().transpose();
  MatrixXd X = shapes.rowwise() - map.mean.transpose();

  Eigen::JacobiSVD<MatrixXd> svd(X, Eigen::ComputeThinV);
  const VectorXd sv = svd.singularValues();
  if (sv.size() < 2 || sv[1] * sv[1] < 1e-10 * sv[0] * sv[0]) {
    throw DegenerateOscillation("shape series does not trace a planar loop");
  }
  // Whitened principal scores keep elongated loops star-shaped about the mean.
  map.projection.resize(n, 2);
  map.projection.col(0) = svd.matrixV().col(0) / sv[0];
  map.projection.col(1) = svd.matrixV().col(1) / sv[1];
  map.orient = 1.0;

  // Provisional protophase to fix orientation and collect residues.
  VectorXd proto(N);
  for (int i = 0; i < N; ++i) {
    const double z1 = map.projection.col(0).dot(X.row(i).transpose());
    const double z2 = map.projection.col(1).dot(X.row(i).transpose());
    proto[i] = std::atan2(z2, z1);
  }
  VectorXd psi = unwrap(proto);
  bool flipped = false;
  if (psi[N - 1] < psi[0]) {
    map.orient = -1.0;
    psi = -psi;
    flipped = true;
  }
  const double winding = psi[N - 1] - psi[0];
  if (winding < 5.0 * kTwoPi) {
    throw ConfigError("phase estimation needs at least five cycles of data");
  }

  // Density of the protophase residue, truncated to the first harmonics; the
  // truncation order backs off until the integrated map stays monotone.
  int order = 16;
  while (order >= 0) {
    map.uni_a = VectorXd::Zero(order);
    map.uni_b = VectorXd::Zero(order);
    for (int i = 0; i < N; ++i) {
      const double rho = residue(psi[i]);
      for (int k = 1; k <= order; ++k) {
        map.uni_a[k - 1] += std::cos(k * rho) / N;
        map.uni_b[k - 1] += std::sin(k * rho) / N;
      }
    }
    double slope_min = 1.0;
    for (int j = 0; j < 1024; ++j) {
      const double x = kTwoPi * j / 1024;
      double slope = 1.0;
      for (int k = 1; k <= order; ++k) {
        slope += 2.0 * (map.uni_a[k - 1] * std::cos(k * x) - map.uni_b[k - 1] * std::sin(k * x));
      }
      slope_min = std::min(slope_min, slope);
    }
    if (slope_min > 1e-3) break;
    --order;
  }

  PhaseSeries out;
  out.phi = map.apply(shapes);
  out.mean_rate = (out.phi[N - 1] - out.phi[0]) / ((N - 1) * dt);
  out.flipped = flipped;
  if (map_out) *map_out = map;
  return out;
}

// ---------------------------------------------------------------------------
// Fourier nominal gait
// ---------------------------------------------------------------------------

VectorXd FourierSeries::eval(double phi) const {
  VectorXd out = coeff.col(0);
  for (int k = 1; k <= order; ++k) {
    out += coeff.col(2 * k - 1) * std::cos(k * phi) + coeff.col(2 * k) * std::sin(k * phi);
  }
  return out;
}

VectorXd FourierSeries::deriv(double phi) const {
  VectorXd out = VectorXd::Zero(coeff.rows());
  for (int k = 1; k <= order; ++k) {
    out += k * (-coeff.col(2 * k - 1) * std::sin(k * phi) + coeff.col(2 * k) * std::cos(k * phi));
  }
  return out;
}

NominalGait fit_nominal(const Trajectory& traj, const PhaseSeries& phases, int order) {
  if (order < 1 || order > 15) throw ConfigError("Fourier order must be in [1, 15]");
  const int N = traj.samples();
  if (N != phases.phi.size()) throw DimensionMismatch("phase series length != trajectory");
  const Dimensions& d = traj.meta.dims;
  if ((phases.phi[N - 1] - phases.phi[0]) < 5.0 * kTwoPi)
    throw ConfigError("nominal fit needs at least five cycles");

  const int cols = 1 + 2 * order;
  MatrixXd design(N, cols);
  for (int i = 0; i < N; ++i) {
    design(i, 0) = 1.0;
    for (int k = 1; k <= order; ++k) {
      design(i, 2 * k - 1) = std::cos(k * phases.phi[i]);
      design(i, 2 * k) = std::sin(k * phases.phi[i]);
    }
  }

  Eigen::JacobiSVD<MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 0.0 || sv[0] / sv[sv.size() - 1] > 1e8) {
    throw IllConditioned("phase coverage too clumped for the Fourier fit");
  }

  NominalGait nom;
  nom.order = order;
  nom.base_freq = phases.mean_rate;
  nom.dims = d;
  nom.actuated = traj.meta.actuated;
  nom.map = PhaseMap{};

  std::vector<int> passive;
  for (int i = 0; i < d.n; ++i) {
    if (std::find(nom.actuated.begin(), nom.actuated.end(), i) == nom.actuated.end())
      passive.push_back(i);
  }

  const int n_out = d.n + d.group_dim + d.n_p;
  MatrixXd Y(N, n_out);
  Y.leftCols(d.n) = traj.r;
  Y.middleCols(d.n, d.group_dim) = traj.ghat.leftCols(d.group_dim);
  for (int j = 0; j < d.n_p; ++j) Y.col(d.n + d.group_dim + j) = traj.rdot.col(passive[j]);

  const MatrixXd sol = svd.solve(Y);  // cols x n_out
  nom.shape.order = order;
  nom.shape.coeff = sol.leftCols(d.n).transpose();
  nom.ghat.order = order;
  nom.ghat.coeff = sol.middleCols(d.n, d.group_dim).transpose();
  nom.rdot_p.order = order;
  nom.rdot_p.coeff = sol.rightCols(d.n_p).transpose();

  const MatrixXd resid = Y - design * sol;
  nom.residual_rms = (resid.array().square().colwise().mean()).sqrt().matrix().transpose();
  return nom;
}

DeviationSet deviations(const Trajectory& traj, const NominalGait& nominal,
                        const PhaseSeries& phases) {
  const int N = traj.samples();
  if (N != phases.phi.size()) throw DimensionMismatch("phase series length != trajectory");
  const Dimensions& d = nominal.dims;
  if (traj.meta.dims.n != d.n || traj.meta.dims.group_dim != d.group_dim)
    throw DimensionMismatch("trajectory dims != nominal dims");

  std::vector<int> passive;
  for (int i = 0; i < d.n; ++i) {
    if (std::find(nominal.actuated.begin(), nominal.actuated.end(), i) ==
        nominal.actuated.end())
      passive.push_back(i);
  }

  DeviationSet out;
  out.dims = d;
  out.actuated = nominal.actuated;
  out.phi = phases.phi;
  out.delta.resize(N, d.n);
  out.deltadot.resize(N, d.n);
  out.deltadot_a.resize(N, d.n_a);
  out.targets.resize(N, d.group_dim + d.n_p);
  for (int i = 0; i < N; ++i) {
    const double phi = phases.phi[i];
    out.delta.row(i) = traj.r.row(i) - nominal.theta(phi).transpose();
    out.deltadot.row(i) = traj.rdot.row(i) - nominal.theta_dot(phi).transpose();
    for (int j = 0; j < d.n_a; ++j) out.deltadot_a(i, j) = out.deltadot(i, nominal.actuated[j]);
    out.targets.block(i, 0, 1, d.group_dim) = traj.ghat.row(i).leftCols(d.group_dim);
    for (int j = 0; j < d.n_p; ++j)
      out.targets(i, d.group_dim + j) = traj.rdot(i, passive[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON persistence
// ---------------------------------------------------------------------------

namespace {

json vec_to_json(const VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

VectorXd vec_from_json(const json& j) {
  std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<long>(v.size()));
}

json mat_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

MatrixXd mat_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return MatrixXd();
  const int cols = static_cast<int>(j[0].size());
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json series_to_json(const FourierSeries& s) {
  return {{"order", s.order}, {"coeff", mat_to_json(s.coeff)}};
}

FourierSeries series_from_json(const json& j) {
  FourierSeries s;
  s.order = j.at("order").get<int>();
  s.coeff = mat_from_json(j.at("coeff"));
  return s;
}

}  // namespace

json nominal_to_json(const NominalGait& nom) {
  json j;
  j["order"] = nom.order;
  j["base_freq"] = nom.base_freq;
  j["dims"] = {{"n", nom.dims.n},
               {"n_a", nom.dims.n_a},
               {"n_p", nom.dims.n_p},
               {"group_dim", nom.dims.group_dim}};
  std::vector<int> act1;
  for (int a : nom.actuated) act1.push_back(a + 1);
  j["actuated"] = act1;
  j["shape"] = series_to_json(nom.shape);
  j["ghat"] = series_to_json(nom.ghat);
  j["rdot_p"] = series_to_json(nom.rdot_p);
  j["residual_rms"] = vec_to_json(nom.residual_rms);
  j["phase_map"] = {{"mean", vec_to_json(nom.map.mean)},
                    {"projection", mat_to_json(nom.map.projection)},
                    {"orient", nom.map.orient},
                    {"uni_a", vec_to_json(nom.map.uni_a)},
                    {"uni_b", vec_to_json(nom.map.uni_b)}};
  return j;
}

NominalGait nominal_from_json(const json& j) {
  NominalGait nom;
  nom.order = j.at("order").get<int>();
  nom.base_freq = j.at("base_freq").get<double>();
  nom.dims.n = j.at("dims").at("n").get<int>();
  nom.dims.n_a = j.at("dims").at("n_a").get<int>();
  nom.dims.n_p = j.at("dims").at("n_p").get<int>();
  nom.dims.group_dim = j.at("dims").at("group_dim").get<int>();
  for (int a : j.at("actuated").get<std::vector<int>>()) nom.actuated.push_back(a - 1);
  nom.shape = series_from_json(j.at("shape"));
  nom.ghat = series_from_json(j.at("ghat"));
  nom.rdot_p = series_from_json(j.at("rdot_p"));
  nom.residual_rms = vec_from_json(j.at("residual_rms"));
  const json& pm = j.at("phase_map");
  nom.map.mean = vec_from_json(pm.at("mean"));
  nom.map.projection = mat_from_json(pm.at("projection"));
  nom.map.orient = pm.at("orient").get<double>();
  nom.map.uni_a = vec_from_json(pm.at("uni_a"));
  nom.map.uni_b = vec_from_json(pm.at("uni_b"));
  return nom;
}

void save_nominal(const NominalGait& nominal, const std::string& path) {
  detail::atomic_write(path, nominal_to_json(nominal).dump(2) + "\n");
}

NominalGait load_nominal(const std::string& path) {
  try {
    return nominal_from_json(json::parse(detail::read_file(path)));
  } catch (const json::exception& e) {
    throw IoError("bad nominal gait file " + path + ": " + e.what());
  }
}

}  // namespace suds
