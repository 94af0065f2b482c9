#include "suds/sysid.hpp"

#include <algorithm>
#include <cmath>

#include "io_util.hpp"
#include "json_detail.hpp"

namespace suds {

using nlohmann::json;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double wrap_to(double phi, double center) {
  return std::remainder(phi - center, kTwoPi);
}
}  // namespace

int regressor_count(int n, int n_a) { return 1 + n + n_a + n * n_a; }

VectorXd build_regressors(const VectorXd& delta, const VectorXd& deltadot_a) {
  const int n = static_cast<int>(delta.size());
  const int n_a = static_cast<int>(deltadot_a.size());
  VectorXd x(regressor_count(n, n_a));
  x[0] = 1.0;
  x.segment(1, n) = delta;
  x.segment(1 + n, n_a) = deltadot_a;
  int c = 1 + n + n_a;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n_a; ++j) x[c++] = delta[i] * deltadot_a[j];
  }
  return x;
}

VectorXd SudsModel::C(int bin) const { return coeffs[bin].row(0).transpose(); }

MatrixXd SudsModel::C_r(int bin) const {
  return coeffs[bin].middleRows(1, dims.n).transpose();
}

MatrixXd SudsModel::B(int bin) const {
  return coeffs[bin].middleRows(1 + dims.n, dims.n_a).transpose();
}

MatrixXd SudsModel::B_r(int bin) const {
  return coeffs[bin].bottomRows(dims.n * dims.n_a).transpose();
}

SudsModel fit(const DeviationSet& data, const NominalGait& nominal, const FitConfig& config) {
  const int N = data.samples();
  const Dimensions& d = data.dims;
  const int F = regressor_count(d.n, d.n_a);
  const int n_out = d.group_dim + d.n_p;
  if (config.bins < 2) throw ConfigError("need at least two phase bins");
  if (!(config.bandwidth > 0.0) || config.ridge < 0.0) throw ConfigError("bad fit config");
  if (N < 2) throw ConfigError("empty deviation set");
  if (data.targets.cols() != n_out) throw DimensionMismatch("target width != outputs");
  if ((data.phi[N - 1] - data.phi[0]) < 5.0 * kTwoPi)
    throw InsufficientCoverage("training data spans fewer than five cycles");

  MatrixXd X(N, F);
  for (int i = 0; i < N; ++i) {
    X.row(i) =
        build_regressors(data.delta.row(i).transpose(), data.deltadot_a.row(i).transpose())
            .transpose();
  }

  // Fit against the template residual and fold the template back into the
  // per-bin offset afterwards: the kernel average of a raw harmonic target
  // would shrink it by exp(-k^2 h^2 / 2), a bias the phase-only template does
  // not carry.  The residual's phase dependence is weak, so the bias on it is
  // negligible.
  MatrixXd Y(N, n_out);
  for (int i = 0; i < N; ++i) {
    Y.row(i) = data.targets.row(i) - template_predict(nominal, data.phi[i]).transpose();
  }

  SudsModel model;
  model.config = config;
  model.dims = d;
  model.actuated = data.actuated;
  model.nominal = nominal;
  model.centers.resize(config.bins);
  for (int b = 0; b < config.bins; ++b) model.centers[b] = kTwoPi * b / config.bins;
  model.coeffs.resize(config.bins);
  model.mass.resize(config.bins);
  model.residual_rms.resize(config.bins, n_out);
  model.rank_deficient.assign(config.bins, false);
  model.weak_columns.resize(config.bins);

  const double inv2h2 = 1.0 / (2.0 * config.bandwidth * config.bandwidth);
  VectorXd w(N);
  for (int b = 0; b < config.bins; ++b) {
    const double cb = model.centers[b];
    for (int i = 0; i < N; ++i) {
      const double dphi = wrap_to(data.phi[i], cb);
      w[i] = std::exp(-dphi * dphi * inv2h2);
    }
    const double mass = w.sum();
    model.mass[b] = mass;
    if (mass < config.min_mass_factor * F) {
      throw InsufficientCoverage("phase bin " + std::to_string(b) + " has weight mass " +
                                 std::to_string(mass) + " < " +
                                 std::to_string(config.min_mass_factor * F));
    }

    // Column scaling: solve in units of the weighted column RMS so the ridge
    // and the rank diagnostics are scale-free.
    const MatrixXd Xw = w.cwiseSqrt().asDiagonal() * X;
    VectorXd col_rms(F);
    for (int j = 0; j < F; ++j) col_rms[j] = Xw.col(j).norm() / std::sqrt(mass);
    const double rms_max = col_rms.maxCoeff();
    std::vector<int>& weak = model.weak_columns[b];
    for (int j = 0; j < F; ++j) {
      if (col_rms[j] < config.weak_column_tol * rms_max) weak.push_back(j);
    }
    VectorXd scale(F);
    for (int j = 0; j < F; ++j) scale[j] = std::max(col_rms[j], 1e-14 * rms_max + 1e-300);

    // Rank diagnostic on the raw weighted design: deficient when the ridge
    // would have to carry more than rank_tol_factor * ridge of the top
    // singular value.
    {
      const MatrixXd Graw = Xw.transpose() * Xw;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es_raw(Graw);
      if (es_raw.info() != Eigen::Success) throw SudsError("eigendecomposition failed in fit");
      const double lmax = std::max(es_raw.eigenvalues().maxCoeff(), 0.0);
      const double lmin = std::max(es_raw.eigenvalues().minCoeff(), 0.0);
      if (lmax <= 0.0)
        throw InsufficientCoverage("phase bin " + std::to_string(b) + " is empty");
      if (std::sqrt(lmin / lmax) < config.rank_tol_factor * config.ridge)
        model.rank_deficient[b] = true;
    }

    const MatrixXd Xs = Xw * scale.cwiseInverse().asDiagonal();
    const MatrixXd G = Xs.transpose() * Xs;
    const MatrixXd Yw = w.cwiseSqrt().asDiagonal() * Y;
    const MatrixXd b_rhs = Xs.transpose() * Yw;

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
    if (es.info() != Eigen::Success) throw SudsError("eigendecomposition failed in fit");
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    if (lmax <= 0.0) throw InsufficientCoverage("phase bin " + std::to_string(b) + " is empty");

    MatrixXd Greg = G;
    Greg.diagonal().array() += config.ridge * lmax;
    const MatrixXd theta_scaled = Greg.llt().solve(b_rhs);
    model.coeffs[b] = scale.cwiseInverse().asDiagonal() * theta_scaled;
    model.coeffs[b].row(0) += template_predict(nominal, cb).transpose();

    const MatrixXd resid = Yw - Xs * theta_scaled;
    model.residual_rms.row(b) =
        (resid.array().square().colwise().sum() / mass).sqrt().matrix();
  }
  return model;
}

VectorXd predict(const SudsModel& model, double phi, const VectorXd& delta,
                 const VectorXd& deltadot_a) {
  if (delta.size() != model.dims.n || deltadot_a.size() != model.dims.n_a)
    throw DimensionMismatch("predict input dims mismatch");
  const int bins = model.config.bins;
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  const double pos = p / kTwoPi * bins;
  int b0 = static_cast<int>(std::floor(pos)) % bins;
  const int b1 = (b0 + 1) % bins;
  const double frac = pos - std::floor(pos);
  const MatrixXd theta = (1.0 - frac) * model.coeffs[b0] + frac * model.coeffs[b1];
  return theta.transpose() * build_regressors(delta, deltadot_a);
}

VectorXd template_predict(const NominalGait& nominal, double phi) {
  VectorXd out(nominal.dims.group_dim + nominal.dims.n_p);
  out.head(nominal.dims.group_dim) = nominal.ghat.eval(phi);
  out.tail(nominal.dims.n_p) = nominal.rdot_p.eval(phi);
  return out;
}

EvaluationReport evaluate(const SudsModel& model, const NominalGait& nominal,
                          const DeviationSet& test) {
  const int N = test.samples();
  const int n_out = model.outputs();
  if (test.dims.n != model.dims.n || test.dims.group_dim != model.dims.group_dim ||
      test.dims.n_p != model.dims.n_p)
    throw DimensionMismatch("test data dims != model dims");

  EvaluationReport rep;
  rep.m = N;
  rep.phi = test.phi;
  rep.resid_data.resize(N, n_out);
  rep.resid_template.resize(N, n_out);
  for (int i = 0; i < N; ++i) {
    const VectorXd y = test.targets.row(i).transpose();
    const VectorXd yd =
        predict(model, test.phi[i], test.delta.row(i).transpose(),
                test.deltadot_a.row(i).transpose());
    const VectorXd yt = template_predict(nominal, test.phi[i]);
    rep.resid_data.row(i) = (yd - y).transpose();
    rep.resid_template.row(i) = (yt - y).transpose();
  }

  const int g = model.dims.group_dim;
  rep.err_data_ghat = rep.resid_data.leftCols(g).array().abs().sum();
  rep.err_template_ghat = rep.resid_template.leftCols(g).array().abs().sum();
  rep.err_data_rdot = rep.resid_data.rightCols(model.dims.n_p).array().abs().sum();
  rep.err_template_rdot = rep.resid_template.rightCols(model.dims.n_p).array().abs().sum();
  if (rep.err_template_ghat <= 0.0 || (model.dims.n_p > 0 && rep.err_template_rdot <= 0.0))
    throw DegenerateTemplate("template error sum is zero; Gamma undefined");
  rep.gamma_ghat = 1.0 - rep.err_data_ghat / rep.err_template_ghat;
  rep.gamma_rdot =
      model.dims.n_p > 0 ? 1.0 - rep.err_data_rdot / rep.err_template_rdot : 0.0;

  rep.gamma_component.resize(n_out);
  for (int j = 0; j < n_out; ++j) {
    const double et = rep.resid_template.col(j).array().abs().sum();
    const double ed = rep.resid_data.col(j).array().abs().sum();
    if (et > 0.0) {
      rep.gamma_component[j] = 1.0 - ed / et;
    } else {
      rep.gamma_component[j] = std::nullopt;
    }
  }
  return rep;
}

DeviationSet deviations_for(const NominalGait& nominal, const Trajectory& traj) {
  PhaseSeries phases;
  phases.phi = nominal.map.apply(traj.r);
  const int N = traj.samples();
  phases.mean_rate =
      N > 1 ? (phases.phi[N - 1] - phases.phi[0]) / (traj.t[N - 1] - traj.t[0]) : 0.0;
  return deviations(traj, nominal, phases);
}

EvaluationReport evaluate_trajectory(const SudsModel& model, const NominalGait& nominal,
                                     const Trajectory& test) {
  return evaluate(model, nominal, deviations_for(nominal, test));
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

json mat_json(const MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i)
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

MatrixXd mat_unjson(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return MatrixXd();
  const int cols = static_cast<int>(j[0].size());
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  return m;
}

}  // namespace

void save_model(const SudsModel& model, const std::string& path) {
  json j;
  j["config"] = {{"bins", model.config.bins},
                 {"bandwidth", model.config.bandwidth},
                 {"ridge", model.config.ridge},
                 {"min_mass_factor", model.config.min_mass_factor},
                 {"rank_tol_factor", model.config.rank_tol_factor},
                 {"weak_column_tol", model.config.weak_column_tol}};
  j["dims"] = {{"n", model.dims.n},
               {"n_a", model.dims.n_a},
               {"n_p", model.dims.n_p},
               {"group_dim", model.dims.group_dim}};
  std::vector<int> act1;
  for (int a : model.actuated) act1.push_back(a + 1);
  j["actuated"] = act1;
  j["centers"] = std::vector<double>(model.centers.begin(), model.centers.end());
  json coeffs = json::array();
  for (const auto& c : model.coeffs) coeffs.push_back(mat_json(c));
  j["coeffs"] = coeffs;
  j["mass"] = std::vector<double>(model.mass.begin(), model.mass.end());
  j["residual_rms"] = mat_json(model.residual_rms);
  j["rank_deficient"] = model.rank_deficient;
  j["weak_columns"] = model.weak_columns;
  j["nominal"] = nominal_to_json(model.nominal);
  detail::atomic_write(path, j.dump(2) + "\n");
}

SudsModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw IoError("bad model file " + path + ": " + e.what());
  }
  try {
    SudsModel m;
    m.config.bins = j.at("config").at("bins").get<int>();
    m.config.bandwidth = j.at("config").at("bandwidth").get<double>();
    m.config.ridge = j.at("config").at("ridge").get<double>();
    m.config.min_mass_factor = j.at("config").at("min_mass_factor").get<double>();
    m.config.rank_tol_factor = j.at("config").at("rank_tol_factor").get<double>();
    m.config.weak_column_tol = j.at("config").at("weak_column_tol").get<double>();
    m.dims.n = j.at("dims").at("n").get<int>();
    m.dims.n_a = j.at("dims").at("n_a").get<int>();
    m.dims.n_p = j.at("dims").at("n_p").get<int>();
    m.dims.group_dim = j.at("dims").at("group_dim").get<int>();
    for (int a : j.at("actuated").get<std::vector<int>>()) m.actuated.push_back(a - 1);
    std::vector<double> centers = j.at("centers").get<std::vector<double>>();
    m.centers = Eigen::Map<const VectorXd>(centers.data(), static_cast<long>(centers.size()));
    for (const auto& c : j.at("coeffs")) m.coeffs.push_back(mat_unjson(c));
    std::vector<double> mass = j.at("mass").get<std::vector<double>>();
    m.mass = Eigen::Map<const VectorXd>(mass.data(), static_cast<long>(mass.size()));
    m.residual_rms = mat_unjson(j.at("residual_rms"));
    m.rank_deficient = j.at("rank_deficient").get<std::vector<bool>>();
    m.weak_columns = j.at("weak_columns").get<std::vector<std::vector<int>>>();
    m.nominal = nominal_from_json(j.at("nominal"));
    return m;
  } catch (const json::exception& e) {
    throw IoError("model file missing fields: " + std::string(e.what()));
  }
}

void save_fit_report(const SudsModel& model, const std::string& path) {
  json j;
  j["features"] = model.features();
  j["outputs"] = model.outputs();
  j["bins"] = model.config.bins;
  j["mass"] = std::vector<double>(model.mass.begin(), model.mass.end());
  j["residual_rms"] = mat_json(model.residual_rms);
  j["rank_deficient"] = model.rank_deficient;
  j["weak_columns"] = model.weak_columns;
  j["nominal_residual_rms"] = std::vector<double>(model.nominal.residual_rms.begin(),
                                                  model.nominal.residual_rms.end());
  detail::atomic_write(path, j.dump(2) + "\n");
}

void save_report(const EvaluationReport& report, const std::string& json_path,
                 const std::string& residuals_csv_path) {
  json j;
  j["m"] = report.m;
  j["gamma_ghat"] = report.gamma_ghat;
  j["gamma_rdot"] = report.gamma_rdot;
  json comps = json::array();
  for (const auto& g : report.gamma_component) {
    if (g) comps.push_back(*g); else comps.push_back(nullptr);
  }
  j["gamma_component"] = comps;
  j["err_data_ghat"] = report.err_data_ghat;
  j["err_template_ghat"] = report.err_template_ghat;
  j["err_data_rdot"] = report.err_data_rdot;
  j["err_template_rdot"] = report.err_template_rdot;
  detail::atomic_write(json_path, j.dump(2) + "\n");

  if (!residuals_csv_path.empty()) {
    std::ostringstream os;
    const int n_out = static_cast<int>(report.resid_data.cols());
    os << "phi";
    for (int c = 0; c < n_out; ++c) os << ",resid_data." << c + 1;
    for (int c = 0; c < n_out; ++c) os << ",resid_template." << c + 1;
    os << "\n";
    using detail::fmt_double;
    for (int i = 0; i < report.m; ++i) {
      os << fmt_double(report.phi[i]);
      for (int c = 0; c < n_out; ++c) os << ',' << fmt_double(report.resid_data(i, c));
      for (int c = 0; c < n_out; ++c) os << ',' << fmt_double(report.resid_template(i, c));
      os << '\n';
    }
    detail::atomic_write(residuals_csv_path, os.str());
  }
}

}  // namespace suds
