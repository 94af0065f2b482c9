#include "suds/system.hpp"

#include <algorithm>

namespace suds {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace

void SudsSystem::init(std::string name, int n, int group_dim, std::vector<int> actuated,
                      PassiveElementSet elements) {
  name_ = std::move(name);
  std::sort(actuated.begin(), actuated.end());
  for (int idx : actuated) {
    if (idx < 0 || idx >= n) throw ConfigError("actuated index out of range: " + std::to_string(idx));
  }
  if (std::adjacent_find(actuated.begin(), actuated.end()) != actuated.end())
    throw ConfigError("duplicate actuated index");
  actuated_ = std::move(actuated);
  passive_.clear();
  for (int i = 0; i < n; ++i) {
    if (!std::binary_search(actuated_.begin(), actuated_.end(), i)) passive_.push_back(i);
  }
  dims_.n = n;
  dims_.n_a = static_cast<int>(actuated_.size());
  dims_.n_p = static_cast<int>(passive_.size());
  dims_.group_dim = group_dim;
  if (group_dim != 1 && group_dim != 3) throw ConfigError("group_dim must be 1 or 3");

  const int np = dims_.n_p;
  auto fit = [&](VectorXd& v, double fill) {
    if (v.size() == 0) v = VectorXd::Constant(np, fill);
    if (v.size() != np) throw ConfigError("passive element array length != n_p");
  };
  fit(elements.k, 0.0);
  fit(elements.r_rest, 0.0);
  fit(elements.d, 0.0);
  if ((elements.k.array() < 0).any() || (elements.d.array() < 0).any())
    throw ConfigError("spring and damping constants must be non-negative");
  elements_ = std::move(elements);
}

ConnectionEval SudsSystem::connection(const VectorXd& r) const {
  require(r.size() == dims_.n, "shape vector length != n");
  validate_shape(r);
  ConnectionEval conn;
  eval(r, &conn, nullptr);
  return conn;
}

ShapeMetric SudsSystem::shape_metric(const VectorXd& r) const {
  require(r.size() == dims_.n, "shape vector length != n");
  validate_shape(r);
  ShapeMetric metric;
  eval(r, nullptr, &metric);
  fill_blocks(&metric);
  return metric;
}

void SudsSystem::evaluate(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const {
  require(r.size() == dims_.n, "shape vector length != n");
  validate_shape(r);
  eval(r, conn, metric);
  if (metric) fill_blocks(metric);
}

void SudsSystem::validate_shape(const VectorXd& r) const {
  if (!r.allFinite()) throw ConfigError("non-finite shape vector");
}

void SudsSystem::fill_blocks(ShapeMetric* metric) const {
  const int na = dims_.n_a;
  const int np = dims_.n_p;
  metric->Maa.resize(na, na);
  metric->Map.resize(na, np);
  metric->Mpa.resize(np, na);
  metric->Mpp.resize(np, np);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) metric->Maa(i, j) = metric->M(actuated_[i], actuated_[j]);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < np; ++j) metric->Map(i, j) = metric->M(actuated_[i], passive_[j]);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < na; ++j) metric->Mpa(i, j) = metric->M(passive_[i], actuated_[j]);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) metric->Mpp(i, j) = metric->M(passive_[i], passive_[j]);
}

VectorXd SudsSystem::assemble(const VectorXd& values_a, const VectorXd& values_p) const {
  require(values_a.size() == dims_.n_a && values_p.size() == dims_.n_p,
          "split vector lengths mismatch");
  VectorXd full(dims_.n);
  for (int i = 0; i < dims_.n_a; ++i) full[actuated_[i]] = values_a[i];
  for (int i = 0; i < dims_.n_p; ++i) full[passive_[i]] = values_p[i];
  return full;
}

void SudsSystem::split(const VectorXd& full, VectorXd* out_a, VectorXd* out_p) const {
  require(full.size() == dims_.n, "full vector length != n");
  if (out_a) {
    out_a->resize(dims_.n_a);
    for (int i = 0; i < dims_.n_a; ++i) (*out_a)[i] = full[actuated_[i]];
  }
  if (out_p) {
    out_p->resize(dims_.n_p);
    for (int i = 0; i < dims_.n_p; ++i) (*out_p)[i] = full[passive_[i]];
  }
}

ShapeState make_state(const SudsSystem& system, const VectorXd& r_full, const VectorXd& rdot_full) {
  ShapeState st;
  system.split(r_full, &st.r_a, &st.r_p);
  if (rdot_full.size() == 0) {
    st.rdot_a = VectorXd::Zero(system.dims().n_a);
    st.rdot_p = VectorXd::Zero(system.dims().n_p);
  } else {
    system.split(rdot_full, &st.rdot_a, &st.rdot_p);
  }
  return st;
}

PassiveForce passive_force(const PassiveElementSet& elements, const SudsSystem& system,
                           const ShapeState& state) {
  const Dimensions& d = system.dims();
  require(state.r_p.size() == d.n_p, "r_p length != n_p");
  PassiveForce out;
  out.f_o = VectorXd::Zero(d.n);
  out.F = MatrixXd::Zero(d.n, d.n);
  const auto& passive = system.passive_indices();
  for (int i = 0; i < d.n_p; ++i) {
    const int row = passive[i];
    out.f_o[row] = -elements.k[i] * (state.r_p[i] - elements.r_rest[i]);
    out.F(row, row) = -elements.d[i];
  }
  return out;
}

SudsVelocity suds_velocity(const SudsSystem& system, const ShapeState& state,
                           const VectorXd& rdot_a) {
  const Dimensions& d = system.dims();
  require(state.r_a.size() == d.n_a && state.r_p.size() == d.n_p, "shape state dims mismatch");
  require(rdot_a.size() == d.n_a, "rdot_a length != n_a");

  const VectorXd r = system.assemble(state.r_a, state.r_p);
  ConnectionEval conn;
  ShapeMetric metric;
  system.evaluate(r, &conn, &metric);

  // A split by columns.
  MatrixXd A_a(d.group_dim, d.n_a), A_p(d.group_dim, d.n_p);
  for (int j = 0; j < d.n_a; ++j) A_a.col(j) = conn.A.col(system.actuated_indices()[j]);
  for (int j = 0; j < d.n_p; ++j) A_p.col(j) = conn.A.col(system.passive_indices()[j]);

  VectorXd rdot_p0 = VectorXd::Zero(d.n_p);
  MatrixXd B_p = MatrixXd::Zero(d.n_p, d.n_a);
  if (d.n_p > 0) {
    // Passive-row force balance with the spring/damper applied wrench:
    //   -(M_pa rdot_a + M_pp rdot_p) + f_o + F rdot = 0
    // => (M_pp + diag(d)) rdot_p = f_o_p - M_pa rdot_a
    const PassiveElementSet& el = system.passive_elements();
    MatrixXd S = metric.Mpp;
    S.diagonal() += el.d;

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
      throw NonDissipative("passive solve matrix (M_pp + F_p) is not positive definite");
    }
    VectorXd f_o_p(d.n_p);
    for (int i = 0; i < d.n_p; ++i)
      f_o_p[i] = -el.k[i] * (state.r_p[i] - el.r_rest[i]);

    Eigen::LLT<MatrixXd> llt(S);
    rdot_p0 = llt.solve(f_o_p);
    B_p = llt.solve(-metric.Mpa);
  }

  SudsVelocity out;
  out.rdot_p = rdot_p0 + B_p * rdot_a;
  out.C_tilde.resize(d.group_dim + d.n_p);
  out.B.resize(d.group_dim + d.n_p, d.n_a);
  out.C_tilde.head(d.group_dim) = A_p * rdot_p0;
  out.C_tilde.tail(d.n_p) = rdot_p0;
  out.B.topRows(d.group_dim) = A_a + A_p * B_p;
  out.B.bottomRows(d.n_p) = B_p;

  const VectorXd ghat_vec = out.C_tilde.head(d.group_dim) + out.B.topRows(d.group_dim) * rdot_a;
  out.ghat = BodyVelocity{};
  out.ghat.vx = ghat_vec[0];
  if (d.group_dim == 3) {
    out.ghat.vy = ghat_vec[1];
    out.ghat.omega_z = ghat_vec[2];
  }
  return out;
}

VectorXd actuated_torque(const SudsSystem& system, const ShapeState& state,
                         const VectorXd& rdot_a) {
  const SudsVelocity v = suds_velocity(system, state, rdot_a);
  const VectorXd r = system.assemble(state.r_a, state.r_p);
  const ShapeMetric metric = system.shape_metric(r);
  return -metric.Map * v.rdot_p - metric.Maa * rdot_a;
}

}  // namespace suds
