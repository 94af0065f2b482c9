#include "suds/swimmers.hpp"

#include <cmath>

namespace suds {

namespace {

void check_params(const SwimmerParams& p) {
  if (!(p.L > 0.0)) throw ConfigError("link length L must be positive");
  if (!(p.c > 0.0)) throw ConfigError("drag coefficient c must be positive");
  if (!(p.ratio >= 1.0)) throw ConfigError("drag ratio must be >= 1");
}

// ---------------------------------------------------------------------------
// Linear passive swimmer
//
// Coordinates: r = (r1, r2), r1 the spring length between payload and paddle
// (passive), r2 the paddle bar length (actuated).  Two bluff faces interact
// with the fluid: the payload face of length l moving at xdot, and the paddle
// face of length r2 moving at xdot + rdot1 - rdot2.  The bar material flowing
// through the T-joint as r2 changes adds slender-body drag c*r2/12 on rdot2;
// without it the equal-rates direction rdot1 == rdot2 moves no face and the
// metric would be only semidefinite.
// ---------------------------------------------------------------------------

class LinearPassiveSwimmer final : public SudsSystem {
 public:
  explicit LinearPassiveSwimmer(const SwimmerParams& p) : p_(p) {
    check_params(p);
    if (!(p.l > 0.0)) throw ConfigError("stem length l must be positive");
    std::vector<int> actuated = p.actuated.empty() ? std::vector<int>{1} : p.actuated;
    PassiveElementSet el = p.elements;
    if (el.k.size() == 0) el.k = VectorXd::Constant(1, 1.0);
    if (el.r_rest.size() == 0) el.r_rest = VectorXd::Constant(1, 1.0);
    init("linear_passive", 2, 1, actuated, el);
    if (dims_.n_p != 1)
      throw ConfigError("linear passive swimmer has exactly one passive coordinate");
  }

  void validate_shape(const VectorXd& r) const override {
    SudsSystem::validate_shape(r);
    // The dependent bar height L - r2 bounds the paddle length.
    if (!(r[1] > 0.0 && r[1] < p_.L))
      throw ConfigError("paddle length r2 out of range (0, L): r2=" + std::to_string(r[1]));
  }

 protected:
  void eval(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const override {
    const double c = p_.c, l = p_.l, r2 = r[1];
    if (conn) {
      conn->omega_g = MatrixXd::Constant(1, 1, c * (l + r2));
      conn->omega_r.resize(1, 2);
      conn->omega_r << c * r2, -c * r2;
      conn->A.resize(1, 2);
      const double a = -r2 / (l + r2);
      conn->A << a, -a;
    }
    if (metric) {
      const double m = c * l * r2 / (l + r2);
      metric->M.resize(2, 2);
      metric->M << m, -m, -m, m + c * r2 / 12.0;
    }
  }

 private:
  SwimmerParams p_;
};

// ---------------------------------------------------------------------------
// Pushmepullyou swimmer
//
// Coordinates: r = (r1, r2), the symmetric opening angles of the left
// (passive) and right (actuated) link pairs; the central link of length L
// lies on the symmetry axis so the swimmer translates along x only.
// ---------------------------------------------------------------------------

class PushmepullyouSwimmer final : public SudsSystem {
 public:
  explicit PushmepullyouSwimmer(const SwimmerParams& p) : p_(p) {
    check_params(p);
    std::vector<int> actuated = p.actuated.empty() ? std::vector<int>{1} : p.actuated;
    PassiveElementSet el = p.elements;
    if (el.k.size() == 0) el.k = VectorXd::Constant(1, 10.0);
    if (el.r_rest.size() == 0) el.r_rest = VectorXd::Constant(1, M_PI / 2.0);
    init("pushmepullyou", 2, 1, actuated, el);
    if (dims_.n_p != 1)
      throw ConfigError("pushmepullyou has exactly one passive coordinate");
  }

 protected:
  void eval(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const override {
    const double L = p_.L, c = p_.c;
    const double s1 = std::sin(r[0]), c1 = std::cos(r[0]);
    const double s2 = std::sin(r[1]), c2 = std::cos(r[1]);
    const double alpha_inv = 0.5 + c1 * c1 + 2.0 * s1 * s1 + c2 * c2 + 2.0 * s2 * s2;
    const double alpha = 1.0 / alpha_inv;
    if (conn) {
      // Total x drag: 2cL [ alpha_inv * xdot + L s1 rdot1 - L s2 rdot2 ] = 0.
      conn->omega_g = MatrixXd::Constant(1, 1, 2.0 * c * L * alpha_inv);
      conn->omega_r.resize(1, 2);
      conn->omega_r << 2.0 * c * L * L * s1, -2.0 * c * L * L * s2;
      conn->A.resize(1, 2);
      conn->A << -alpha * L * s1, alpha * L * s2;
    }
    if (metric) {
      // Joint-rate metric matching the stacked torque balance after the body
      // velocity is eliminated; the actuated diagonal is the mirror image of
      // the passive one.
      const double L3 = L * L * L;
      const double diag0 = c * (23.0 / 12.0 * L3 + 2.0 * alpha * L3 * s1 * s1);
      const double diag1 = c * (23.0 / 12.0 * L3 + 2.0 * alpha * L3 * s2 * s2);
      const double cross = -2.0 * c * alpha * L3 * s1 * s2;
      metric->M.resize(2, 2);
      metric->M << diag0, cross, cross, diag1;
    }
  }

 private:
  SwimmerParams p_;
};

// ---------------------------------------------------------------------------
// Link chain (Purcell swimmers)
// ---------------------------------------------------------------------------

class LinkChain final : public SudsSystem {
 public:
  LinkChain(int n_links, const SwimmerParams& p) : p_(p), links_(n_links) {
    check_params(p);
    if (n_links < 3 || n_links % 2 == 0)
      throw ConfigError("link chain needs an odd link count >= 3");
    const int n = n_links - 1;
    std::vector<int> actuated = p.actuated;
    if (actuated.empty()) {
      for (int j = 0; j < n / 2; ++j) actuated.push_back(j);
      if (actuated.empty()) actuated.push_back(0);
    }
    std::string nm = n_links == 3 ? "purcell3" : (n_links == 9 ? "purcell9" : "chain" + std::to_string(n_links));
    init(nm, n, 3, actuated, p.elements);
  }

 protected:
  void eval(const VectorXd& r, ConnectionEval* conn, ShapeMetric* metric) const override {
    const int N = links_;
    const int n = dims_.n;
    const int mid = (N - 1) / 2;
    const double L = p_.L;
    const int dim = 3 + n;

    // Absolute link angles in the middle-link frame and their joint Jacobian.
    // Joint j sits between links j and j+1.
    VectorXd phi = VectorXd::Zero(N);
    MatrixXd dphi = MatrixXd::Zero(N, n);  // dphi(i, j) = d phi_i / d r_j
    for (int i = mid + 1; i < N; ++i) {
      phi[i] = phi[i - 1] + r[i - 1];
      dphi.row(i) = dphi.row(i - 1);
      dphi(i, i - 1) += 1.0;
    }
    for (int i = mid - 1; i >= 0; --i) {
      phi[i] = phi[i + 1] - r[i];
      dphi.row(i) = dphi.row(i + 1);
      dphi(i, i) -= 1.0;
    }

    // Link-center positions and their shape Jacobians.
    std::vector<Eigen::Vector2d> pos(N), u(N), nrm(N);
    for (int i = 0; i < N; ++i) {
      u[i] = {std::cos(phi[i]), std::sin(phi[i])};
      nrm[i] = {-u[i].y(), u[i].x()};
    }
    std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> dpos(N);
    for (int i = 0; i < N; ++i) dpos[i] = MatrixXd::Zero(2, n);
    pos[mid].setZero();
    for (int i = mid + 1; i < N; ++i) {
      pos[i] = pos[i - 1] + 0.5 * L * (u[i - 1] + u[i]);
      dpos[i] = dpos[i - 1] + 0.5 * L * (nrm[i - 1] * dphi.row(i - 1) + nrm[i] * dphi.row(i));
    }
    for (int i = mid - 1; i >= 0; --i) {
      pos[i] = pos[i + 1] - 0.5 * L * (u[i + 1] + u[i]);
      dpos[i] = dpos[i + 1] - 0.5 * L * (nrm[i + 1] * dphi.row(i + 1) + nrm[i] * dphi.row(i));
    }

    // Drag Gram matrix on stacked velocities (ghat, rdot): each link
    // contributes its longitudinal and lateral resistive drag, integrated
    // exactly along the link with two-point Gauss quadrature.
    MatrixXd D = MatrixXd::Zero(dim, dim);
    const double node = 0.5 * L / std::sqrt(3.0);
    const double wq = 0.5 * L;
    Eigen::RowVectorXd row_u(dim), row_n(dim), row_w(dim);
    for (int i = 0; i < N; ++i) {
      // Velocity of the link center: (vx, vy) + omega x pos + dpos * rdot.
      row_u.setZero();
      row_n.setZero();
      row_w.setZero();
      row_u[0] = u[i].x();
      row_u[1] = u[i].y();
      row_u[2] = -pos[i].y() * u[i].x() + pos[i].x() * u[i].y();
      row_n[0] = nrm[i].x();
      row_n[1] = nrm[i].y();
      row_n[2] = -pos[i].y() * nrm[i].x() + pos[i].x() * nrm[i].y();
      row_w[2] = 1.0;
      for (int j = 0; j < n; ++j) {
        row_u[3 + j] = u[i].dot(dpos[i].col(j));
        row_n[3 + j] = nrm[i].dot(dpos[i].col(j));
        row_w[3 + j] = dphi(i, j);
      }
      for (double s : {-node, node}) {
        const Eigen::RowVectorXd lat = row_n + s * row_w;
        D.noalias() += wq * p_.c * (row_u.transpose() * row_u);
        D.noalias() += wq * p_.ratio * p_.c * (lat.transpose() * lat);
      }
    }

    const MatrixXd Dgg = D.topLeftCorner(3, 3);
    const MatrixXd Dgr = D.topRightCorner(3, n);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Dgg);
    if (es.info() != Eigen::Success ||
        es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff()) {
      throw SingularConstraint("degenerate drag exposure: body drag block is singular");
    }
    const MatrixXd A = -Dgg.llt().solve(Dgr);
    if (conn) {
      conn->omega_g = Dgg;
      conn->omega_r = Dgr;
      conn->A = A;
    }
    if (metric) {
      // Schur complement: shape-rate drag with the body riding the connection.
      MatrixXd M = D.bottomRightCorner(n, n) + Dgr.transpose() * A;
      metric->M = 0.5 * (M + M.transpose());
    }
  }

 private:
  SwimmerParams p_;
  int links_;
};

}  // namespace

std::string variant_name(SwimmerVariant v) {
  switch (v) {
    case SwimmerVariant::kLinearPassive: return "linear_passive";
    case SwimmerVariant::kPushmepullyou: return "pushmepullyou";
    case SwimmerVariant::kPurcell3: return "purcell3";
    case SwimmerVariant::kPurcell9: return "purcell9";
    case SwimmerVariant::kChain: return "chain";
  }
  return "unknown";
}

SwimmerVariant variant_from_name(const std::string& name) {
  if (name == "linear_passive") return SwimmerVariant::kLinearPassive;
  if (name == "pushmepullyou") return SwimmerVariant::kPushmepullyou;
  if (name == "purcell3") return SwimmerVariant::kPurcell3;
  if (name == "purcell9") return SwimmerVariant::kPurcell9;
  if (name == "chain") return SwimmerVariant::kChain;
  throw ConfigError("unknown system variant: " + name);
}

std::unique_ptr<SudsSystem> make_system(const SwimmerParams& params) {
  switch (params.variant) {
    case SwimmerVariant::kLinearPassive:
      return std::make_unique<LinearPassiveSwimmer>(params);
    case SwimmerVariant::kPushmepullyou:
      return std::make_unique<PushmepullyouSwimmer>(params);
    case SwimmerVariant::kPurcell3:
      return build_link_chain(3, params);
    case SwimmerVariant::kPurcell9:
      return build_link_chain(9, params);
    case SwimmerVariant::kChain:
      return build_link_chain(params.links, params);
  }
  throw ConfigError("unknown system variant");
}

std::unique_ptr<SudsSystem> build_link_chain(int n_links, const SwimmerParams& params) {
  return std::make_unique<LinkChain>(n_links, params);
}

LinearSwimmerSolution linear_passive_swimmer_solve(const SwimmerParams& params, double r1,
                                                   double r2, double rdot2) {
  check_params(params);
  if (!(r2 > 0.0 && r2 < params.L))
    throw ConfigError("paddle length r2 out of range (0, L)");
  const double c = params.c, l = params.l;
  const double k = params.elements.k.size() ? params.elements.k[0] : 1.0;
  const double lk = params.elements.r_rest.size() ? params.elements.r_rest[0] : 1.0;
  const double d = params.elements.d.size() ? params.elements.d[0] : 0.0;

  // Rows: total drag along x; payload force balance; paddle force balance.
  Eigen::Matrix3d lhs;
  lhs << c * l + c * r2, 0.0, c * r2,
         c * l, -1.0, -d,
         c * r2, -1.0, d + c * r2;
  Eigen::Vector3d rhs;
  rhs << c * r2 * rdot2, k * (r1 - lk), c * r2 * rdot2 - k * (r1 - lk);

  Eigen::FullPivLU<Eigen::Matrix3d> lu(lhs);
  if (!lu.isInvertible()) throw SingularConstraint("stacked force balance is singular");
  const Eigen::Vector3d sol = lu.solve(rhs);
  return LinearSwimmerSolution{sol[0], sol[1], sol[2]};
}

PmpySolution pushmepullyou_solve(const SwimmerParams& params, double r1, double r2,
                                 double rdot2, PmpyDiagnostics* diag) {
  check_params(params);
  const double L = params.L, c = params.c;
  const double k = params.elements.k.size() ? params.elements.k[0] : 10.0;
  const double rk = params.elements.r_rest.size() ? params.elements.r_rest[0] : M_PI / 2.0;
  const double d = params.elements.d.size() ? params.elements.d[0] : 0.0;

  const double s1 = std::sin(r1), c1 = std::cos(r1);
  const double s2 = std::sin(r2), c2 = std::cos(r2);
  const double alpha_inv = 0.5 + c1 * c1 + 2.0 * s1 * s1 + c2 * c2 + 2.0 * s2 * s2;
  const double alpha = 1.0 / alpha_inv;
  const double gamma1 = 2.0 * L * L * s1;
  const double gamma2 = -2.0 * L * L * L + L * L * L / 12.0;
  if (diag) *diag = PmpyDiagnostics{alpha, gamma1, gamma2, s1, c1, s2, c2};

  Eigen::Matrix2d lhs;
  lhs << alpha_inv, L * s1,
         c * gamma1, c * gamma2 - d;
  Eigen::Vector2d rhs;
  rhs << L * s2 * rdot2, k * (r1 - rk);

  Eigen::FullPivLU<Eigen::Matrix2d> lu(lhs);
  if (!lu.isInvertible()) throw SingularConstraint("pushmepullyou stacked system is singular");
  const Eigen::Vector2d sol = lu.solve(rhs);
  return PmpySolution{sol[0], sol[1]};
}

}  // namespace suds
