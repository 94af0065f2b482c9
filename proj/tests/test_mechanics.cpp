#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "suds/config.hpp"
#include "suds/swimmers.hpp"
#include "suds/system.hpp"

using namespace suds;

namespace {

std::unique_ptr<SudsSystem> preset_system(const std::string& name) {
  return make_system(preset_config(name).params);
}

VectorXd random_shape(const SudsSystem& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-1.6, 1.6);
  const std::string& name = sys.name();
  VectorXd r(sys.dims().n);
  if (name == "linear_passive") {
    r[0] = 0.3 + 1.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    r[1] = 0.15 + 1.7 * std::uniform_real_distribution<double>(0, 1)(rng);
  } else if (name == "pushmepullyou") {
    for (int i = 0; i < 2; ++i) r[i] = M_PI / 2.0 + 1.2 * ang(rng) / 1.6;
  } else {
    for (int i = 0; i < r.size(); ++i) r[i] = ang(rng);
  }
  return r;
}

VectorXd random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

const char* kPresets[4] = {"linear_passive", "pushmepullyou", "purcell3", "purcell9"};

// Deliberately broken system to exercise the solver guards.
class BrokenMetricSystem final : public SudsSystem {
 public:
  BrokenMetricSystem() {
    PassiveElementSet el;
    el.k = VectorXd::Constant(1, 1.0);
    el.r_rest = VectorXd::Zero(1);
    el.d = VectorXd::Zero(1);
    init("broken", 2, 1, {1}, el);
  }

 protected:
  void eval(const VectorXd&, ConnectionEval* conn, ShapeMetric* metric) const override {
    if (conn) {
      conn->omega_g = MatrixXd::Constant(1, 1, 1.0);
      conn->omega_r = MatrixXd::Zero(1, 2);
      conn->A = MatrixXd::Zero(1, 2);
    }
    if (metric) {
      metric->M.resize(2, 2);
      metric->M << -1.0, 0.0, 0.0, 1.0;  // indefinite on purpose
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Connection
// ---------------------------------------------------------------------------

TEST_CASE("linear swimmer connection matches the closed form") {
  auto sys = preset_system("linear_passive");
  VectorXd r(2);
  r << 1.0, 0.5;
  const ConnectionEval conn = sys->connection(r);
  CHECK(conn.A(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(conn.A(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pushmepullyou straight links generate no thrust") {
  auto sys = preset_system("pushmepullyou");
  VectorXd r = VectorXd::Zero(2);
  const ConnectionEval conn = sys->connection(r);
  CHECK(std::abs(conn.A(0, 0)) < 1e-15);
  CHECK(std::abs(conn.A(0, 1)) < 1e-15);
}

TEST_CASE("straight three-link chain: x-row of A vanishes by symmetry") {
  auto sys = preset_system("purcell3");
  const ConnectionEval conn = sys->connection(VectorXd::Zero(2));
  CHECK(std::abs(conn.A(0, 0)) < 1e-12);
  CHECK(std::abs(conn.A(0, 1)) < 1e-12);
}

TEST_CASE("Pfaffian blocks are consistent: -omega_g * A = omega_r") {
  std::mt19937_64 rng(101);
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    for (int trial = 0; trial < 20; ++trial) {
      const VectorXd r = random_shape(*sys, rng);
      const ConnectionEval conn = sys->connection(r);
      const MatrixXd lhs = -conn.omega_g * conn.A;
      CHECK((lhs - conn.omega_r).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("chain connection matches the independent drag oracle") {
  std::mt19937_64 rng(102);
  for (int links : {3, 9}) {
    SwimmerParams p;
    p.variant = links == 3 ? SwimmerVariant::kPurcell3 : SwimmerVariant::kPurcell9;
    auto cfg = preset_config(links == 3 ? "purcell3" : "purcell9");
    auto sys = make_system(cfg.params);
    oracles::ChainDrag oracle{links, cfg.params.L, cfg.params.c, cfg.params.ratio};
    for (int trial = 0; trial < 5; ++trial) {
      const VectorXd r = random_shape(*sys, rng);
      const VectorXd rdot = random_vec(sys->dims().n, rng);
      const ConnectionEval conn = sys->connection(r);
      const Eigen::Vector3d ghat_impl = conn.A * rdot;
      const Eigen::Vector3d ghat_oracle = oracle.solve_body_velocity(r, rdot);
      CHECK((ghat_impl - ghat_oracle).cwiseAbs().maxCoeff() < 1e-7);

      // Quasi-static balance: total drag wrench vanishes at the solved twist.
      const VectorXd stacked_residual = conn.omega_g * ghat_impl + conn.omega_r * rdot;
      CHECK(stacked_residual.cwiseAbs().maxCoeff() < 1e-9);
      CHECK(oracle.wrench(r, ghat_impl, rdot).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

// ---------------------------------------------------------------------------
// Shape metric
// ---------------------------------------------------------------------------

TEST_CASE("metric is symmetric positive definite on in-range shapes") {
  std::mt19937_64 rng(103);
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    for (int trial = 0; trial < 50; ++trial) {
      const ShapeMetric m = sys->shape_metric(random_shape(*sys, rng));
      CHECK((m.M - m.M.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((m.Mpa - m.Map.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.M);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("shape changes dissipate power: tau . rdot <= 0") {
  std::mt19937_64 rng(104);
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    for (int trial = 0; trial < 1000; ++trial) {
      const VectorXd r = random_shape(*sys, rng);
      const VectorXd rdot = random_vec(sys->dims().n, rng, 2.0);
      const ShapeMetric m = sys->shape_metric(r);
      const VectorXd tau = -m.M * rdot;
      CHECK(tau.dot(rdot) <= 0.0);
    }
  }
}

TEST_CASE("chain metric torques match per-link drag integration") {
  auto cfg = preset_config("purcell3");
  auto sys = make_system(cfg.params);
  oracles::ChainDrag oracle{3, cfg.params.L, cfg.params.c, cfg.params.ratio};
  std::mt19937_64 rng(105);
  VectorXd r(2);
  r << 0.3, -0.2;
  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd rdot = random_vec(2, rng);
    const ConnectionEval conn = sys->connection(r);
    const ShapeMetric m = sys->shape_metric(r);
    const VectorXd tau = -m.M * rdot;
    const Eigen::Vector3d ghat = conn.A * rdot;
    for (int j = 0; j < 2; ++j) {
      CHECK(tau[j] == doctest::Approx(oracle.joint_force(r, j, ghat, rdot)).epsilon(1e-8));
    }
  }
}

TEST_CASE("pushmepullyou metric reproduces the passive torque-balance row") {
  auto cfg = preset_config("pushmepullyou");
  auto sys = make_system(cfg.params);
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd r = random_shape(*sys, rng);
    const VectorXd rdot = random_vec(2, rng);
    PmpyDiagnostics diag;
    pushmepullyou_solve(cfg.params, r[0], r[1], 0.0, &diag);
    const ConnectionEval conn = sys->connection(r);
    const double xdot = (conn.A * rdot)(0);
    // Drag torque on the passive joint written with the stacked coefficients.
    const double row = diag.gamma1 * xdot + diag.gamma2 * rdot[0];
    const ShapeMetric m = sys->shape_metric(r);
    const double tau_p = (-m.M * rdot)(0);
    CHECK(tau_p == doctest::Approx(row).epsilon(1e-9));
  }
}

// ---------------------------------------------------------------------------
// Passive forces
// ---------------------------------------------------------------------------

TEST_CASE("passive force at rest with no damping vanishes") {
  auto sys = preset_system("purcell9");
  ShapeState st;
  st.r_p = sys->passive_elements().r_rest;
  st.r_a = VectorXd::Zero(4);
  const PassiveForce f = passive_force(sys->passive_elements(), *sys, st);
  CHECK(f.f_o.cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.F.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spring force restores toward rest") {
  auto cfg = preset_config("linear_passive");
  auto sys = make_system(cfg.params);
  ShapeState st;
  st.r_a = VectorXd::Constant(1, 1.0);
  st.r_p = VectorXd::Constant(1, 1.2);  // stretched by 0.2 beyond rest 1.0
  const PassiveForce f = passive_force(sys->passive_elements(), *sys, st);
  CHECK(f.f_o[0] == doctest::Approx(-0.2).epsilon(1e-12));  // passive row is index 0
  CHECK(f.f_o[1] == 0.0);
}

TEST_CASE("nine-link spring forces are the element-wise product") {
  auto cfg = preset_config("purcell9");
  auto sys = make_system(cfg.params);
  ShapeState st;
  st.r_a = VectorXd::Zero(4);
  st.r_p = sys->passive_elements().r_rest + VectorXd::Constant(4, 0.1);
  const PassiveForce f = passive_force(sys->passive_elements(), *sys, st);
  VectorXd expected(4);
  expected << -2.0, -1.5, -1.0, -0.5;
  for (int i = 0; i < 4; ++i) {
    CHECK(f.f_o[sys->passive_indices()[i]] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

// ---------------------------------------------------------------------------
// Quasi-static solve
// ---------------------------------------------------------------------------

TEST_CASE("rest state with zero drive stays at rest") {
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    ShapeState st;
    st.r_p = sys->passive_elements().r_rest;
    st.r_a = VectorXd::Constant(sys->dims().n_a, name == std::string("linear_passive") ? 1.0
                                : name == std::string("pushmepullyou") ? M_PI / 2.0 : 0.1);
    const SudsVelocity v = suds_velocity(*sys, st, VectorXd::Zero(sys->dims().n_a));
    CHECK(v.rdot_p.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(v.ghat.vx) < 1e-14);
    CHECK(std::abs(v.ghat.vy) < 1e-14);
    CHECK(std::abs(v.ghat.omega_z) < 1e-14);
  }
}

TEST_CASE("generic solve matches the stacked linear-swimmer solve") {
  auto cfg = preset_config("linear_passive");
  auto sys = make_system(cfg.params);
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> ur1(0.3, 1.8), ur2(0.15, 1.85), ud(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r1 = ur1(rng), r2 = ur2(rng), rd2 = ud(rng);
    const LinearSwimmerSolution direct = linear_passive_swimmer_solve(cfg.params, r1, r2, rd2);
    ShapeState st;
    st.r_p = VectorXd::Constant(1, r1);
    st.r_a = VectorXd::Constant(1, r2);
    const SudsVelocity v = suds_velocity(*sys, st, VectorXd::Constant(1, rd2));
    CHECK(std::abs(v.ghat.vx - direct.xdot) < 1e-8);
    CHECK(std::abs(v.rdot_p[0] - direct.rdot_1) < 1e-8);
  }
}

TEST_CASE("generic solve matches the stacked pushmepullyou solve") {
  auto cfg = preset_config("pushmepullyou");
  auto sys = make_system(cfg.params);
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> ua(M_PI / 2 - 1.2, M_PI / 2 + 1.2), ud(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r1 = ua(rng), r2 = ua(rng), rd2 = ud(rng);
    const PmpySolution direct = pushmepullyou_solve(cfg.params, r1, r2, rd2);
    ShapeState st;
    st.r_p = VectorXd::Constant(1, r1);
    st.r_a = VectorXd::Constant(1, r2);
    const SudsVelocity v = suds_velocity(*sys, st, VectorXd::Constant(1, rd2));
    CHECK(std::abs(v.ghat.vx - direct.xdot) < 1e-8);
    CHECK(std::abs(v.rdot_p[0] - direct.rdot_1) < 1e-8);
  }
}

TEST_CASE("affine structure: mixed second difference vanishes") {
  std::mt19937_64 rng(109);
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    const int n_a = sys->dims().n_a;
    for (int trial = 0; trial < 100; ++trial) {
      const VectorXd r = random_shape(*sys, rng);
      const ShapeState st = make_state(*sys, r);
      const VectorXd u = random_vec(n_a, rng), w = random_vec(n_a, rng);
      auto out = [&](const VectorXd& rd) {
        const SudsVelocity v = suds_velocity(*sys, st, rd);
        VectorXd stacked(3 + v.rdot_p.size());
        stacked << v.ghat.vx, v.ghat.vy, v.ghat.omega_z, v.rdot_p;
        return stacked;
      };
      const VectorXd resid =
          out(u + w) - out(u) - out(w) + out(VectorXd::Zero(n_a));
      CHECK(resid.cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("reported affine pieces reproduce the solution") {
  std::mt19937_64 rng(110);
  for (const char* name : kPresets) {
    auto sys = preset_system(name);
    for (int trial = 0; trial < 30; ++trial) {
      const ShapeState st = make_state(*sys, random_shape(*sys, rng));
      const VectorXd rd = random_vec(sys->dims().n_a, rng);
      const SudsVelocity v = suds_velocity(*sys, st, rd);
      VectorXd stacked(sys->dims().group_dim + sys->dims().n_p);
      stacked.head(sys->dims().group_dim) =
          sys->dims().group_dim == 1
              ? VectorXd::Constant(1, v.ghat.vx)
              : (VectorXd(3) << v.ghat.vx, v.ghat.vy, v.ghat.omega_z).finished();
      stacked.tail(sys->dims().n_p) = v.rdot_p;
      CHECK((stacked - (v.C_tilde + v.B * rd)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("collinear drive inputs give collinear outputs") {
  auto sys = preset_system("linear_passive");
  const ShapeState st = make_state(*sys, (VectorXd(2) << 1.1, 0.75).finished());
  const VectorXd u = VectorXd::Constant(1, 0.4), v = VectorXd::Constant(1, 0.25);
  auto out = [&](const VectorXd& rd) {
    const SudsVelocity sol = suds_velocity(*sys, st, rd);
    return (VectorXd(2) << sol.ghat.vx, sol.rdot_p[0]).finished();
  };
  const VectorXd a = out(u), b = out(u + v), c = out(u + 2 * v);
  CHECK(((c - b) - (b - a)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fully actuated chain degenerates to ghat = A rdot") {
  SwimmerParams p = preset_config("purcell3").params;
  p.actuated = {0, 1};
  p.elements = PassiveElementSet{};
  auto sys = make_system(p);
  CHECK(sys->dims().n_p == 0);
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd r = random_shape(*sys, rng);
    const VectorXd rd = random_vec(2, rng);
    const SudsVelocity v = suds_velocity(*sys, make_state(*sys, r), rd);
    const Eigen::Vector3d expect = sys->connection(r).A * rd;
    CHECK(std::abs(v.ghat.vx - expect[0]) < 1e-14);
    CHECK(std::abs(v.ghat.vy - expect[1]) < 1e-14);
    CHECK(std::abs(v.ghat.omega_z - expect[2]) < 1e-14);
  }
}

TEST_CASE("indefinite passive block is rejected as non-dissipative") {
  BrokenMetricSystem sys;
  ShapeState st;
  st.r_a = VectorXd::Zero(1);
  st.r_p = VectorXd::Constant(1, 0.5);
  CHECK_THROWS_AS(suds_velocity(sys, st, VectorXd::Zero(1)), NonDissipative);
}

// ---------------------------------------------------------------------------
// Actuated torque
// ---------------------------------------------------------------------------

TEST_CASE("stationary system needs no torque") {
  auto sys = preset_system("purcell3");
  ShapeState st;
  st.r_a = VectorXd::Constant(1, 0.2);
  st.r_p = sys->passive_elements().r_rest;
  const VectorXd tau = actuated_torque(*sys, st, VectorXd::Zero(1));
  CHECK(tau.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("actuated torque equals the metric rows at the solved rates") {
  auto sys = preset_system("purcell3");
  std::mt19937_64 rng(112);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd r = random_shape(*sys, rng);
    const ShapeState st = make_state(*sys, r);
    const VectorXd rd = random_vec(1, rng);
    const SudsVelocity v = suds_velocity(*sys, st, rd);
    const ShapeMetric m = sys->shape_metric(r);
    const VectorXd full_rdot = sys->assemble(rd, v.rdot_p);
    const VectorXd tau_full = -m.M * full_rdot;
    const VectorXd tau = actuated_torque(*sys, st, rd);
    CHECK(std::abs(tau[0] - tau_full[sys->actuated_indices()[0]]) < 1e-10);
    // Total internal wrench dissipates.
    CHECK(tau_full.dot(full_rdot) <= 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Direct solves
// ---------------------------------------------------------------------------

TEST_CASE("linear swimmer solve: equilibrium and frozen oracle values") {
  auto cfg = preset_config("linear_passive");
  const LinearSwimmerSolution eq = linear_passive_swimmer_solve(cfg.params, 1.0, 0.75, 0.0);
  CHECK(std::abs(eq.xdot) < 1e-14);
  CHECK(std::abs(eq.omega_w) < 1e-14);
  CHECK(std::abs(eq.rdot_1) < 1e-14);

  // Stacked 3x3 solve at r1=1.1, r2=0.75, rdot2=0.3 (precomputed separately).
  const LinearSwimmerSolution s = linear_passive_swimmer_solve(cfg.params, 1.1, 0.75, 0.3);
  CHECK(s.xdot == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(std::abs(s.omega_w) < 1e-12);
  CHECK(s.rdot_1 == doctest::Approx(-1.0 / 30.0).epsilon(1e-10));

  // The total-drag row holds at the solution.
  const double c = 1.0, l = 0.5, r2 = 0.75;
  const double resid = l * c * s.xdot + c * r2 * (s.xdot + s.rdot_1 - 0.3);
  CHECK(std::abs(resid) < 1e-12);
}

TEST_CASE("linear swimmer solve rejects out-of-range paddle length") {
  auto cfg = preset_config("linear_passive");
  CHECK_THROWS_AS(linear_passive_swimmer_solve(cfg.params, 1.0, 2.5, 0.0), ConfigError);
  CHECK_THROWS_AS(linear_passive_swimmer_solve(cfg.params, 1.0, -0.1, 0.0), ConfigError);
}

TEST_CASE("pushmepullyou solve: alpha, equilibrium, and row residual") {
  auto cfg = preset_config("pushmepullyou");
  PmpyDiagnostics diag;
  pushmepullyou_solve(cfg.params, M_PI / 2, M_PI / 2, 0.0, &diag);
  CHECK(diag.alpha == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  const PmpySolution eq = pushmepullyou_solve(cfg.params, M_PI / 2, 0.3, 0.0);
  CHECK(std::abs(eq.xdot) < 1e-14);
  CHECK(std::abs(eq.rdot_1) < 1e-14);

  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> ua(0.4, 2.6), ud(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double r1 = ua(rng), r2 = ua(rng), rd2 = ud(rng);
    const PmpySolution s = pushmepullyou_solve(cfg.params, r1, r2, rd2, &diag);
    const double L = cfg.params.L;
    const double row = s.xdot / diag.alpha + L * diag.s1 * s.rdot_1 - L * diag.s2 * rd2;
    CHECK(std::abs(row) < 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Link chains
// ---------------------------------------------------------------------------

TEST_CASE("nine-link dimensions follow the paper split") {
  auto sys = preset_system("purcell9");
  CHECK(sys->dims().n == 8);
  CHECK(sys->dims().n_a == 4);
  CHECK(sys->dims().n_p == 4);
  CHECK(sys->dims().group_dim == 3);
}

TEST_CASE("chain construction validates its inputs") {
  SwimmerParams p = preset_config("purcell3").params;
  CHECK_THROWS_AS(build_link_chain(4, p), ConfigError);  // even
  CHECK_THROWS_AS(build_link_chain(1, p), ConfigError);
  SwimmerParams bad = p;
  bad.L = 0.0;
  CHECK_THROWS_AS(build_link_chain(3, bad), ConfigError);
  bad = p;
  bad.c = -1.0;
  CHECK_THROWS_AS(build_link_chain(3, bad), ConfigError);
  bad = p;
  bad.ratio = 0.5;
  CHECK_THROWS_AS(build_link_chain(3, bad), ConfigError);
}

TEST_CASE("negative spring or damping constants are rejected") {
  SwimmerParams p = preset_config("purcell3").params;
  p.elements.k = VectorXd::Constant(1, -2.0);
  CHECK_THROWS_AS(make_system(p), ConfigError);
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

TEST_CASE("presets parse and round-trip through the file format") {
  for (const char* name : kPresets) {
    const SystemConfig cfg = preset_config(name);
    const SystemConfig back = parse_system_config(format_system_config(cfg));
    CHECK(back.params.variant == cfg.params.variant);
    CHECK(back.params.L == cfg.params.L);
    CHECK((back.params.elements.k - cfg.params.elements.k).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.gait.amplitude - cfg.gait.amplitude).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.gait.lag - cfg.gait.lag).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.noise_sigma == cfg.noise_sigma);
  }
}

TEST_CASE("config parser rejects unknown keys and bad numbers") {
  CHECK_THROWS_AS(parse_system_config("variant = purcell3\nbogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_system_config("variant = purcell3\nL = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_system_config("variant = nosuch\n"), ConfigError);
  CHECK_THROWS_AS(parse_system_config("variant = purcell9\nk = 1,2,3\n"), ConfigError);
}

TEST_CASE("purcell9 preset encodes the traveling wave") {
  const SystemConfig cfg = preset_config("purcell9");
  for (int i = 0; i < 4; ++i) {
    CHECK(cfg.gait.lag[i] == doctest::Approx((i + 1) * M_PI / 4.0).epsilon(1e-15));
    CHECK(cfg.gait.amplitude[i] == doctest::Approx(1.4));
  }
  CHECK(cfg.gait.freq == doctest::Approx(2.0 * M_PI));
}
