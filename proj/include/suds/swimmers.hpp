#pragma once

#include <memory>
#include <string>
#include <vector>

#include "suds/system.hpp"

namespace suds {

enum class SwimmerVariant {
  kLinearPassive,
  kPushmepullyou,
  kPurcell3,
  kPurcell9,
  kChain,  // generic odd-link chain
};

std::string variant_name(SwimmerVariant v);
SwimmerVariant variant_from_name(const std::string& name);

/// Physical parameters shared by the swimmer families.
struct SwimmerParams {
  SwimmerVariant variant = SwimmerVariant::kPurcell3;
  int links = 3;        // link chains only
  double L = 1.0;       // link length (total bladder material for the linear swimmer)
  double l = 0.5;       // stem/payload face length, linear swimmer only
  double c = 1.0;       // drag per unit length
  double ratio = 2.0;   // lateral-to-longitudinal drag ratio
  PassiveElementSet elements;
  std::vector<int> actuated;  // 0-based coordinate indices
};

/// Build a system from parameters (dispatches on variant).
std::unique_ptr<SudsSystem> make_system(const SwimmerParams& params);

/// Resistive-drag link chain: each link of length L carries longitudinal drag
/// c per unit length and lateral drag ratio*c per unit length, integrated
/// exactly along the link (the rotational part about a link center comes out
/// as ratio*c*L^3/12).  Body frame on the middle link.
std::unique_ptr<SudsSystem> build_link_chain(int n_links, const SwimmerParams& params);

/// Direct solve of the linear passive swimmer's stacked force balance
/// (total-drag row plus the two internal force rows) in the unknowns
/// (xdot, omega_w, rdot_1), given (r_1, r_2, rdot_2).  omega_w is the net
/// wrench the world exerts on the swimmer.
struct LinearSwimmerSolution {
  double xdot = 0.0;
  double omega_w = 0.0;
  double rdot_1 = 0.0;
};
LinearSwimmerSolution linear_passive_swimmer_solve(const SwimmerParams& params, double r1,
                                                   double r2, double rdot2);

/// Direct solve of the pushmepullyou swimmer's stacked 2x2 system
/// (Pfaffian row plus passive-joint torque balance) in (xdot, rdot_1).
struct PmpySolution {
  double xdot = 0.0;
  double rdot_1 = 0.0;
};
struct PmpyDiagnostics {
  double alpha = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0;
};
PmpySolution pushmepullyou_solve(const SwimmerParams& params, double r1, double r2,
                                 double rdot2, PmpyDiagnostics* diag = nullptr);

}  // namespace suds
