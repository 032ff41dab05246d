#pragma once

#include <vector>

#include "dualgeo/connection.hpp"

namespace dualgeo {

// A change of chart x -> x', p_a' = M^a_{a'} p_a with frame change Lambda.
// All entries depend on x only.
//   Lambda[a'*p + a] = Lambda^{a'}_a     M[a'*r + a] = M^{a'}_a
//   base_jacobian[i'*m + i] = dx^{i'}/dx^i
struct ChartTransition {
  std::vector<Expr> Lambda;
  std::vector<Expr> M;
  std::vector<Expr> base_jacobian;

  static ChartTransition identity(int m, int p, int r);
  void validate(int m, int p, int r) const;
};

inline constexpr double kMinTransitionDet = 1e-12;

// Primed Gamma'_{b' g'} at the same point, stored r x p.
// law: M^b_{b'} (-rho_g(M^{a'}_b) p_{a'} + Gamma_{b g}) Lambda^g_{g'}
std::vector<double> nlc_law(const DualGeometry& geo, const ChartTransition& t, const Point& pt);
// pushforward: the d/dp_{b'} component of Lambda^g_{g'} delta_g written in
// primed coordinates, i.e. Lambda^g_{g'} delta_g(p_{b'}).
std::vector<double> nlc_pushforward(const DualGeometry& geo, const ChartTransition& t, const Point& pt);

// Primed coefficients by the component change rules.
DlcValues dlc_law(const DualGeometry& geo, const DlcValues& dlc, const ChartTransition& t, const Point& pt);
// Primed coefficients obtained by covariantly differentiating the primed
// frame vectors (delta_{b'} = Lambda^b_{b'} delta_b, d.^{a'} = M^{a'}_a d.^a)
// and re-expanding the results in the primed frame.
DlcValues dlc_frame_route(const DualGeometry& geo, const DlcValues& dlc, const ChartTransition& t, const Point& pt);

CheckReport check_nlc_law(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                          const std::vector<ChartTransition>& transitions, const CheckOptions& opt);
CheckReport check_dlc_law(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                          const DistinguishedConnection& dlc, const std::vector<ChartTransition>& transitions,
                          const CheckOptions& opt);

}  // namespace dualgeo
