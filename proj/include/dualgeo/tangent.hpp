#pragma once

#include <vector>

#include "dualgeo/algebroid.hpp"

namespace dualgeo {

// Z^a d~_a + Y_a d.^a in the natural base of the generalized tangent bundle.
struct TangentSection {
  FieldVec Z;  // p_rank components
  FieldVec Y;  // r_rank components
};

struct TangentVectorValue {
  std::vector<double> dx;  // m
  std::vector<double> dp;  // r_rank
};

// dx^i = Z^a rho_a^i, dp_a = Y_a.
TangentVectorValue anchor_image(const AlgebroidSpec& spec, const TangentSection& X, const Point& pt);

// Z-part: the pullback bracket (anchor acting along x only).
// Y-part: d.-components of the commutator of the two anchored vector fields.
TangentSection bracket_tangent(const AlgebroidSpec& spec, const TangentSection& X1, const TangentSection& X2);

struct TangentJets {
  std::vector<Jet> Z;
  std::vector<Jet> Y;
};

// Point-level bracket; inputs at order k+1, rho and L at order k.
TangentJets bracket_tangent_at(int m, int p, int r, const std::vector<Jet>& rho, const std::vector<Jet>& L,
                               const TangentJets& X1, const TangentJets& X2, int order);

Section project_pi_bang(const TangentSection& X);

// (0, Y): a vertical section.
TangentSection vertical_inclusion(const AlgebroidSpec& spec, const FieldVec& Y);

// Jacobi over {(e_a,0), (0,e^a), (x^i e_a,0), (0,p_b e^a)}, the anchor
// homomorphism on coordinate functions, and exactness of the projection.
CheckReport check_tangent(const AlgebroidSpec& spec, const CheckOptions& opt);

}  // namespace dualgeo
