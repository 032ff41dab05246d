#pragma once

#include <optional>
#include <vector>

#include "dualgeo/field.hpp"
#include "dualgeo/report.hpp"
#include "dualgeo/sampling.hpp"

namespace dualgeo {

struct CheckOptions {
  int samples = 100;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  SamplingBox box{};
};

// Anchor rho_a^i and structure functions L^g_{ab} of a generalized Lie
// algebroid, with optional base morphisms h and eta (nullopt = identity).
//   rho[a*m + i]        = rho_a^i
//   L[(g*p + a)*p + b]  = L^g_{ab}
struct AlgebroidSpec {
  int m = 0;
  int p_rank = 0;
  int r_rank = 0;
  std::vector<Expr> rho;
  std::vector<Expr> L;
  std::optional<std::vector<Expr>> h_map;
  std::optional<std::vector<Expr>> eta_map;

  const Expr& rho_at(int a, int i) const { return rho[a * m + i]; }
  const Expr& L_at(int g, int a, int b) const { return L[(g * p_rank + a) * p_rank + b]; }

  bool identity_morphisms() const { return !h_map && !eta_map; }

  // Throws std::invalid_argument on shape errors or p-atoms in h, eta.
  void validate() const;

  // The same algebroid with h pre-composed into rho and L, in identity mode.
  AlgebroidSpec composed() const;

  FieldVec rho_field() const;
  FieldVec L_field() const;
};

// A section of the algebroid: p_rank component fields.
using Section = FieldVec;

Section constant_section(const AlgebroidSpec& spec, int alpha, const Expr& coefficient = Expr(1.0));

// theta_a^k composed with h, as fields over M: rho_a^i(h(x)) dh^k/dx^i.
// In identity mode this is rho itself.
FieldVec theta(const AlgebroidSpec& spec);

// [u, v]^g = u^a v^b L^g_{ab} + rho(u)(v^g) - rho(v)(u^g), in the composed
// picture. The result is a field whose order-k jet needs order k+1 of u, v.
Section bracket_sections(const AlgebroidSpec& spec, const Section& u, const Section& v);

// Point-level bracket: given rho, L at order k and u, v at order k+1 (all
// jets at the same point), the bracket components at order k. When `rho_m`
// is smaller than the jet dimension, only the first rho_m variables are
// differentiated (the anchor acts along the base).
std::vector<Jet> bracket_at(int m, int p, const std::vector<Jet>& rho, const std::vector<Jet>& L,
                            const std::vector<Jet>& u, const std::vector<Jet>& v, int order);

// Applies the anchored derivation u^a rho_a^i d/dx^i to f (order k+1) at order k.
Jet anchor_derivative(int m, int p, const std::vector<Jet>& rho, const std::vector<Jet>& u, const Jet& f, int order);

// Antisymmetry of L, Jacobi over constant and coordinate-linear sections,
// the anchor relation L^g_{ab} rho_g^k = rho_a(rho_b^k) - rho_b(rho_a^k) and
// the homomorphism property of the anchor on coordinate functions.
CheckReport check_algebroid(const AlgebroidSpec& spec, const CheckOptions& opt);

}  // namespace dualgeo
