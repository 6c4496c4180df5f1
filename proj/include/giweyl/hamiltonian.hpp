#pragma once

#include <stdexcept>

#include "giweyl/maps.hpp"
#include "giweyl/words.hpp"

namespace giweyl {

enum class PotentialKind { none, electrostatic, spin_magnetic };

// Specializes the generic potential of the coordinate maps: phi stays
// symbolic for the electrostatic problem, becomes -mu_z B for the spin
// problem and vanishes for the field-free level expansion.
inline Series substitute_potential(const Series& s, PotentialKind pot) {
  if (pot == PotentialKind::electrostatic) return s;
  std::vector<Term> out;
  for (const auto& t : s.terms()) {
    bool has_phi = false;
    for (const auto& gp : t.gens) has_phi = has_phi || gp.g.field == Field::phi;
    if (!has_phi) {
      out.push_back(t);
      continue;
    }
    if (pot == PotentialKind::none) continue;
    Term r = t;
    r.gens.clear();
    for (const auto& gp : t.gens) {
      if (gp.g.field != Field::phi) {
        r.gens.push_back(gp);
        continue;
      }
      if (gp.pow % 2 != 0) r.coeff = -r.coeff;
      r.gens = merge_gens(r.gens, {GenPow{gen_const(Field::mu_z), gp.pow}});
      if (gp.g.d.none())
        r.bhalf += 2 * gp.pow;
      else
        r.gens = merge_gens(r.gens, {GenPow{Generator{Field::b, gp.g.d}, gp.pow}});
    }
    sort_gens(r.gens);
    out.push_back(std::move(r));
  }
  return Series::from_terms(s.chart(), s.trunc(), std::move(out));
}

// Orders kept by the derivation: the classical tower eps^0..eps^2 and the
// leading quantum correction hbar^2 eps^0. Mixed orders eps hbar^2,
// eps^2 hbar and eps^3 lie beyond the validity of the classical input maps
// and are discarded.
inline bool kept_order(int hbar, int eps) {
  return (hbar == 0 && eps >= 0 && eps <= 2) || (hbar == 2 && eps == 0);
}

inline Truncation pipeline_truncation() { return Truncation(2, -2, 2); }

// Derives the guiding-center Hamiltonian symbol:
//  (1) backward maps, Weyl-ordered into gyration words,
//  (2) star square of the velocity symbols (scalar parts pointwise, words
//      concatenated),
//  (3) potential term Taylor-shifted to the guiding center,
//  (4) normal ordering via V_y V_x -> V_x V_y - i hbar/eps,
//  (5) reduction to a polynomial in J.
inline JPolynomial derive_hamiltonian_core(PotentialKind pot) {
  const Truncation wtr = pipeline_truncation();
  BackwardMaps bw = backward_map();
  bw.x = substitute_potential(bw.x, pot);
  bw.y = substitute_potential(bw.y, pot);
  bw.vx = substitute_potential(bw.vx, pot);
  bw.vy = substitute_potential(bw.vy, pot);
  Truncation mtr = map_truncation();
  Series dx = sub(bw.x, Series::from_term(Chart::guiding_center, mtr,
                                          Term{Coeff::one(), 0, 0, 0, {}, 1, 0, 0, 0}));
  Series dy = sub(bw.y, Series::from_term(Chart::guiding_center, mtr,
                                          Term{Coeff::one(), 0, 0, 0, {}, 0, 1, 0, 0}));

  WordSeries vx = to_star_form(bw.vx, wtr);
  WordSeries vy = to_star_form(bw.vy, wtr);
  WordSeries h = word_scale(word_add(word_mul(vx, vx), word_mul(vy, vy)), Coeff(rat(1, 2)));

  if (pot == PotentialKind::electrostatic) {
    Term phi;
    phi.gens = {GenPow{gen_dphi(0, 0), 1}};
    h = word_add(h, taylor_shift_word(phi, dx, dy, wtr));
  } else if (pot == PotentialKind::spin_magnetic) {
    Term b;
    b.bhalf = 2;
    Series shifted = shift_field_part(b, dx, dy);
    Term muz;
    muz.coeff = Coeff(Rat(-1));
    muz.gens = {GenPow{gen_const(Field::mu_z), 1}};
    shifted = mul(shifted, Series::from_term(Chart::guiding_center, mtr, muz));
    h = word_add(h, to_star_form(shifted, wtr));
  }

  h = normal_order(h);

  // Residual words at orders beyond the input maps' validity are dropped;
  // anything else failing the J reduction is an implementation fault.
  auto beyond_validity = [](const Term& t) {
    if (t.hbar == 0) return false;
    if (t.hbar == 1) return t.eps >= 2;
    if (t.hbar == 2) return t.eps >= 1;
    return true;
  };
  JPolynomial p = express_in_j_filtered(h, beyond_validity);

  for (auto& c : p.coeff) {
    Series odd = filter_terms(c, [](const Term& t) { return t.hbar == 1 && t.eps <= 1; });
    if (!odd.is_zero())
      throw std::logic_error("derived Hamiltonian has uncancelled odd-hbar content");
    c = filter_terms(c, [](const Term& t) { return kept_order(t.hbar, t.eps); });
  }
  while (p.coeff.size() > 1 && p.coeff.back().is_zero()) p.coeff.pop_back();
  return p;
}

inline JPolynomial derive_hamiltonian(bool spin) {
  return derive_hamiltonian_core(spin ? PotentialKind::spin_magnetic
                                      : PotentialKind::electrostatic);
}

// hbar -> 0 restriction of the spinless derivation.
inline JPolynomial classical_hamiltonian() {
  JPolynomial p = derive_hamiltonian(false);
  for (auto& c : p.coeff) c = restrict_hbar(c, 0);
  while (p.coeff.size() > 1 && p.coeff.back().is_zero()) p.coeff.pop_back();
  return p;
}

// Gyration energy levels: J -> (2n+1) hbar and eps -> 1 in the field-free
// (phi == 0) Hamiltonian.
inline Series quantized_levels(int n) {
  if (n < 0) fail(Errc::domain_error, "quantized_levels requires n >= 0");
  JPolynomial p = derive_hamiltonian_core(PotentialKind::none);
  for (const auto& c : p.coeff)
    if (contains_field(c, Field::phi))
      fail(Errc::field_present, "potential generators survived the field-free derivation");
  Truncation tr(4, 0, 0);
  std::vector<Term> out;
  Rat level = rat(2LL * n + 1);
  for (std::size_t k = 0; k < p.coeff.size(); ++k) {
    Rat scale_k(1);
    for (std::size_t t = 0; t < k; ++t) scale_k *= level;
    for (Term term : p.coeff[k].terms()) {
      term.coeff *= scale_k;
      term.hbar += static_cast<int>(k);
      term.eps = 0;
      out.push_back(std::move(term));
    }
  }
  return Series::from_terms(Chart::guiding_center, tr, std::move(out));
}

}  // namespace giweyl
