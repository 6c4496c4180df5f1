#pragma once

#include <random>
#include <vector>

#include "giweyl/series.hpp"

namespace giweyl::testing {

inline Truncation wide() { return Truncation(6, -6, 12); }

inline Series zero_p() { return Series::zero(Chart::particle, wide()); }

inline Series mono(Chart chart, Term t, Truncation tr = wide()) {
  return Series::from_term(chart, tr, std::move(t));
}

struct T {
  Term t;
  T(long long num = 1, long long den = 1) { t.coeff = Coeff(rat(num, den)); }
  T& ic(long long num, long long den = 1) {
    t.coeff = Coeff(Rat(0), rat(num, den));
    return *this;
  }
  T& h(int v) {
    t.hbar = v;
    return *this;
  }
  T& e(int v) {
    t.eps = v;
    return *this;
  }
  T& b(int v) {
    t.bhalf = v;
    return *this;
  }
  T& db(int dx, int dy, int pow = 1) {
    t.gens = merge_gens(t.gens, {GenPow{gen_db(dx, dy), pow}});
    return *this;
  }
  T& dphi(int dx, int dy, int pow = 1) {
    t.gens = merge_gens(t.gens, {GenPow{gen_dphi(dx, dy), pow}});
    return *this;
  }
  T& cst(Field f, int pow = 1) {
    t.gens = merge_gens(t.gens, {GenPow{gen_const(f), pow}});
    return *this;
  }
  T& pos(int px, int py) {
    t.px = px;
    t.py = py;
    return *this;
  }
  T& vel(int kx, int ky) {
    t.kx = kx;
    t.ky = ky;
    return *this;
  }
  operator Term() const { return t; }
};

inline Series x_mono() { return mono(Chart::particle, T().pos(1, 0)); }
inline Series y_mono() { return mono(Chart::particle, T().pos(0, 1)); }
inline Series vx_mono() { return mono(Chart::particle, T().vel(1, 0)); }
inline Series vy_mono() { return mono(Chart::particle, T().vel(0, 1)); }

// Seeded random polynomial-with-fields series for property tests; bounded
// exponents so that products of three factors never leave the wide window.
inline Series random_series(std::mt19937& rng, int max_terms, bool with_fields = true,
                            int max_degree = 2, bool with_hbar = true) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<long long> den(1, 3);
  std::uniform_int_distribution<int> expo(0, max_degree);
  std::uniform_int_distribution<int> small(0, 1);
  std::uniform_int_distribution<int> bh(-2, 2);
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<Term> terms;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    T b(num(rng), den(rng));
    if (b.t.coeff.is_zero()) b.t.coeff = Coeff(Rat(1));
    b.h(with_hbar ? small(rng) : 0).e(small(rng));
    b.pos(expo(rng), expo(rng)).vel(expo(rng), expo(rng));
    if (with_fields) {
      b.b(bh(rng));
      switch (pick(rng)) {
        case 0: b.db(1, 0); break;
        case 1: b.dphi(0, 1); break;
        case 2: b.db(1, 1); break;
        default: break;
      }
    }
    terms.push_back(b.t);
  }
  return Series::from_terms(Chart::particle, wide(), std::move(terms));
}

}  // namespace giweyl::testing
