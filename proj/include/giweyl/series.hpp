#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "giweyl/errors.hpp"
#include "giweyl/rational.hpp"

namespace giweyl {

// Which coordinate set a series lives in: particle variables (x, y, v_x, v_y)
// or guiding-center variables (X, Y, V_x, V_y).
enum class Chart { particle, guiding_center };

enum class Axis { x, y };

// Field symbols that can appear as opaque generators. Bare B never appears
// here: all powers of the underivated field live in Term::bhalf.
enum class Field { b, phi, c1, c2, mu_z };

// Derivative multi-index, stored as per-axis counts so mixed partials are
// automatically order-insensitive.
struct Deriv {
  int x = 0;
  int y = 0;

  int order() const { return x + y; }
  bool none() const { return x == 0 && y == 0; }
  Deriv plus(Axis a) const { return a == Axis::x ? Deriv{x + 1, y} : Deriv{x, y + 1}; }
  Deriv plus(const Deriv& o) const { return Deriv{x + o.x, y + o.y}; }

  friend auto operator<=>(const Deriv&, const Deriv&) = default;
};

struct Generator {
  Field field = Field::b;
  Deriv d{};

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

inline Generator gen_db(int dx, int dy) {
  if (dx + dy < 1) fail(Errc::domain_error, "DB generator requires at least one derivative");
  return Generator{Field::b, Deriv{dx, dy}};
}
inline Generator gen_dphi(int dx, int dy) { return Generator{Field::phi, Deriv{dx, dy}}; }
inline Generator gen_const(Field f) {
  return Generator{f, Deriv{}};
}

struct GenPow {
  Generator g;
  int pow = 1;

  friend auto operator<=>(const GenPow&, const GenPow&) = default;
};

// Order window for every operation: terms above max_hbar / max_eps are
// dropped silently, terms below min_eps raise eps_underflow (lost singular
// terms are a correctness failure).
struct Truncation {
  int max_hbar = 2;
  int min_eps = -2;
  int max_eps = 3;

  Truncation() = default;
  Truncation(int mh, int lo, int hi) : max_hbar(mh), min_eps(lo), max_eps(hi) {
    if (min_eps > max_eps) fail(Errc::domain_error, "truncation window has min_eps > max_eps");
    if (max_hbar < 0) fail(Errc::domain_error, "truncation requires max_hbar >= 0");
  }

  Truncation intersect(const Truncation& o) const {
    return Truncation(std::min(max_hbar, o.max_hbar), std::max(min_eps, o.min_eps),
                      std::min(max_eps, o.max_eps));
  }

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

inline Truncation wide_truncation() { return Truncation(64, -64, 64); }

// One term of a graded series:
//   coeff * hbar^hbar * eps^eps * B^{bhalf/2} * prod(gens) * pos^.. * vel^..
// where pos is (x, y) or (X, Y) and vel is (v_x, v_y) or (V_x, V_y)
// depending on the chart.
struct Term {
  Coeff coeff = Coeff::one();
  int hbar = 0;
  int eps = 0;
  int bhalf = 0;
  std::vector<GenPow> gens;  // sorted, pow >= 1
  int px = 0, py = 0;
  int kx = 0, ky = 0;

  auto key() const { return std::tie(hbar, eps, bhalf, gens, px, py, kx, ky); }
};

inline bool term_key_less(const Term& a, const Term& b) { return a.key() < b.key(); }
inline bool term_key_equal(const Term& a, const Term& b) { return a.key() == b.key(); }

inline void sort_gens(std::vector<GenPow>& gens) {
  std::sort(gens.begin(), gens.end(),
            [](const GenPow& a, const GenPow& b) { return a.g < b.g; });
}

// Merge two sorted generator lists, adding exponents of equal generators.
inline std::vector<GenPow> merge_gens(const std::vector<GenPow>& a, const std::vector<GenPow>& b) {
  std::vector<GenPow> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].g < b[j].g) {
      out.push_back(a[i++]);
    } else if (b[j].g < a[i].g) {
      out.push_back(b[j++]);
    } else {
      out.push_back(GenPow{a[i].g, a[i].pow + b[j].pow});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

inline Term term_mul(const Term& a, const Term& b) {
  Term t;
  t.coeff = a.coeff * b.coeff;
  t.hbar = a.hbar + b.hbar;
  t.eps = a.eps + b.eps;
  t.bhalf = a.bhalf + b.bhalf;
  t.gens = merge_gens(a.gens, b.gens);
  t.px = a.px + b.px;
  t.py = a.py + b.py;
  t.kx = a.kx + b.kx;
  t.ky = a.ky + b.ky;
  return t;
}

namespace detail {
inline void check_term(const Term& t) {
  if (t.hbar < 0 || t.px < 0 || t.py < 0 || t.kx < 0 || t.ky < 0)
    fail(Errc::domain_error, "negative exponent in term");
  for (const auto& gp : t.gens) {
    if (gp.pow < 1) fail(Errc::domain_error, "generator exponent must be >= 1");
    if (gp.g.field == Field::b && gp.g.d.order() < 1)
      fail(Errc::domain_error, "bare B must live in bhalf, not as a generator");
    if ((gp.g.field == Field::c1 || gp.g.field == Field::c2 || gp.g.field == Field::mu_z) &&
        !gp.g.d.none())
      fail(Errc::domain_error, "constants cannot carry derivatives");
  }
}
}  // namespace detail

// Canonical exact series of graded terms. Immutable after construction;
// all operations are pure functions returning new values.
class Series {
 public:
  Series() : chart_(Chart::particle), trunc_() {}
  Series(Chart chart, Truncation trunc) : chart_(chart), trunc_(trunc) {}

  static Series zero(Chart chart, const Truncation& trunc) { return Series(chart, trunc); }

  static Series from_terms(Chart chart, const Truncation& trunc, std::vector<Term> terms) {
    Series s(chart, trunc);
    s.terms_ = std::move(terms);
    s.normalize();
    return s;
  }

  static Series from_term(Chart chart, const Truncation& trunc, Term t) {
    std::vector<Term> v;
    v.push_back(std::move(t));
    return from_terms(chart, trunc, std::move(v));
  }

  static Series unit(Chart chart, const Truncation& trunc) {
    return from_term(chart, trunc, Term{});
  }

  Chart chart() const { return chart_; }
  const Truncation& trunc() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.chart_ != b.chart_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!term_key_equal(a.terms_[i], b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff)
        return false;
    }
    return true;
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

 private:
  void normalize() {
    std::vector<Term> kept;
    kept.reserve(terms_.size());
    for (auto& t : terms_) {
      if (t.coeff.is_zero()) continue;
      sort_gens(t.gens);
      detail::check_term(t);
      if (t.hbar > trunc_.max_hbar || t.eps > trunc_.max_eps) continue;
      if (t.eps < trunc_.min_eps)
        fail(Errc::eps_underflow, "term at eps^" + std::to_string(t.eps) +
                                      " falls below the truncation window (min eps^" +
                                      std::to_string(trunc_.min_eps) + ")");
      kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end(), term_key_less);
    terms_.clear();
    for (auto& t : kept) {
      if (!terms_.empty() && term_key_equal(terms_.back(), t)) {
        terms_.back().coeff += t.coeff;
        if (terms_.back().coeff.is_zero()) terms_.pop_back();
      } else {
        terms_.push_back(std::move(t));
      }
    }
  }

  Chart chart_;
  Truncation trunc_;
  std::vector<Term> terms_;
};

inline void require_same_chart(const Series& a, const Series& b) {
  if (a.chart() != b.chart()) fail(Errc::chart_mismatch, "series live in different charts");
}

inline Series add(const Series& a, const Series& b) {
  require_same_chart(a, b);
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return Series::from_terms(a.chart(), a.trunc().intersect(b.trunc()), std::move(terms));
}

inline Series negate(const Series& a) {
  std::vector<Term> terms = a.terms();
  for (auto& t : terms) t.coeff = -t.coeff;
  return Series::from_terms(a.chart(), a.trunc(), std::move(terms));
}

inline Series sub(const Series& a, const Series& b) { return add(a, negate(b)); }

inline Series scale(const Series& a, const Coeff& c) {
  std::vector<Term> terms = a.terms();
  for (auto& t : terms) t.coeff *= c;
  return Series::from_terms(a.chart(), a.trunc(), std::move(terms));
}

inline Series mul(const Series& a, const Series& b) {
  require_same_chart(a, b);
  std::vector<Term> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) terms.push_back(term_mul(ta, tb));
  return Series::from_terms(a.chart(), a.trunc().intersect(b.trunc()), std::move(terms));
}

inline Series pow(const Series& a, int k) {
  Series r = Series::unit(a.chart(), a.trunc());
  for (int t = 0; t < k; ++t) r = mul(r, a);
  return r;
}

// d/dx_i (or d/dX_i): product rule over the position monomial, the B power
// (d_i B^{h/2} = (h/2) B^{(h-2)/2} B_{,i}) and every derivable generator.
// Constants c1, c2, mu_z are annihilated; the velocity monomial is untouched.
inline Series partial_pos(const Series& a, Axis axis) {
  std::vector<Term> out;
  for (const auto& t : a.terms()) {
    // position monomial
    {
      int p = axis == Axis::x ? t.px : t.py;
      if (p > 0) {
        Term d = t;
        d.coeff *= Rat(Int(p));
        (axis == Axis::x ? d.px : d.py) -= 1;
        out.push_back(std::move(d));
      }
    }
    // B^{bhalf/2} chain rule
    if (t.bhalf != 0) {
      Term d = t;
      d.coeff *= rat(t.bhalf, 2);
      d.bhalf -= 2;
      d.gens = merge_gens(d.gens, {GenPow{gen_db(axis == Axis::x ? 1 : 0, axis == Axis::y ? 1 : 0), 1}});
      out.push_back(std::move(d));
    }
    // generators
    for (std::size_t i = 0; i < t.gens.size(); ++i) {
      const auto& gp = t.gens[i];
      if (gp.g.field != Field::b && gp.g.field != Field::phi) continue;
      Term d = t;
      d.coeff *= Rat(Int(gp.pow));
      Generator bumped{gp.g.field, gp.g.d.plus(axis)};
      if (d.gens[i].pow == 1)
        d.gens.erase(d.gens.begin() + static_cast<std::ptrdiff_t>(i));
      else
        d.gens[i].pow -= 1;
      d.gens = merge_gens(d.gens, {GenPow{bumped, 1}});
      out.push_back(std::move(d));
    }
  }
  return Series::from_terms(a.chart(), a.trunc(), std::move(out));
}

// d/dv_i (or d/dV_i): acts on the velocity monomial only.
inline Series partial_vel(const Series& a, Axis axis) {
  std::vector<Term> out;
  for (const auto& t : a.terms()) {
    int k = axis == Axis::x ? t.kx : t.ky;
    if (k == 0) continue;
    Term d = t;
    d.coeff *= Rat(Int(k));
    (axis == Axis::x ? d.kx : d.ky) -= 1;
    out.push_back(std::move(d));
  }
  return Series::from_terms(a.chart(), a.trunc(), std::move(out));
}

inline Series truncate_to(const Series& a, const Truncation& t) {
  return Series::from_terms(a.chart(), t, a.terms());
}

inline bool equals(const Series& a, const Series& b) { return a == b; }

// Restriction helpers used by the verification reports.
template <typename Pred>
inline Series filter_terms(const Series& a, Pred&& keep) {
  std::vector<Term> out;
  for (const auto& t : a.terms())
    if (keep(t)) out.push_back(t);
  return Series::from_terms(a.chart(), a.trunc(), std::move(out));
}

inline Series restrict_eps(const Series& a, int lo, int hi) {
  return filter_terms(a, [&](const Term& t) { return t.eps >= lo && t.eps <= hi; });
}

inline Series restrict_hbar(const Series& a, int h) {
  return filter_terms(a, [&](const Term& t) { return t.hbar == h; });
}

inline bool contains_field(const Series& a, Field f) {
  for (const auto& t : a.terms())
    for (const auto& gp : t.gens)
      if (gp.g.field == f) return true;
  return false;
}

inline bool has_field_part(const Term& t) { return t.bhalf != 0 || !t.gens.empty(); }

// Series with every derivative of a deleted (the eps grading is kept):
// used when degenerating to homogeneous fields.
inline Series drop_field_generators(const Series& a) {
  return filter_terms(a, [](const Term& t) { return t.gens.empty(); });
}

inline Deriv axis_deriv(Axis a) { return a == Axis::x ? Deriv{1, 0} : Deriv{0, 1}; }

// Every phase-space monomial x^a y^b v_x^c v_y^d of total degree <= deg.
inline std::vector<Series> phase_monomials(int deg, const Truncation& trunc) {
  std::vector<Series> out;
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; a + b <= deg; ++b)
      for (int c = 0; a + b + c <= deg; ++c)
        for (int d = 0; a + b + c + d <= deg; ++d) {
          Term t;
          t.px = a;
          t.py = b;
          t.kx = c;
          t.ky = d;
          out.push_back(Series::from_term(Chart::particle, trunc, t));
        }
  return out;
}

}  // namespace giweyl
