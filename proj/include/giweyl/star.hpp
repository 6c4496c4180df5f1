#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "giweyl/series.hpp"

namespace giweyl {

// One graded bidifferential monomial: coeff * prefactor(x) applied as
// d^{d_left_pos} d^{d_left_vel} on the left factor and
// d^{d_right_pos} d^{d_right_vel} on the right factor, everything evaluated
// at the common phase-space point afterwards.
struct BiDiffTerm {
  Coeff coeff = Coeff::one();
  Series prefactor;  // field generators only, no hbar/eps grading, no monomials
  Deriv d_left_pos{}, d_left_vel{}, d_right_pos{}, d_right_vel{};
};

struct PBlock {
  int hbar = 0;
  int eps = 0;
  std::vector<BiDiffTerm> terms;
};

// The graded product operator: sum over blocks of hbar^n eps^m P_{n,m}.
// At hbar^n the eps exponents range over -n..0 and the (0,0) block is the
// identity.
struct POperator {
  int max_hbar = 0;
  std::vector<PBlock> blocks;  // sorted by (hbar, eps)
};

// B == 0 switches off every field-dependent operator, leaving the ordinary
// Moyal exponential.
enum class FieldMode { general, zero_field };

// Test seam: replaces the integer weights of the field operators.
using WeightFn = std::function<long long(int n, int k)>;

// Weight of the k-th derivative split inside the n-th field operator:
// C(n+1,k) * [(1-(-1)^k)(n+1) - (1-(-1)^{n+1}) k].
inline long long weight_w(int n, int k) {
  if (n < 1 || k < 1 || k > n) fail(Errc::domain_error, "weight_w requires 1 <= k <= n");
  long long binom = 1;
  for (int t = 0; t < k; ++t) binom = binom * (n + 1 - t) / (t + 1);
  long long odd_k = (k % 2 != 0) ? 2 : 0;
  long long even_n = (n % 2 == 0) ? 2 : 0;
  return binom * (odd_k * (n + 1) - even_n * k);
}

namespace detail {

inline Truncation prefactor_truncation() { return wide_truncation(); }

inline Series prefactor_unit() {
  return Series::unit(Chart::particle, prefactor_truncation());
}

inline Series prefactor_b() {
  Term t;
  t.bhalf = 2;
  return Series::from_term(Chart::particle, prefactor_truncation(), t);
}

inline Series prefactor_db(const Deriv& d) {
  Term t;
  t.gens = {GenPow{Generator{Field::b, d}, 1}};
  return Series::from_term(Chart::particle, prefactor_truncation(), t);
}

inline BiDiffTerm combine(const BiDiffTerm& a, const BiDiffTerm& b) {
  BiDiffTerm t;
  t.coeff = a.coeff * b.coeff;
  t.prefactor = mul(a.prefactor, b.prefactor);
  t.d_left_pos = a.d_left_pos.plus(b.d_left_pos);
  t.d_left_vel = a.d_left_vel.plus(b.d_left_vel);
  t.d_right_pos = a.d_right_pos.plus(b.d_right_pos);
  t.d_right_vel = a.d_right_vel.plus(b.d_right_vel);
  return t;
}

}  // namespace detail

// Canonical merge of a bidifferential term list: expands prefactors into
// monomials and collects equal (derivative, prefactor-monomial) keys.
inline std::vector<BiDiffTerm> normalize_bidiff(const std::vector<BiDiffTerm>& in) {
  struct Entry {
    Term pre;
    Deriv lp, lv, rp, rv;
    Coeff coeff;
  };
  std::vector<Entry> flat;
  for (const auto& t : in)
    for (const auto& p : t.prefactor.terms()) {
      Entry e{p, t.d_left_pos, t.d_left_vel, t.d_right_pos, t.d_right_vel, t.coeff * p.coeff};
      e.pre.coeff = Coeff::one();
      flat.push_back(std::move(e));
    }
  auto key = [](const Entry& e) {
    return std::make_tuple(e.lp, e.lv, e.rp, e.rv, e.pre.key());
  };
  std::sort(flat.begin(), flat.end(), [&](const Entry& a, const Entry& b) { return key(a) < key(b); });
  std::vector<BiDiffTerm> out;
  for (auto& e : flat) {
    if (!out.empty()) {
      auto& last = out.back();
      Entry le{last.prefactor.terms().empty() ? Term{} : last.prefactor.terms()[0],
               last.d_left_pos, last.d_left_vel, last.d_right_pos, last.d_right_vel, last.coeff};
      le.pre.coeff = Coeff::one();
      if (key(le) == key(e)) {
        last.coeff += e.coeff;
        if (last.coeff.is_zero()) out.pop_back();
        continue;
      }
    }
    BiDiffTerm t;
    t.coeff = e.coeff;
    Term pre = e.pre;
    t.prefactor = Series::from_term(Chart::particle, detail::prefactor_truncation(), pre);
    t.d_left_pos = e.lp;
    t.d_left_vel = e.lv;
    t.d_right_pos = e.rp;
    t.d_right_vel = e.rv;
    out.push_back(std::move(t));
  }
  return out;
}

inline bool bidiff_equal(const std::vector<BiDiffTerm>& a, const std::vector<BiDiffTerm>& b) {
  auto na = normalize_bidiff(a);
  auto nb = normalize_bidiff(b);
  if (na.size() != nb.size()) return false;
  for (std::size_t i = 0; i < na.size(); ++i) {
    if (na[i].coeff != nb[i].coeff || na[i].d_left_pos != nb[i].d_left_pos ||
        na[i].d_left_vel != nb[i].d_left_vel || na[i].d_right_pos != nb[i].d_right_pos ||
        na[i].d_right_vel != nb[i].d_right_vel || !(na[i].prefactor == nb[i].prefactor))
      return false;
  }
  return true;
}

// The field-free operator: (1/2) sum_i (da_i dy_i - db_i dz_i), where
// (z, a) address the left factor and (y, b) the right one.
inline std::vector<BiDiffTerm> build_l() {
  std::vector<BiDiffTerm> out;
  for (Axis i : {Axis::x, Axis::y}) {
    BiDiffTerm t1;
    t1.coeff = Coeff(rat(1, 2));
    t1.prefactor = detail::prefactor_unit();
    t1.d_left_vel = axis_deriv(i);
    t1.d_right_pos = axis_deriv(i);
    out.push_back(std::move(t1));

    BiDiffTerm t2;
    t2.coeff = Coeff(rat(-1, 2));
    t2.prefactor = detail::prefactor_unit();
    t2.d_right_vel = axis_deriv(i);
    t2.d_left_pos = axis_deriv(i);
    out.push_back(std::move(t2));
  }
  return out;
}

// The n-th field operator: overall (i/2)^{n+1} / ((n+1)^2 n!), prefactor
// d^{n-1}B over the index tuple, velocity derivatives da_j db_l with the
// weighted split of the tuple derivatives between the two slots. The
// Levi-Civita contraction is specialized to the z row at construction time.
inline std::vector<BiDiffTerm> build_ln(int n, const WeightFn& weights = {}) {
  if (n < 1) fail(Errc::domain_error, "build_ln requires n >= 1");
  Coeff overall = i_pow(n + 1) * rat(1, 1LL << (n + 1));
  overall *= rat(1, static_cast<long long>(n + 1) * (n + 1));
  Rat fact(1);
  for (int t = 2; t <= n; ++t) fact *= Rat(Int(t));
  overall *= Rat(1) / fact;

  std::vector<BiDiffTerm> out;
  int tuples = 1;
  for (int t = 0; t < n - 1; ++t) tuples *= 2;
  for (int mask = 0; mask < tuples; ++mask) {
    Deriv tuple_all{};
    std::vector<Axis> idx(static_cast<std::size_t>(n - 1));
    for (int m = 0; m < n - 1; ++m) {
      idx[static_cast<std::size_t>(m)] = (mask >> m) & 1 ? Axis::y : Axis::x;
      tuple_all = tuple_all.plus(idx[static_cast<std::size_t>(m)]);
    }
    Series prefactor = (n == 1) ? detail::prefactor_b() : detail::prefactor_db(tuple_all);
    for (auto [j, l, sign] : {std::tuple<Axis, Axis, int>{Axis::x, Axis::y, +1},
                              std::tuple<Axis, Axis, int>{Axis::y, Axis::x, -1}}) {
      for (int k = 1; k <= n; ++k) {
        long long w = weights ? weights(n, k) : weight_w(n, k);
        if (w == 0) continue;
        BiDiffTerm t;
        t.coeff = overall * rat(sign * w);
        t.prefactor = prefactor;
        t.d_left_vel = axis_deriv(j);
        t.d_right_vel = axis_deriv(l);
        for (int m = 0; m < k - 1; ++m) t.d_left_vel = t.d_left_vel.plus(idx[static_cast<std::size_t>(m)]);
        for (int m = k - 1; m < n - 1; ++m) t.d_right_vel = t.d_right_vel.plus(idx[static_cast<std::size_t>(m)]);
        out.push_back(std::move(t));
      }
    }
  }
  return normalize_bidiff(out);
}

// Expands exp[-i hbar L - (i/eps) sum_n hbar^n L_n] over multisets of the
// commuting operators: exponent vector (j0; j1..jN) contributes
// (-i)^{j0+sum jn} / (j0! prod jn!) at hbar^{j0+sum n jn} eps^{-sum jn}.
inline POperator build_p(int max_hbar, FieldMode mode = FieldMode::general,
                         const WeightFn& weights = {}) {
  if (max_hbar < 0 || max_hbar > 8) fail(Errc::domain_error, "build_p: max_hbar out of range");
  std::vector<std::vector<BiDiffTerm>> ln(static_cast<std::size_t>(max_hbar) + 1);
  if (mode == FieldMode::general)
    for (int n = 1; n <= max_hbar; ++n) ln[static_cast<std::size_t>(n)] = build_ln(n, weights);
  const auto l = build_l();

  std::map<std::pair<int, int>, std::vector<BiDiffTerm>> blocks;
  std::vector<int> jn(static_cast<std::size_t>(max_hbar) + 1, 0);  // jn[0] is the L count

  auto emit = [&]() {
    int hbar = jn[0];
    int ops = jn[0];
    int eps = 0;
    for (int n = 1; n <= max_hbar; ++n) {
      hbar += n * jn[static_cast<std::size_t>(n)];
      ops += jn[static_cast<std::size_t>(n)];
      eps -= jn[static_cast<std::size_t>(n)];
    }
    Coeff c = i_pow(-ops);  // (-i)^ops
    Rat denom(1);
    for (int n = 0; n <= max_hbar; ++n) {
      for (int t = 2; t <= jn[static_cast<std::size_t>(n)]; ++t) denom *= Rat(Int(t));
    }
    c *= Rat(1) / denom;

    std::vector<BiDiffTerm> composed;
    BiDiffTerm identity;
    identity.coeff = c;
    identity.prefactor = detail::prefactor_unit();
    composed.push_back(identity);
    auto apply_power = [&](const std::vector<BiDiffTerm>& op, int times) {
      for (int t = 0; t < times; ++t) {
        std::vector<BiDiffTerm> next;
        next.reserve(composed.size() * op.size());
        for (const auto& a : composed)
          for (const auto& b : op) next.push_back(detail::combine(a, b));
        composed = normalize_bidiff(next);
      }
    };
    apply_power(l, jn[0]);
    for (int n = 1; n <= max_hbar; ++n) apply_power(ln[static_cast<std::size_t>(n)], jn[static_cast<std::size_t>(n)]);

    auto& blk = blocks[{hbar, eps}];
    blk.insert(blk.end(), composed.begin(), composed.end());
  };

  // enumerate j0 + sum n*jn <= max_hbar
  std::function<void(int, int)> rec = [&](int n, int budget) {
    if (n > max_hbar || mode == FieldMode::zero_field) {
      for (jn[0] = 0; jn[0] <= budget; ++jn[0]) emit();
      jn[0] = 0;
      return;
    }
    for (int count = 0; count * n <= budget; ++count) {
      jn[static_cast<std::size_t>(n)] = count;
      rec(n + 1, budget - count * n);
    }
    jn[static_cast<std::size_t>(n)] = 0;
  };
  rec(1, max_hbar);

  POperator p;
  p.max_hbar = max_hbar;
  for (auto& [key, terms] : blocks) {
    auto merged = normalize_bidiff(terms);
    if (merged.empty()) continue;
    p.blocks.push_back(PBlock{key.first, key.second, std::move(merged)});
  }
  std::sort(p.blocks.begin(), p.blocks.end(), [](const PBlock& a, const PBlock& b) {
    return std::tie(a.hbar, a.eps) < std::tie(b.hbar, b.eps);
  });
  return p;
}

// Construction is deterministic, so the operator is cached per
// (max_hbar, mode); hooked weights bypass the cache.
inline const POperator& cached_p(int max_hbar, FieldMode mode) {
  static std::map<std::pair<int, int>, POperator> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(max_hbar, static_cast<int>(mode));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_p(max_hbar, mode)).first;
  return it->second;
}

inline Series apply_derivs(const Series& s, const Deriv& dpos, const Deriv& dvel) {
  Series r = s;
  for (int t = 0; t < dpos.x && !r.is_zero(); ++t) r = partial_pos(r, Axis::x);
  for (int t = 0; t < dpos.y && !r.is_zero(); ++t) r = partial_pos(r, Axis::y);
  for (int t = 0; t < dvel.x && !r.is_zero(); ++t) r = partial_vel(r, Axis::x);
  for (int t = 0; t < dvel.y && !r.is_zero(); ++t) r = partial_vel(r, Axis::y);
  return r;
}

// Applies a list of bidifferential terms (no grading attached) to a pair of
// symbols and sums the results.
inline Series apply_bidiff(const std::vector<BiDiffTerm>& terms, const Series& a, const Series& b,
                           const Truncation& trunc) {
  Series result = Series::zero(a.chart(), trunc);
  for (const auto& t : terms) {
    Series da = apply_derivs(a, t.d_left_pos, t.d_left_vel);
    if (da.is_zero()) continue;
    Series db = apply_derivs(b, t.d_right_pos, t.d_right_vel);
    if (db.is_zero()) continue;
    Series piece = mul(truncate_to(t.prefactor, trunc), mul(da, db));
    piece = scale(piece, t.coeff);
    result = add(result, piece);
  }
  return result;
}

namespace detail {

inline void require_particle(const Series& a, const Series& b) {
  require_same_chart(a, b);
  if (a.chart() != Chart::particle)
    fail(Errc::chart_mismatch, "star products act on particle-chart symbols");
}

inline void require_field_free(const Series& s) {
  for (const auto& t : s.terms())
    if (t.bhalf != 0 || !t.gens.empty())
      fail(Errc::domain_error, "zero-field mode requires symbols without B or field generators");
}

enum class BlockFilter { all, odd_hbar };

inline Series apply_p(const POperator& p, const Series& a, const Series& b,
                      const Truncation& trunc, BlockFilter filter, const Coeff& scale_by) {
  Series result = Series::zero(a.chart(), trunc);
  for (const auto& blk : p.blocks) {
    if (filter == BlockFilter::odd_hbar && blk.hbar % 2 == 0) continue;
    Series piece = apply_bidiff(blk.terms, a, b, trunc);
    if (piece.is_zero()) continue;
    Term shift;
    shift.coeff = scale_by;
    shift.hbar = blk.hbar;
    shift.eps = blk.eps;
    piece = mul(piece, Series::from_term(a.chart(), trunc, shift));
    result = add(result, piece);
  }
  return result;
}

}  // namespace detail

// The gauge-invariant star product of two particle-chart symbols.
inline Series star(const Series& a, const Series& b, const Truncation& trunc,
                   FieldMode mode = FieldMode::general, const WeightFn& weights = {}) {
  detail::require_particle(a, b);
  if (mode == FieldMode::zero_field) {
    detail::require_field_free(a);
    detail::require_field_free(b);
  }
  const POperator& p = weights ? build_p(trunc.max_hbar, mode, weights)
                               : cached_p(trunc.max_hbar, mode);
  return detail::apply_p(p, truncate_to(a, trunc), truncate_to(b, trunc), trunc,
                         detail::BlockFilter::all, Coeff::one());
}

// star(a,b) - star(b,a), assembled directly from the odd-hbar blocks.
inline Series moyal_bracket(const Series& a, const Series& b, const Truncation& trunc,
                            FieldMode mode = FieldMode::general, const WeightFn& weights = {}) {
  detail::require_particle(a, b);
  const POperator& p = weights ? build_p(trunc.max_hbar, mode, weights)
                               : cached_p(trunc.max_hbar, mode);
  return detail::apply_p(p, truncate_to(a, trunc), truncate_to(b, trunc), trunc,
                         detail::BlockFilter::odd_hbar, Coeff(Rat(2)));
}

// Gauge-invariant Poisson bracket:
// df/dx.dg/dv - df/dv.dg/dx + (B/eps)(df/dv_x dg/dv_y - df/dv_y dg/dv_x).
inline Series poisson_bracket(const Series& a, const Series& b) {
  detail::require_particle(a, b);
  Truncation trunc = a.trunc().intersect(b.trunc());
  Series r = Series::zero(a.chart(), trunc);
  for (Axis i : {Axis::x, Axis::y}) {
    r = add(r, mul(partial_pos(a, i), partial_vel(b, i)));
    r = sub(r, mul(partial_vel(a, i), partial_pos(b, i)));
  }
  Series swirl = sub(mul(partial_vel(a, Axis::x), partial_vel(b, Axis::y)),
                     mul(partial_vel(a, Axis::y), partial_vel(b, Axis::x)));
  Term bfac;
  bfac.bhalf = 2;
  bfac.eps = -1;
  swirl = mul(swirl, Series::from_term(a.chart(), trunc, bfac));
  return add(r, swirl);
}

// Average of star-product chains over all orderings of the factors.
inline Series symmetrized_star(const std::vector<Series>& factors, const Truncation& trunc,
                               FieldMode mode = FieldMode::general) {
  if (factors.empty()) fail(Errc::domain_error, "symmetrized_star needs at least one factor");
  std::vector<std::size_t> idx(factors.size());
  std::iota(idx.begin(), idx.end(), 0);
  Series sum = Series::zero(factors[0].chart(), trunc);
  Rat count(0);
  do {
    Series chain = truncate_to(factors[idx[0]], trunc);
    for (std::size_t t = 1; t < idx.size(); ++t) chain = star(chain, factors[idx[t]], trunc, mode);
    sum = add(sum, chain);
    count += 1;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return scale(sum, Coeff(Rat(1) / count));
}

}  // namespace giweyl
