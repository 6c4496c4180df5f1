#pragma once

#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "giweyl/series.hpp"

namespace giweyl {

// Star-ordered product of the gyration velocities, written as a word over
// the letters 'x' (V_x) and 'y' (V_y). Normal form: every 'x' left of every
// 'y'.
using Word = std::string;

inline bool word_is_normal(const Word& w) {
  return std::is_sorted(w.begin(), w.end());
}

// One term of a guiding-center word series: a scalar in (X, Y) times a word.
// The scalar commutes with everything in this algebra.
struct WordTerm {
  Term scalar;  // guiding-center chart, velocity exponents must stay zero
  Word word;
};

inline bool word_term_less(const WordTerm& a, const WordTerm& b) {
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  if (a.word != b.word) return a.word < b.word;
  return term_key_less(a.scalar, b.scalar);
}

class WordSeries {
 public:
  WordSeries() = default;
  explicit WordSeries(Truncation trunc) : trunc_(trunc) {}

  static WordSeries zero(const Truncation& trunc) { return WordSeries(trunc); }

  static WordSeries from_terms(const Truncation& trunc, std::vector<WordTerm> terms) {
    WordSeries s(trunc);
    s.terms_ = std::move(terms);
    s.normalize();
    return s;
  }

  const Truncation& trunc() const { return trunc_; }
  const std::vector<WordTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const WordSeries& a, const WordSeries& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].word != b.terms_[i].word ||
          !term_key_equal(a.terms_[i].scalar, b.terms_[i].scalar) ||
          a.terms_[i].scalar.coeff != b.terms_[i].scalar.coeff)
        return false;
    }
    return true;
  }
  friend bool operator!=(const WordSeries& a, const WordSeries& b) { return !(a == b); }

 private:
  void normalize() {
    std::vector<WordTerm> kept;
    kept.reserve(terms_.size());
    for (auto& t : terms_) {
      if (t.scalar.coeff.is_zero()) continue;
      if (t.scalar.kx != 0 || t.scalar.ky != 0)
        fail(Errc::domain_error, "word-series scalars cannot carry velocity monomials");
      sort_gens(t.scalar.gens);
      if (t.scalar.hbar > trunc_.max_hbar || t.scalar.eps > trunc_.max_eps) continue;
      if (t.scalar.eps < trunc_.min_eps)
        fail(Errc::eps_underflow, "word term at eps^" + std::to_string(t.scalar.eps) +
                                      " falls below the truncation window");
      kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end(), word_term_less);
    terms_.clear();
    for (auto& t : kept) {
      if (!terms_.empty() && terms_.back().word == t.word &&
          term_key_equal(terms_.back().scalar, t.scalar)) {
        terms_.back().scalar.coeff += t.scalar.coeff;
        if (terms_.back().scalar.coeff.is_zero()) terms_.pop_back();
      } else {
        terms_.push_back(std::move(t));
      }
    }
  }

  Truncation trunc_;
  std::vector<WordTerm> terms_;
};

inline WordSeries word_add(const WordSeries& a, const WordSeries& b) {
  std::vector<WordTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return WordSeries::from_terms(a.trunc().intersect(b.trunc()), std::move(terms));
}

inline WordSeries word_scale(const WordSeries& a, const Coeff& c) {
  std::vector<WordTerm> terms = a.terms();
  for (auto& t : terms) t.scalar.coeff *= c;
  return WordSeries::from_terms(a.trunc(), std::move(terms));
}

inline WordSeries word_negate(const WordSeries& a) { return word_scale(a, Coeff(Rat(-1))); }

inline WordSeries word_sub(const WordSeries& a, const WordSeries& b) {
  return word_add(a, word_negate(b));
}

// Star product of two word series: scalars multiply pointwise, words
// concatenate. Valid because scalars in (X, Y) commute with the gyration
// letters to the orders this algebra keeps.
inline WordSeries word_mul(const WordSeries& a, const WordSeries& b) {
  std::vector<WordTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      terms.push_back(WordTerm{term_mul(ta.scalar, tb.scalar), ta.word + tb.word});
  return WordSeries::from_terms(a.trunc().intersect(b.trunc()), std::move(terms));
}

// Lifts a scalar guiding-center series (no velocity part) into the word
// algebra with empty words.
inline WordSeries word_from_scalar(const Series& s, const Truncation& trunc) {
  if (s.chart() != Chart::guiding_center)
    fail(Errc::chart_mismatch, "word algebra lives in the guiding-center chart");
  std::vector<WordTerm> terms;
  for (const auto& t : s.terms()) {
    if (t.kx != 0 || t.ky != 0)
      fail(Errc::domain_error, "scalar lift cannot carry velocity monomials");
    terms.push_back(WordTerm{t, Word{}});
  }
  return WordSeries::from_terms(trunc, std::move(terms));
}

// Weyl ordering: each pointwise monomial V_x^kx V_y^ky becomes the average
// of all distinct letter orderings.
inline WordSeries to_star_form(const Series& s, const Truncation& trunc) {
  if (s.chart() != Chart::guiding_center)
    fail(Errc::chart_mismatch, "to_star_form expects a guiding-center series");
  std::vector<WordTerm> terms;
  for (const auto& t : s.terms()) {
    Term scalar = t;
    scalar.kx = scalar.ky = 0;
    if (t.kx == 0 && t.ky == 0) {
      terms.push_back(WordTerm{scalar, Word{}});
      continue;
    }
    Word sorted(static_cast<std::size_t>(t.kx), 'x');
    sorted.append(static_cast<std::size_t>(t.ky), 'y');
    Rat count = binomial(t.kx + t.ky, t.kx);
    scalar.coeff *= Rat(1) / count;
    Word w = sorted;
    do {
      terms.push_back(WordTerm{scalar, w});
    } while (std::next_permutation(w.begin(), w.end()));
  }
  return WordSeries::from_terms(trunc, std::move(terms));
}

// Rewrites every word into normal form using V_y V_x -> V_x V_y - i hbar/eps.
inline WordSeries normal_order(const WordSeries& s) {
  std::vector<WordTerm> done;
  std::deque<WordTerm> work(s.terms().begin(), s.terms().end());
  while (!work.empty()) {
    WordTerm t = std::move(work.front());
    work.pop_front();
    std::size_t swap_at = Word::npos;
    for (std::size_t i = 0; i + 1 < t.word.size(); ++i) {
      if (t.word[i] == 'y' && t.word[i + 1] == 'x') {
        swap_at = i;
        break;
      }
    }
    if (swap_at == Word::npos) {
      done.push_back(std::move(t));
      continue;
    }
    WordTerm swapped = t;
    std::swap(swapped.word[swap_at], swapped.word[swap_at + 1]);
    work.push_back(std::move(swapped));

    WordTerm contracted = t;
    contracted.word.erase(swap_at, 2);
    contracted.scalar.coeff *= Coeff(Rat(0), Rat(-1));  // -i
    contracted.scalar.hbar += 1;
    contracted.scalar.eps -= 1;
    if (contracted.scalar.hbar <= s.trunc().max_hbar) work.push_back(std::move(contracted));
  }
  return WordSeries::from_terms(s.trunc(), std::move(done));
}

// Scalar coefficient of one normal word, collected as a series.
inline Series word_coefficient(const WordSeries& s, const Word& w, const Truncation& trunc) {
  std::vector<Term> terms;
  for (const auto& t : s.terms())
    if (t.word == w) terms.push_back(t.scalar);
  return Series::from_terms(Chart::guiding_center, trunc, std::move(terms));
}

inline WordSeries word_without(const WordSeries& s, const Word& w) {
  std::vector<WordTerm> terms;
  for (const auto& t : s.terms())
    if (t.word != w) terms.push_back(t);
  return WordSeries::from_terms(s.trunc(), std::move(terms));
}

// scalar-series times word-series product.
inline WordSeries word_scalar_mul(const Series& c, const WordSeries& w) {
  std::vector<WordTerm> terms;
  terms.reserve(c.terms().size() * w.terms().size());
  for (const auto& tc : c.terms())
    for (const auto& tw : w.terms())
      terms.push_back(WordTerm{term_mul(tc, tw.scalar), tw.word});
  return WordSeries::from_terms(w.trunc(), std::move(terms));
}

// Normal-ordered k-th star power of J = V_x*V_x + V_y*V_y.
inline WordSeries normal_j_power(int k, const Truncation& trunc) {
  Truncation local(trunc.max_hbar, std::min(trunc.min_eps, -2 * k), std::max(trunc.max_eps, 0));
  std::vector<WordTerm> j_terms;
  Term unit_term;
  j_terms.push_back(WordTerm{unit_term, Word("xx")});
  j_terms.push_back(WordTerm{unit_term, Word("yy")});
  WordSeries j = WordSeries::from_terms(local, j_terms);
  WordSeries r = WordSeries::from_terms(local, {WordTerm{unit_term, Word{}}});
  for (int t = 0; t < k; ++t) r = word_mul(r, j);
  return normal_order(r);
}

// Polynomial in J with scalar guiding-center series coefficients:
// sum_k coeff[k] * J^{star k}.
struct JPolynomial {
  std::vector<Series> coeff;

  const Series& at(std::size_t k) const { return coeff[k]; }
  std::size_t degree() const { return coeff.empty() ? 0 : coeff.size() - 1; }
};

inline bool jpoly_equal(const JPolynomial& a, const JPolynomial& b) {
  std::size_t n = std::max(a.coeff.size(), b.coeff.size());
  for (std::size_t k = 0; k < n; ++k) {
    bool za = k >= a.coeff.size() || a.coeff[k].is_zero();
    bool zb = k >= b.coeff.size() || b.coeff[k].is_zero();
    if (za && zb) continue;
    if (za != zb) return false;
    if (!(a.coeff[k] == b.coeff[k])) return false;
  }
  return true;
}

// Expands a J polynomial back into a normal-ordered word series.
inline WordSeries jpoly_to_words(const JPolynomial& p, const Truncation& trunc) {
  WordSeries r = WordSeries::zero(trunc);
  for (std::size_t k = 0; k < p.coeff.size(); ++k)
    r = word_add(r, word_scalar_mul(p.coeff[k], normal_j_power(static_cast<int>(k), trunc)));
  return r;
}

// Solves for the coefficients of s in the basis {1, J, J*J, ...} by peeling
// the pure-x words top-down. Residual terms for which `discard` returns true
// are dropped (orders beyond the validity of a graded computation); any
// other residual raises not_reducible_to_j.
template <typename DiscardPred>
inline JPolynomial express_in_j_filtered(const WordSeries& input, DiscardPred&& discard) {
  WordSeries s = normal_order(input);
  std::size_t max_len = 0;
  for (const auto& t : s.terms()) max_len = std::max(max_len, t.word.size());
  int kmax = static_cast<int>(max_len / 2);

  JPolynomial p;
  p.coeff.assign(static_cast<std::size_t>(kmax) + 1,
                 Series::zero(Chart::guiding_center, s.trunc()));
  for (int k = kmax; k >= 1; --k) {
    Word probe(static_cast<std::size_t>(2 * k), 'x');
    Series ck = word_coefficient(s, probe, s.trunc());
    if (ck.is_zero()) continue;
    p.coeff[static_cast<std::size_t>(k)] = ck;
    s = word_sub(s, word_scalar_mul(ck, normal_j_power(k, s.trunc())));
  }
  std::vector<Term> constant;
  std::vector<WordTerm> residual;
  for (const auto& t : s.terms()) {
    if (t.word.empty())
      constant.push_back(t.scalar);
    else if (!discard(t.scalar))
      residual.push_back(t);
  }
  if (!residual.empty()) {
    std::string what = "series is not a polynomial in J; residual has " +
                       std::to_string(residual.size()) + " word term(s), first word '" +
                       residual.front().word + "'";
    fail(Errc::not_reducible_to_j, what);
  }
  p.coeff[0] = Series::from_terms(Chart::guiding_center, s.trunc(), std::move(constant));
  while (p.coeff.size() > 1 && p.coeff.back().is_zero()) p.coeff.pop_back();
  return p;
}

inline JPolynomial express_in_j(const WordSeries& input) {
  return express_in_j_filtered(input, [](const Term&) { return false; });
}

}  // namespace giweyl
