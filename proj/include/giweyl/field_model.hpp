#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "giweyl/series.hpp"
#include "giweyl/star.hpp"
#include "giweyl/words.hpp"

namespace giweyl {

using Complex = std::complex<double>;

// Real polynomial in (x, y), exact differentiation, used for the concrete
// field models of the numeric oracle.
class Poly2 {
 public:
  Poly2() = default;

  static Poly2 constant(double c) {
    Poly2 p;
    p.add_term(0, 0, c);
    return p;
  }

  void add_term(int i, int j, double c) {
    if (c == 0.0) return;
    coeffs_[{i, j}] += c;
    if (coeffs_[{i, j}] == 0.0) coeffs_.erase({i, j});
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, c] : coeffs_) d = std::max(d, k.first + k.second);
    return d;
  }

  bool empty() const { return coeffs_.empty(); }

  double eval(double x, double y) const {
    double r = 0.0;
    for (const auto& [k, c] : coeffs_) r += c * std::pow(x, k.first) * std::pow(y, k.second);
    return r;
  }

  Poly2 derivative(Axis a) const {
    Poly2 d;
    for (const auto& [k, c] : coeffs_) {
      if (a == Axis::x && k.first > 0) d.add_term(k.first - 1, k.second, c * k.first);
      if (a == Axis::y && k.second > 0) d.add_term(k.first, k.second - 1, c * k.second);
    }
    return d;
  }

  Poly2 derivative(const Deriv& d) const {
    Poly2 r = *this;
    for (int t = 0; t < d.x; ++t) r = r.derivative(Axis::x);
    for (int t = 0; t < d.y; ++t) r = r.derivative(Axis::y);
    return r;
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [k, c] : o.coeffs_) r.add_term(k.first, k.second, c);
    return r;
  }

  Poly2 operator*(double s) const {
    Poly2 r;
    for (const auto& [k, c] : coeffs_) r.add_term(k.first, k.second, c * s);
    return r;
  }

  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [ka, ca] : coeffs_)
      for (const auto& [kb, cb] : o.coeffs_)
        r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
  }

 private:
  std::map<std::pair<int, int>, double> coeffs_;
};

namespace detail {

// Float-coefficient polynomial expressions in x, y:
//   expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
//   factor := number | 'x' | 'y' | '(' expr ')' | factor '^' int
class PolyParser {
 public:
  explicit PolyParser(const std::string& text) : text_(text) {}

  Poly2 parse() {
    Poly2 p = expr();
    skip_ws();
    if (pos_ != text_.size())
      fail(Errc::domain_violation, "trailing input in field polynomial: '" + text_.substr(pos_) + "'");
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Poly2 expr() {
    Poly2 r;
    bool neg = eat('-');
    r = term() * (neg ? -1.0 : 1.0);
    while (true) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r + term() * -1.0;
      else
        break;
    }
    return r;
  }

  Poly2 term() {
    Poly2 r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }

  Poly2 factor() {
    Poly2 base = atom();
    while (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      int e = read_int();
      if (neg) fail(Errc::domain_violation, "negative exponents are not allowed in field polynomials");
      Poly2 p = Poly2::constant(1.0);
      for (int t = 0; t < e; ++t) p = p * base;
      base = p;
    }
    return base;
  }

  Poly2 atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      eat('(');
      Poly2 p = expr();
      if (!eat(')')) fail(Errc::domain_violation, "missing ')' in field polynomial");
      return p;
    }
    if (c == 'x') {
      ++pos_;
      Poly2 p;
      p.add_term(1, 0, 1.0);
      return p;
    }
    if (c == 'y') {
      ++pos_;
      Poly2 p;
      p.add_term(0, 1, 1.0);
      return p;
    }
    // number
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    if (pos_ == start) fail(Errc::domain_violation, "cannot read field polynomial near '" + text_.substr(pos_) + "'");
    return Poly2::constant(std::strtod(text_.substr(start, pos_ - start).c_str(), nullptr));
  }

  int read_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail(Errc::domain_violation, "expected integer exponent in field polynomial");
    return std::atoi(text_.substr(start, pos_ - start).c_str());
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Concrete polynomial B(x,y) and phi(x,y) on a rectangle, with B > 0
// checked by sampling (margin 0.1).
struct FieldModel {
  Poly2 b;
  Poly2 phi;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;

  static FieldModel from_polys(Poly2 b, Poly2 phi, double x0, double x1, double y0, double y1) {
    FieldModel m;
    m.b = std::move(b);
    m.phi = std::move(phi);
    m.x0 = x0;
    m.x1 = x1;
    m.y0 = y0;
    m.y1 = y1;
    m.validate();
    return m;
  }

  // Plain-text key=value format:
  //   B = 2 + 0.1*x + 0.02*y^2
  //   phi = 0.05*x*y
  //   domain = -1 1 -1 1
  static FieldModel parse(std::istream& in) {
    FieldModel m;
    bool saw_b = false;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      if (key == "B") {
        m.b = detail::PolyParser(value).parse();
        saw_b = true;
      } else if (key == "phi") {
        m.phi = detail::PolyParser(value).parse();
      } else if (key == "domain") {
        std::istringstream ds(value);
        if (!(ds >> m.x0 >> m.x1 >> m.y0 >> m.y1))
          fail(Errc::domain_violation, "domain line needs four numbers: x0 x1 y0 y1");
      } else {
        fail(Errc::domain_violation, "unknown field-model key '" + key + "'");
      }
    }
    if (!saw_b) fail(Errc::domain_violation, "field model must define B");
    m.validate();
    return m;
  }

  static FieldModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::domain_violation, "cannot open field model '" + path + "'");
    return parse(in);
  }

  void validate() const {
    if (b.total_degree() > 4 || phi.total_degree() > 4)
      fail(Errc::domain_violation, "field polynomials must have total degree <= 4");
    if (!(x0 < x1 && y0 < y1)) fail(Errc::domain_violation, "empty field-model domain");
    const int grid = 33;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        double x = x0 + (x1 - x0) * i / (grid - 1);
        double y = y0 + (y1 - y0) * j / (grid - 1);
        if (b.eval(x, y) < 0.1)
          fail(Errc::domain_violation, "B(x,y) falls below the 0.1 positivity margin on the domain");
      }
  }

  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct EvalPoint {
  double x = 0, y = 0, vx = 0, vy = 0;
  double hbar = 0.1, eps = 1.0;
  std::optional<double> c1, c2, mu_z;
};

inline Complex to_complex(const Coeff& c) {
  return Complex(static_cast<double>(c.re), static_cast<double>(c.im));
}

// Substitutes numeric values into a series: generators evaluate through
// exact polynomial differentiation of the model fields.
inline Complex eval_series(const Series& s, const FieldModel& m, const EvalPoint& p) {
  if (!m.contains(p.x, p.y)) fail(Errc::domain_violation, "evaluation point outside the model domain");
  if (p.hbar <= 0 || p.eps <= 0) fail(Errc::domain_violation, "hbar and eps values must be positive");
  double bval = m.b.eval(p.x, p.y);
  Complex total(0, 0);
  for (const auto& t : s.terms()) {
    Complex v = to_complex(t.coeff);
    v *= std::pow(p.hbar, t.hbar);
    v *= std::pow(p.eps, t.eps);
    if (t.bhalf != 0) v *= std::pow(bval, 0.5 * t.bhalf);
    for (const auto& gp : t.gens) {
      double g = 0;
      switch (gp.g.field) {
        case Field::b: g = m.b.derivative(gp.g.d).eval(p.x, p.y); break;
        case Field::phi: g = m.phi.derivative(gp.g.d).eval(p.x, p.y); break;
        case Field::c1:
          if (!p.c1) fail(Errc::domain_violation, "no numeric value assigned to c1");
          g = *p.c1;
          break;
        case Field::c2:
          if (!p.c2) fail(Errc::domain_violation, "no numeric value assigned to c2");
          g = *p.c2;
          break;
        case Field::mu_z:
          if (!p.mu_z) fail(Errc::domain_violation, "no numeric value assigned to mu_z");
          g = *p.mu_z;
          break;
      }
      v *= std::pow(g, gp.pow);
    }
    v *= std::pow(p.x, t.px) * std::pow(p.y, t.py);
    v *= std::pow(p.vx, t.kx) * std::pow(p.vy, t.ky);
    total += v;
  }
  return total;
}

// Scalar-only overload for guiding-center word series.
inline Complex eval_series(const WordSeries& s, const FieldModel& m, const EvalPoint& p) {
  std::vector<Term> scalars;
  for (const auto& t : s.terms()) {
    if (!t.word.empty()) fail(Errc::word_present, "word series with gyration letters cannot be evaluated");
    scalars.push_back(t.scalar);
  }
  return eval_series(Series::from_terms(Chart::guiding_center, wide_truncation(), scalars), m, p);
}

// Complex polynomial in the particle phase-space variables, with exact
// derivatives: the closed-form functions the truncated product operator is
// applied to directly.
class PhasePoly {
 public:
  PhasePoly() = default;

  static PhasePoly monomial(int px, int py, int kx, int ky, Complex c = Complex(1, 0)) {
    PhasePoly p;
    p.add_term({px, py, kx, ky}, c);
    return p;
  }

  static PhasePoly from_series(const Series& s) {
    PhasePoly p;
    for (const auto& t : s.terms()) {
      if (t.bhalf != 0 || !t.gens.empty() || t.hbar != 0 || t.eps != 0)
        fail(Errc::domain_violation, "phase-space polynomial must be free of fields and grading");
      p.add_term({t.px, t.py, t.kx, t.ky}, to_complex(t.coeff));
    }
    return p;
  }

  void add_term(std::array<int, 4> k, Complex c) {
    if (c == Complex(0, 0)) return;
    coeffs_[k] += c;
    if (coeffs_[k] == Complex(0, 0)) coeffs_.erase(k);
  }

  bool empty() const { return coeffs_.empty(); }

  PhasePoly derivative(int slot) const {  // 0:x 1:y 2:vx 3:vy
    PhasePoly d;
    for (const auto& [k, c] : coeffs_) {
      if (k[static_cast<std::size_t>(slot)] == 0) continue;
      auto kk = k;
      kk[static_cast<std::size_t>(slot)] -= 1;
      d.add_term(kk, c * static_cast<double>(k[static_cast<std::size_t>(slot)]));
    }
    return d;
  }

  PhasePoly derivative(const Deriv& dpos, const Deriv& dvel) const {
    PhasePoly r = *this;
    for (int t = 0; t < dpos.x; ++t) r = r.derivative(0);
    for (int t = 0; t < dpos.y; ++t) r = r.derivative(1);
    for (int t = 0; t < dvel.x; ++t) r = r.derivative(2);
    for (int t = 0; t < dvel.y; ++t) r = r.derivative(3);
    return r;
  }

  Complex eval(const EvalPoint& p) const {
    Complex r(0, 0);
    for (const auto& [k, c] : coeffs_)
      r += c * std::pow(p.x, k[0]) * std::pow(p.y, k[1]) * std::pow(p.vx, k[2]) *
           std::pow(p.vy, k[3]);
    return r;
  }

 private:
  std::map<std::array<int, 4>, Complex> coeffs_;
};

// Direct numeric application of the truncated product operator to
// closed-form polynomials: prefactors from the model, all partials exact.
inline Complex numeric_star(const PhasePoly& fa, const PhasePoly& fb, const FieldModel& m,
                            const EvalPoint& p, const Truncation& trunc,
                            FieldMode mode = FieldMode::general) {
  if (!m.contains(p.x, p.y)) fail(Errc::domain_violation, "evaluation point outside the model domain");
  const POperator& op = cached_p(trunc.max_hbar, mode);
  Complex total(0, 0);
  for (const auto& blk : op.blocks) {
    if (blk.eps < trunc.min_eps) continue;
    Complex grade = std::pow(p.hbar, blk.hbar) * std::pow(p.eps, blk.eps);
    for (const auto& t : blk.terms) {
      PhasePoly da = fa.derivative(t.d_left_pos, t.d_left_vel);
      if (da.empty()) continue;
      PhasePoly db = fb.derivative(t.d_right_pos, t.d_right_vel);
      if (db.empty()) continue;
      Complex pre = eval_series(t.prefactor, m, p);
      total += grade * to_complex(t.coeff) * pre * da.eval(p) * db.eval(p);
    }
  }
  return total;
}

struct OracleReport {
  unsigned long long seed = 0;
  int points = 0;
  std::size_t pairs = 0;
  double tol = 1e-9;
  double abs_floor = 1e-12;
  double max_rel = 0.0;
  double max_abs = 0.0;
  bool pass = false;
};

// Compares eval(star(a,b)) against the direct numeric operator application
// on seeded pseudo-random points.
inline OracleReport compare_symbolic_numeric(const std::vector<std::pair<Series, Series>>& pairs,
                                             const FieldModel& m, int points,
                                             unsigned long long seed, double tol,
                                             const Truncation& trunc) {
  if (tol <= 0) fail(Errc::domain_error, "tolerance must be positive");
  OracleReport rep;
  rep.seed = seed;
  rep.points = points;
  rep.pairs = pairs.size();
  rep.tol = tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(m.x0, m.x1), uy(m.y0, m.y1), uv(-1.0, 1.0),
      uh(0.05, 0.4), ue(0.5, 1.5);
  std::vector<EvalPoint> pts;
  pts.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    EvalPoint p;
    p.x = ux(rng);
    p.y = uy(rng);
    p.vx = uv(rng);
    p.vy = uv(rng);
    p.hbar = uh(rng);
    p.eps = ue(rng);
    pts.push_back(p);
  }
  rep.pass = true;
  for (const auto& [a, b] : pairs) {
    Series s = star(a, b, trunc);
    PhasePoly pa = PhasePoly::from_series(a);
    PhasePoly pb = PhasePoly::from_series(b);
    for (const auto& p : pts) {
      Complex z1 = eval_series(s, m, p);
      Complex z2 = numeric_star(pa, pb, m, p, trunc);
      double diff = std::abs(z1 - z2);
      double mag = std::max(std::abs(z1), std::abs(z2));
      rep.max_abs = std::max(rep.max_abs, diff);
      double rel = diff / std::max(mag, rep.abs_floor / tol);
      rep.max_rel = std::max(rep.max_rel, rel);
      if (diff > std::max(tol * mag, rep.abs_floor)) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace giweyl
