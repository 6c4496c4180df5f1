#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "giweyl/series.hpp"

namespace giweyl {

// ---------------------------------------------------------------------------
// Expression language:
//   series := term (('+'|'-') term)* ;
//   term   := factor ('*' factor)* ;
//   factor := rational | 'i' | 'hbar' | 'eps' | var | field
//           | '(' series ')' | factor '^' integer ;
//   var    := 'x'|'y'|'v_x'|'v_y'|'X'|'Y'|'V_x'|'V_y' ;
//   field  := 'B' | 'phi' | 'E_x' | 'E_y' | 'c1' | 'c2' | 'mu_z'
//           | 'd[' axes ']' ('B'|'phi') ;
//   axes   := ('x'|'y') (',' ('x'|'y'))* ;
// Negative exponents are permitted only on B and eps. B additionally accepts
// a parenthesized half-integer exponent B^(p/2), which the renderer emits for
// odd half powers; plain integer exponents cover everything the grammar above
// produces.

namespace textdetail {

enum class Tok { integer, ident, plus, minus, times, caret, lparen, rparen, lbrack, rbrack, comma, slash, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t pos = 0;  // 1-based
};

inline std::vector<Token> lex(const std::string& in) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j]))) ++j;
      out.push_back({Tok::integer, in.substr(i, j - i), pos});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < in.size() &&
             (std::isalnum(static_cast<unsigned char>(in[j])) || in[j] == '_'))
        ++j;
      out.push_back({Tok::ident, in.substr(i, j - i), pos});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::times; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case '[': k = Tok::lbrack; break;
      case ']': k = Tok::rbrack; break;
      case ',': k = Tok::comma; break;
      case '/': k = Tok::slash; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({k, std::string(1, c), pos});
    ++i;
  }
  out.push_back({Tok::end, "", in.size() + 1});
  return out;
}

// Raw factor: a term list plus enough tagging to validate exponent rules.
struct Raw {
  enum class Kind { b_power, eps, general };
  Kind kind = Kind::general;
  std::vector<Term> terms;
};

struct VarUse {
  bool particle = false;
  bool guiding = false;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Series parse() {
    std::vector<Term> terms = series();
    expect(Tok::end, "end of input");
    if (use_.particle && use_.guiding)
      fail(Errc::chart_mixing, "expression mixes particle and guiding-center variables");
    Chart chart = use_.guiding ? Chart::guiding_center : Chart::particle;
    return Series::from_terms(chart, wide_truncation(), std::move(terms));
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  void advance() { ++i_; }
  bool accept(Tok k) {
    if (cur().kind == k) {
      advance();
      return true;
    }
    return false;
  }
  void expect(Tok k, const std::string& what) {
    if (cur().kind != k)
      throw ParseError("expected " + what + ", found '" + cur().text + "'", cur().pos);
    advance();
  }

  std::vector<Term> series() {
    std::vector<Term> out;
    bool neg = false;
    if (accept(Tok::minus))
      neg = true;
    else
      accept(Tok::plus);
    append_signed(out, term(), neg);
    while (cur().kind == Tok::plus || cur().kind == Tok::minus) {
      bool minus = cur().kind == Tok::minus;
      advance();
      append_signed(out, term(), minus);
    }
    return out;
  }

  static void append_signed(std::vector<Term>& out, std::vector<Term> terms, bool neg) {
    for (auto& t : terms) {
      if (neg) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
  }

  static std::vector<Term> raw_mul(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a)
      for (const auto& tb : b) out.push_back(term_mul(ta, tb));
    return out;
  }

  std::vector<Term> term() {
    std::vector<Term> out = factor();
    while (accept(Tok::times)) out = raw_mul(out, factor());
    return out;
  }

  std::vector<Term> factor() {
    Raw r = primary();
    while (cur().kind == Tok::caret) {
      std::size_t caret_pos = cur().pos;
      advance();
      r = apply_exponent(std::move(r), caret_pos);
    }
    return std::move(r.terms);
  }

  Raw apply_exponent(Raw base, std::size_t caret_pos) {
    // B accepts B^(p/2) with an odd p; everything else takes a plain integer.
    if (cur().kind == Tok::lparen && base.kind == Raw::Kind::b_power) {
      advance();
      bool neg = accept(Tok::minus);
      long long num = read_integer("exponent numerator");
      expect(Tok::slash, "'/'");
      long long den = read_integer("exponent denominator");
      expect(Tok::rparen, "')'");
      if (den != 2) throw ParseError("half-integer exponents must have denominator 2", caret_pos);
      if (neg) num = -num;
      Raw out;
      out.kind = Raw::Kind::b_power;
      Term t;
      t.bhalf = static_cast<int>(num);
      out.terms = {t};
      return out;
    }
    bool neg = accept(Tok::minus);
    long long e = read_integer("integer exponent");
    if (neg) {
      if (base.kind == Raw::Kind::b_power) {
        Raw out;
        out.kind = Raw::Kind::b_power;
        Term t;
        t.bhalf = static_cast<int>(-2 * e);
        out.terms = {t};
        return out;
      }
      if (base.kind == Raw::Kind::eps) {
        Raw out;
        out.kind = Raw::Kind::eps;
        Term t;
        t.eps = static_cast<int>(-e);
        out.terms = {t};
        return out;
      }
      fail(Errc::negative_power, "negative exponents are permitted only on B and eps");
    }
    if (base.kind == Raw::Kind::b_power) {
      Raw out;
      out.kind = Raw::Kind::b_power;
      Term t;
      t.bhalf = static_cast<int>(2 * e);
      out.terms = {t};
      return out;
    }
    if (base.kind == Raw::Kind::eps) {
      Raw out;
      out.kind = Raw::Kind::eps;
      Term t;
      t.eps = static_cast<int>(e);
      out.terms = {t};
      return out;
    }
    Raw out;
    out.kind = Raw::Kind::general;
    out.terms = {Term{}};
    for (long long t = 0; t < e; ++t) out.terms = raw_mul(out.terms, base.terms);
    return out;
  }

  long long read_integer(const std::string& what) {
    if (cur().kind != Tok::integer)
      throw ParseError("expected " + what + ", found '" + cur().text + "'", cur().pos);
    long long v = std::stoll(cur().text);
    advance();
    return v;
  }

  static Raw single(Term t, Raw::Kind kind = Raw::Kind::general) {
    Raw r;
    r.kind = kind;
    r.terms = {std::move(t)};
    return r;
  }

  Raw primary() {
    const Token tok = cur();
    switch (tok.kind) {
      case Tok::integer: {
        advance();
        Int num(tok.text);
        if (accept(Tok::slash)) {
          if (cur().kind != Tok::integer)
            throw ParseError("expected denominator after '/'", cur().pos);
          Int den(cur().text);
          advance();
          if (den == 0) throw ParseError("zero denominator", tok.pos);
          Term t;
          t.coeff = Coeff(rat_int(num, den));
          return single(std::move(t));
        }
        Term t;
        t.coeff = Coeff(Rat(num));
        return single(std::move(t));
      }
      case Tok::lparen: {
        advance();
        std::vector<Term> inner = series();
        expect(Tok::rparen, "')'");
        Raw r;
        r.terms = std::move(inner);
        return r;
      }
      case Tok::ident: {
        advance();
        return ident_primary(tok);
      }
      default:
        throw ParseError("expected a factor, found '" + tok.text + "'", tok.pos);
    }
  }

  Raw ident_primary(const Token& tok) {
    const std::string& s = tok.text;
    Term t;
    if (s == "i") {
      t.coeff = Coeff::i();
      return single(std::move(t));
    }
    if (s == "hbar") {
      t.hbar = 1;
      return single(std::move(t));
    }
    if (s == "eps") {
      t.eps = 1;
      return single(std::move(t), Raw::Kind::eps);
    }
    if (s == "B") {
      t.bhalf = 2;
      return single(std::move(t), Raw::Kind::b_power);
    }
    if (s == "phi") {
      t.gens = {GenPow{gen_dphi(0, 0), 1}};
      return single(std::move(t));
    }
    if (s == "E_x" || s == "E_y") {
      t.coeff = Coeff(Rat(-1));
      t.gens = {GenPow{gen_dphi(s == "E_x" ? 1 : 0, s == "E_x" ? 0 : 1), 1}};
      return single(std::move(t));
    }
    if (s == "c1") {
      t.gens = {GenPow{gen_const(Field::c1), 1}};
      return single(std::move(t));
    }
    if (s == "c2") {
      t.gens = {GenPow{gen_const(Field::c2), 1}};
      return single(std::move(t));
    }
    if (s == "mu_z") {
      t.gens = {GenPow{gen_const(Field::mu_z), 1}};
      return single(std::move(t));
    }
    if (s == "d") {
      expect(Tok::lbrack, "'[' after d");
      Deriv d{};
      while (true) {
        if (cur().kind != Tok::ident || (cur().text != "x" && cur().text != "y"))
          throw ParseError("expected axis 'x' or 'y'", cur().pos);
        if (cur().text == "x")
          d.x += 1;
        else
          d.y += 1;
        advance();
        if (!accept(Tok::comma)) break;
      }
      expect(Tok::rbrack, "']'");
      if (cur().kind != Tok::ident || (cur().text != "B" && cur().text != "phi"))
        throw ParseError("expected 'B' or 'phi' after d[...]", cur().pos);
      bool is_b = cur().text == "B";
      advance();
      t.gens = {GenPow{is_b ? gen_db(d.x, d.y) : gen_dphi(d.x, d.y), 1}};
      return single(std::move(t));
    }
    if (s == "x" || s == "y") {
      use_.particle = true;
      (s == "x" ? t.px : t.py) = 1;
      return single(std::move(t));
    }
    if (s == "v_x" || s == "v_y") {
      use_.particle = true;
      (s == "v_x" ? t.kx : t.ky) = 1;
      return single(std::move(t));
    }
    if (s == "X" || s == "Y") {
      use_.guiding = true;
      (s == "X" ? t.px : t.py) = 1;
      return single(std::move(t));
    }
    if (s == "V_x" || s == "V_y") {
      use_.guiding = true;
      (s == "V_x" ? t.kx : t.ky) = 1;
      return single(std::move(t));
    }
    throw ParseError("unknown symbol '" + s + "'", tok.pos);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  VarUse use_;
};

inline std::string rat_str(const Rat& r) {
  Int num = numerator(r);
  Int den = denominator(r);
  if (den == 1) return num.str();
  return "(" + num.str() + "/" + den.str() + ")";
}

}  // namespace textdetail

inline Series parse(const std::string& text) { return textdetail::Parser(text).parse(); }

enum class RenderStyle { canonical, efield };

inline std::string render(const Series& s, RenderStyle style = RenderStyle::canonical) {
  if (s.is_zero()) return "0";
  const bool gc = s.chart() == Chart::guiding_center;
  std::string out;
  bool first = true;
  for (const auto& t : s.terms()) {
    Coeff c = t.coeff;
    // efield style rewrites -dphi_x -> E_x where the term is linear in it
    std::vector<std::pair<std::string, int>> gen_pieces;
    for (const auto& gp : t.gens) {
      std::string name;
      bool efield_swap = style == RenderStyle::efield && gp.g.field == Field::phi &&
                         gp.pow == 1 && gp.g.d.order() == 1;
      if (efield_swap) {
        name = gp.g.d.x == 1 ? "E_x" : "E_y";
        c = -c;
      } else {
        switch (gp.g.field) {
          case Field::b:
          case Field::phi: {
            if (gp.g.field == Field::phi && gp.g.d.none()) {
              name = "phi";
              break;
            }
            name = "d[";
            bool first_axis = true;
            for (int k = 0; k < gp.g.d.x; ++k) {
              if (!first_axis) name += ",";
              name += "x";
              first_axis = false;
            }
            for (int k = 0; k < gp.g.d.y; ++k) {
              if (!first_axis) name += ",";
              name += "y";
              first_axis = false;
            }
            name += gp.g.field == Field::b ? "]B" : "]phi";
            break;
          }
          case Field::c1: name = "c1"; break;
          case Field::c2: name = "c2"; break;
          case Field::mu_z: name = "mu_z"; break;
        }
      }
      gen_pieces.emplace_back(name, gp.pow);
    }

    bool neg = (c.re < 0) || (c.re == 0 && c.im < 0);
    if (neg) c = -c;

    std::vector<std::string> pieces;
    if (c.im == 0) {
      if (c.re != 1) pieces.push_back(textdetail::rat_str(c.re));
    } else if (c.re == 0) {
      if (c.im != 1) pieces.push_back(textdetail::rat_str(c.im));
      pieces.push_back("i");
    } else {
      std::string inner = textdetail::rat_str(c.re);
      Rat im = c.im;
      if (im < 0) {
        inner += "-";
        im = -im;
      } else {
        inner += "+";
      }
      inner += textdetail::rat_str(im) + "*i";
      pieces.push_back("(" + inner + ")");
    }
    if (t.hbar != 0) pieces.push_back(t.hbar == 1 ? "hbar" : "hbar^" + std::to_string(t.hbar));
    if (t.eps != 0) pieces.push_back(t.eps == 1 ? "eps" : "eps^" + std::to_string(t.eps));
    if (t.bhalf != 0) {
      if (t.bhalf % 2 == 0) {
        int k = t.bhalf / 2;
        pieces.push_back(k == 1 ? "B" : "B^" + std::to_string(k));
      } else {
        pieces.push_back("B^(" + std::to_string(t.bhalf) + "/2)");
      }
    }
    for (const auto& [name, p] : gen_pieces)
      pieces.push_back(p == 1 ? name : name + "^" + std::to_string(p));
    auto push_var = [&](int e, const std::string& name) {
      if (e == 0) return;
      pieces.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    };
    push_var(t.px, gc ? "X" : "x");
    push_var(t.py, gc ? "Y" : "y");
    push_var(t.kx, gc ? "V_x" : "v_x");
    push_var(t.ky, gc ? "V_y" : "v_y");
    if (pieces.empty()) pieces.push_back(textdetail::rat_str(c.re));

    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (k) out += "*";
      out += pieces[k];
    }
  }
  return out;
}

// Machine-readable exact form: an array of term objects, no floats anywhere.
inline nlohmann::ordered_json to_structured(const Series& s) {
  auto int_json = [](const Int& v) -> nlohmann::ordered_json {
    if (v >= Int(std::numeric_limits<long long>::min()) &&
        v <= Int(std::numeric_limits<long long>::max()))
      return static_cast<long long>(v);
    return v.str();
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : s.terms()) {
    nlohmann::ordered_json term;
    term["coeff"] = {{"re_num", int_json(numerator(t.coeff.re))},
                     {"re_den", int_json(denominator(t.coeff.re))},
                     {"im_num", int_json(numerator(t.coeff.im))},
                     {"im_den", int_json(denominator(t.coeff.im))}};
    term["hbar"] = t.hbar;
    term["eps"] = t.eps;
    term["bhalf"] = t.bhalf;
    nlohmann::ordered_json gens = nlohmann::ordered_json::array();
    for (const auto& gp : t.gens) {
      nlohmann::ordered_json g;
      switch (gp.g.field) {
        case Field::b: g["field"] = "B"; break;
        case Field::phi: g["field"] = "phi"; break;
        case Field::c1: g["field"] = "c1"; break;
        case Field::c2: g["field"] = "c2"; break;
        case Field::mu_z: g["field"] = "mu_z"; break;
      }
      nlohmann::ordered_json axes = nlohmann::ordered_json::array();
      for (int k = 0; k < gp.g.d.x; ++k) axes.push_back("x");
      for (int k = 0; k < gp.g.d.y; ++k) axes.push_back("y");
      g["d"] = axes;
      g["pow"] = gp.pow;
      gens.push_back(g);
    }
    term["gens"] = gens;
    term["p"] = {t.px, t.py};
    term["v"] = {t.kx, t.ky};
    arr.push_back(term);
  }
  return arr;
}

}  // namespace giweyl
