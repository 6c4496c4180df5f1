#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "giweyl/field_model.hpp"

#include "helpers.hpp"

using namespace giweyl;
using namespace giweyl::testing;

namespace {

FieldModel inhomogeneous_model() {
  std::istringstream in("B = 2 + 0.1*x + 0.02*y^2\nphi = 0.05*x*y\ndomain = -1 1 -1 1\n");
  return FieldModel::parse(in);
}

FieldModel constant_model() {
  std::istringstream in("B = 2\ndomain = -1 1 -1 1\n");
  return FieldModel::parse(in);
}

}  // namespace

TEST_CASE("field model parsing and validation") {
  FieldModel m = inhomogeneous_model();
  CHECK(m.b.eval(0, 0) == Catch::Approx(2.0));
  CHECK(m.b.eval(1, 1) == Catch::Approx(2.12));
  CHECK(m.phi.eval(0.5, -0.5) == Catch::Approx(-0.0125));
  CHECK(m.b.derivative(Axis::x).eval(0.3, 0.4) == Catch::Approx(0.1));
  CHECK(m.b.derivative(Deriv{0, 2}).eval(0, 0) == Catch::Approx(0.04));

  std::istringstream bad("B = x\ndomain = -1 1 -1 1\n");
  CHECK_THROWS_AS(FieldModel::parse(bad), Error);  // B crosses the positivity margin

  std::istringstream deg("B = 2 + x^5\ndomain = -1 1 -1 1\n");
  CHECK_THROWS_AS(FieldModel::parse(deg), Error);  // degree cap

  std::istringstream nob("phi = x\ndomain = -1 1 -1 1\n");
  CHECK_THROWS_AS(FieldModel::parse(nob), Error);
}

TEST_CASE("series evaluation on concrete points") {
  FieldModel m = constant_model();  // B = 2 everywhere, so B(p) = 4 needs its own model
  std::istringstream in4("B = 4\ndomain = -1 1 -1 1\n");
  FieldModel m4 = FieldModel::parse(in4);
  EvalPoint p;
  p.x = 0.25;
  p.y = -0.5;
  p.vx = 3.0;
  p.vy = 0.5;
  p.hbar = 0.1;
  p.eps = 0.5;

  CHECK(eval_series(mono(Chart::particle, T().b(1)), m4, p).real() == Catch::Approx(2.0));
  CHECK(eval_series(vx_mono(), m4, p).real() == Catch::Approx(3.0));

  // star(v_x, v_y) evaluates to v_x v_y + i hbar B / (2 eps)
  Truncation tr(2, -2, 3);
  Series s = star(truncate_to(vx_mono(), tr), truncate_to(vy_mono(), tr), tr);
  Complex z = eval_series(s, constant_model(), p);
  CHECK(z.real() == Catch::Approx(1.5));
  CHECK(z.imag() == Catch::Approx(0.1 * 2.0 / (2 * 0.5)));
}

TEST_CASE("series evaluation is linear") {
  FieldModel m = inhomogeneous_model();
  EvalPoint p;
  p.x = 0.3;
  p.y = -0.7;
  p.vx = 0.4;
  p.vy = -1.1;
  std::mt19937 rng(5);
  for (int round = 0; round < 10; ++round) {
    Series a = random_series(rng, 5);
    Series b = random_series(rng, 5);
    Complex za = eval_series(a, m, p);
    Complex zb = eval_series(b, m, p);
    Complex zab = eval_series(add(a, b), m, p);
    CHECK(std::abs(zab - (za + zb)) < 1e-12 * (1 + std::abs(za) + std::abs(zb)));
  }
}

TEST_CASE("derivative machinery agrees with central finite differences") {
  FieldModel m = inhomogeneous_model();
  const double step = 1e-4;
  std::vector<Series> gens = {mono(Chart::particle, T().b(1)),
                              mono(Chart::particle, T().b(-3)),
                              mono(Chart::particle, T().db(1, 0)),
                              mono(Chart::particle, T().dphi(0, 1)),
                              mono(Chart::particle, T().dphi(0, 0)),
                              mono(Chart::particle, T().db(1, 1).b(-2))};
  EvalPoint p;
  p.x = 0.2;
  p.y = 0.1;
  p.vx = 0.3;
  p.vy = -0.4;
  for (const auto& g : gens) {
    for (Axis ax : {Axis::x, Axis::y}) {
      Complex sym = eval_series(partial_pos(g, ax), m, p);
      EvalPoint lo = p, hi = p;
      (ax == Axis::x ? lo.x : lo.y) -= step;
      (ax == Axis::x ? hi.x : hi.y) += step;
      Complex fd = (eval_series(g, m, hi) - eval_series(g, m, lo)) / (2 * step);
      CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("numeric star examples") {
  FieldModel m = inhomogeneous_model();
  EvalPoint p;
  p.x = 0.4;
  p.y = -0.2;
  p.vx = 0.7;
  p.vy = 1.3;
  p.hbar = 0.15;
  p.eps = 0.8;
  Truncation tr(2, -2, 3);

  PhasePoly one = PhasePoly::monomial(0, 0, 0, 0);
  PhasePoly f = PhasePoly::monomial(1, 0, 2, 0, Complex(2, 0));
  CHECK(std::abs(numeric_star(one, f, m, p, tr) - f.eval(p)) < 1e-14);

  PhasePoly vx = PhasePoly::monomial(0, 0, 1, 0);
  PhasePoly vy = PhasePoly::monomial(0, 0, 0, 1);
  Complex got = numeric_star(vx, vy, m, p, tr);
  Complex want(p.vx * p.vy, p.hbar * m.b.eval(p.x, p.y) / (2 * p.eps));
  CHECK(std::abs(got - want) < 1e-14);

  // constant field: x^2 * v_x^2 follows the ordinary closed-form product
  FieldModel mc = constant_model();
  PhasePoly x2 = PhasePoly::monomial(2, 0, 0, 0);
  PhasePoly vx2 = PhasePoly::monomial(0, 0, 2, 0);
  Complex got2 = numeric_star(x2, vx2, mc, p, tr);
  Complex want2 = Complex(p.x * p.x * p.vx * p.vx - 0.0, 0) +
                  Complex(0, 2 * p.hbar * p.x * p.vx) + Complex(-p.hbar * p.hbar / 2, 0);
  CHECK(std::abs(got2 - want2) < 1e-14);
}

TEST_CASE("symbolic and numeric star products agree on seeded random points") {
  Truncation tr(2, -2, 3);
  std::vector<std::pair<Series, Series>> pairs;
  auto monos = phase_monomials(2, tr);
  for (const auto& a : monos)
    for (const auto& b : monos) pairs.emplace_back(a, b);

  for (const FieldModel& m : {inhomogeneous_model(), constant_model()}) {
    OracleReport rep = compare_symbolic_numeric(pairs, m, 25, 42, 1e-9, tr);
    INFO("seed " << rep.seed << " max-rel " << rep.max_rel);
    CHECK(rep.pass);
    CHECK(rep.seed == 42);
  }
}

TEST_CASE("oracle stays exact towards small eps") {
  Truncation tr(2, -2, 3);
  FieldModel m = inhomogeneous_model();
  Series a = mono(Chart::particle, T().vel(1, 0), tr);
  Series b = mono(Chart::particle, T().vel(0, 1), tr);
  Series s = star(a, b, tr);
  EvalPoint p;
  p.x = 0.1;
  p.y = 0.2;
  p.vx = 0.5;
  p.vy = -0.3;
  p.hbar = 0.1;
  p.eps = 1e-3;
  Complex z1 = eval_series(s, m, p);
  Complex z2 = numeric_star(PhasePoly::monomial(0, 0, 1, 0), PhasePoly::monomial(0, 0, 0, 1), m, p, tr);
  CHECK(std::abs(z1 - z2) <= 1e-9 * std::max(std::abs(z1), std::abs(z2)));
}

TEST_CASE("word series evaluation rejects gyration letters") {
  FieldModel m = constant_model();
  EvalPoint p;
  Truncation tr(2, -2, 2);
  WordSeries with_word =
      WordSeries::from_terms(tr, {WordTerm{T().t, Word("xy")}});
  CHECK_THROWS_AS(eval_series(with_word, m, p), Error);
  WordSeries scalar = WordSeries::from_terms(tr, {WordTerm{T(3).b(2).t, Word()}});
  CHECK(eval_series(scalar, m, p).real() == Catch::Approx(6.0));
}

TEST_CASE("unassigned constants are an error, assigned ones evaluate") {
  FieldModel m = constant_model();
  EvalPoint p;
  Series with_c1 = mono(Chart::particle, T(2).cst(Field::c1));
  CHECK_THROWS_AS(eval_series(with_c1, m, p), Error);
  p.c1 = 0.5;
  CHECK(eval_series(with_c1, m, p).real() == Catch::Approx(1.0));
}

TEST_CASE("points outside the domain are rejected") {
  FieldModel m = constant_model();
  EvalPoint p;
  p.x = 2.0;
  CHECK_THROWS_AS(eval_series(vx_mono(), m, p), Error);
}
