#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "giweyl/star.hpp"
#include "giweyl/text.hpp"

#include "helpers.hpp"

using namespace giweyl;
using namespace giweyl::testing;

TEST_CASE("parse: spec'd examples") {
  Series s = parse("v_x^2 + v_y^2");
  CHECK(s == Series::from_terms(Chart::particle, wide_truncation(),
                                {T().vel(2, 0), T().vel(0, 2)}));

  Series t = parse("(1/2)*B^-1*d[x]B*v_y");
  CHECK(t == Series::from_term(Chart::particle, wide_truncation(),
                               T(1, 2).b(-2).db(1, 0).vel(0, 1)));

  Series e = parse("E_x");
  CHECK(e == Series::from_term(Chart::particle, wide_truncation(), T(-1).dphi(1, 0)));
}

TEST_CASE("parse: guiding-center variables, constants, derivatives") {
  Series s = parse("mu_z*B + c1*V_x*V_y - c2*d[x,y]phi*X");
  CHECK(s.chart() == Chart::guiding_center);
  CHECK(s == Series::from_terms(Chart::guiding_center, wide_truncation(),
                                {T().b(2).cst(Field::mu_z), T().cst(Field::c1).vel(1, 1),
                                 T(-1).cst(Field::c2).dphi(1, 1).pos(1, 0)}));

  CHECK(parse("i*hbar*eps^-1") ==
        Series::from_term(Chart::particle, wide_truncation(), T().ic(1).h(1).e(-1)));

  CHECK(parse("d[x,x,y]B^2") == Series::from_term(Chart::particle, wide_truncation(),
                                                  T().db(2, 1, 2)));

  CHECK(parse("B^(1/2)") == Series::from_term(Chart::particle, wide_truncation(), T().b(1)));
  CHECK(parse("B^(-3/2)") == Series::from_term(Chart::particle, wide_truncation(), T().b(-3)));
}

TEST_CASE("parse errors carry positions and kinds") {
  CHECK_THROWS_AS(parse("v_x + "), ParseError);
  CHECK_THROWS_AS(parse("2*"), ParseError);
  CHECK_THROWS_AS(parse("bogus"), ParseError);
  try {
    parse("v_x ? v_y");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }

  try {
    parse("v_x*X");
    FAIL("chart mixing accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::chart_mixing);
  }

  try {
    parse("phi^-1");
    FAIL("negative power accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_power);
  }
  CHECK_THROWS_AS(parse("v_x^-2"), Error);
  CHECK_THROWS_AS(parse("hbar^-1"), Error);
  CHECK_THROWS_AS(parse("(v_x+1)^-1"), Error);
}

TEST_CASE("render: spec'd examples") {
  CHECK(render(parse("v_x*v_y")) == "v_x*v_y");
  CHECK(render(Series::zero(Chart::particle, wide_truncation())) == "0");

  Truncation tr(2, -2, 3);
  Series s = star(truncate_to(parse("v_x"), tr), truncate_to(parse("v_y"), tr), tr);
  CHECK(render(s) == "v_x*v_y + (1/2)*i*hbar*eps^-1*B");
}

TEST_CASE("render: coefficients, signs, half powers") {
  CHECK(render(parse("-v_x")) == "-v_x");
  // canonical term order sorts on the exponent tuple, so the y term leads
  CHECK(render(parse("x - 2*y")) == "-2*y + x");
  CHECK(render(parse("(2/3)*i*x")) == "(2/3)*i*x");
  CHECK(render(parse("(1+1/2*i)*x")) == "(1+(1/2)*i)*x");
  CHECK(render(parse("(1-1/2*i)*x")) == "(1-(1/2)*i)*x");
  CHECK(render(parse("B^(-1/2)*v_x")) == "B^(-1/2)*v_x");
  CHECK(render(parse("B^2*B^-1")) == "B");
  CHECK(render(parse("7")) == "7");
  CHECK(render(parse("x*x*x")) == "x^3");
}

TEST_CASE("render: efield style rewrites linear phi gradients") {
  Series s = parse("-d[x]phi + d[x]phi^2 - 2*d[y]phi*v_x");
  CHECK(render(s, RenderStyle::efield) == "2*E_y*v_x + E_x + d[x]phi^2");
  CHECK(render(parse("E_x"), RenderStyle::efield) == "E_x");
  CHECK(render(parse("E_x"), RenderStyle::canonical) == "-d[x]phi");
}

namespace {

Series random_renderable(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(1, 6);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<long long> den(1, 4);
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_int_distribution<int> bh(-3, 3);
  std::uniform_int_distribution<int> h(0, 2);
  std::uniform_int_distribution<int> e(-2, 3);
  std::uniform_int_distribution<int> pick(0, 5);
  std::vector<Term> terms;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    T b(num(rng), den(rng));
    if (b.t.coeff.is_zero()) b.t.coeff = Coeff(Rat(1));
    if (pick(rng) < 2) b.t.coeff.im = rat(num(rng), den(rng));
    b.h(h(rng)).e(e(rng)).b(bh(rng));
    b.pos(expo(rng), expo(rng)).vel(expo(rng), expo(rng));
    switch (pick(rng)) {
      case 0: b.db(1, 0, expo(rng) + 1); break;
      case 1: b.dphi(0, 0); break;
      case 2: b.db(2, 1).dphi(0, 1); break;
      case 3: b.cst(Field::c1).cst(Field::mu_z); break;
      default: break;
    }
    terms.push_back(b.t);
  }
  return Series::from_terms(Chart::particle, wide_truncation(), std::move(terms));
}

}  // namespace

TEST_CASE("round trip: parse(render(s)) == s for randomized normalized series") {
  std::mt19937 rng(20260810);
  for (int round = 0; round < 1000; ++round) {
    Series s = random_renderable(rng);
    std::string text = render(s);
    INFO(text);
    CHECK(parse(text) == s);
  }
}

TEST_CASE("round trip holds for the efield style as well") {
  std::mt19937 rng(77);
  for (int round = 0; round < 200; ++round) {
    Series s = random_renderable(rng);
    std::string text = render(s, RenderStyle::efield);
    INFO(text);
    CHECK(parse(text) == s);
  }
}

TEST_CASE("structured output: spec'd examples, fixed field order, no floats") {
  auto one = to_structured(parse("1"));
  CHECK(one.dump() ==
        R"([{"coeff":{"re_num":1,"re_den":1,"im_num":0,"im_den":1},"hbar":0,"eps":0,"bhalf":0,"gens":[],"p":[0,0],"v":[0,0]}])");

  auto ih2 = to_structured(parse("1/2*i*hbar"));
  CHECK(ih2.dump() ==
        R"([{"coeff":{"re_num":0,"re_den":1,"im_num":1,"im_den":2},"hbar":1,"eps":0,"bhalf":0,"gens":[],"p":[0,0],"v":[0,0]}])");

  auto graded = to_structured(parse("1/2*i*hbar*eps^-1*B"));
  CHECK(graded.dump() ==
        R"([{"coeff":{"re_num":0,"re_den":1,"im_num":1,"im_den":2},"hbar":1,"eps":-1,"bhalf":2,"gens":[],"p":[0,0],"v":[0,0]}])");

  auto gen = to_structured(parse("d[x,y]B^2*v_x"));
  CHECK(gen.dump() ==
        R"([{"coeff":{"re_num":1,"re_den":1,"im_num":0,"im_den":1},"hbar":0,"eps":0,"bhalf":0,"gens":[{"field":"B","d":["x","y"],"pow":2}],"p":[0,0],"v":[1,0]}])");

  // no floating point values anywhere in the document
  std::mt19937 rng(9);
  for (int round = 0; round < 50; ++round) {
    auto doc = to_structured(random_renderable(rng));
    std::function<void(const nlohmann::ordered_json&)> scan = [&](const nlohmann::ordered_json& j) {
      CHECK(!j.is_number_float());
      if (j.is_array() || j.is_object())
        for (const auto& v : j) scan(v);
    };
    scan(doc);
  }
}

TEST_CASE("render is injective on distinct normalized series") {
  std::mt19937 rng(13);
  std::vector<Series> pool;
  std::vector<std::string> texts;
  for (int round = 0; round < 60; ++round) {
    Series s = random_renderable(rng);
    std::string text = render(s);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (texts[i] == text) CHECK(pool[i] == s);
    }
    pool.push_back(s);
    texts.push_back(text);
  }
}
