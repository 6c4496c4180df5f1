#include <catch2/catch_amalgamated.hpp>

#include "giweyl/star.hpp"
#include "giweyl/verify.hpp"

#include "helpers.hpp"

using namespace giweyl;
using namespace giweyl::testing;

namespace {
Truncation tr_default() { return Truncation(2, -2, 3); }
}  // namespace

TEST_CASE("derivative-split weights") {
  CHECK(weight_w(1, 1) == 8);
  CHECK(weight_w(2, 1) == 12);
  CHECK(weight_w(2, 2) == -12);
  CHECK(weight_w(3, 2) == 0);
  CHECK(weight_w(3, 1) == 32);
  CHECK(weight_w(3, 3) == 32);
  CHECK_THROWS_AS(weight_w(2, 3), Error);
  CHECK_THROWS_AS(weight_w(0, 1), Error);
  CHECK_THROWS_AS(weight_w(2, 0), Error);
}

TEST_CASE("field-free operator applied to coordinate pairs") {
  auto l = build_l();
  Truncation tr = tr_default();
  CHECK(apply_bidiff(l, x_mono(), vx_mono(), tr) ==
        mono(Chart::particle, T(-1, 2), tr));
  CHECK(apply_bidiff(l, vx_mono(), vy_mono(), tr).is_zero());
  CHECK(apply_bidiff(l, x_mono(), y_mono(), tr).is_zero());
}

TEST_CASE("first field operator: -(1/2) B (da_x db_y - da_y db_x)") {
  auto l1 = build_ln(1);
  std::vector<BiDiffTerm> want;
  {
    BiDiffTerm t;
    t.coeff = Coeff(rat(-1, 2));
    t.prefactor = refdetail::pre_b();
    t.d_left_vel = Deriv{1, 0};
    t.d_right_vel = Deriv{0, 1};
    want.push_back(t);
    BiDiffTerm u;
    u.coeff = Coeff(rat(1, 2));
    u.prefactor = refdetail::pre_b();
    u.d_left_vel = Deriv{0, 1};
    u.d_right_vel = Deriv{1, 0};
    want.push_back(u);
  }
  CHECK(bidiff_equal(l1, want));
  CHECK(apply_bidiff(l1, vx_mono(), vy_mono(), tr_default()) ==
        mono(Chart::particle, T(-1, 2).b(2), tr_default()));
}

TEST_CASE("second field operator: -(i/12) B_{,i} da_j db_l (db_i - da_i)") {
  auto l2 = build_ln(2);
  std::vector<BiDiffTerm> want;
  for (auto [j, l, sgn] : std::vector<std::tuple<Axis, Axis, int>>{{Axis::x, Axis::y, 1},
                                                                   {Axis::y, Axis::x, -1}})
    for (Axis i : {Axis::x, Axis::y}) {
      BiDiffTerm t;
      t.coeff = Coeff(Rat(0), rat(-sgn, 12));
      t.prefactor = refdetail::pre_db(i);
      t.d_left_vel = axis_deriv(j);
      t.d_right_vel = axis_deriv(l).plus(axis_deriv(i));
      want.push_back(t);
      BiDiffTerm u;
      u.coeff = Coeff(Rat(0), rat(sgn, 12));
      u.prefactor = refdetail::pre_db(i);
      u.d_left_vel = axis_deriv(j).plus(axis_deriv(i));
      u.d_right_vel = axis_deriv(l);
      want.push_back(u);
    }
  CHECK(bidiff_equal(l2, want));
}

TEST_CASE("product operator blocks match the hand-built second-order table") {
  POperator p = build_p(2);
  auto ref = reference_product_blocks();
  REQUIRE(p.blocks.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(p.blocks[i].hbar == ref[i].hbar);
    CHECK(p.blocks[i].eps == ref[i].eps);
    CHECK(bidiff_equal(p.blocks[i].terms, ref[i].terms));
  }
}

TEST_CASE("product operator eps range is -n..0 at hbar^n") {
  POperator p = build_p(3);
  for (int n = 0; n <= 3; ++n)
    for (int m = -n; m <= 0; ++m) {
      bool found = false;
      for (const auto& blk : p.blocks) found = found || (blk.hbar == n && blk.eps == m);
      CHECK(found);
    }
  for (const auto& blk : p.blocks) {
    CHECK(blk.eps <= 0);
    CHECK(blk.eps >= -blk.hbar);
  }
}

TEST_CASE("star product examples") {
  Truncation tr = tr_default();
  Series vxvy = star(vx_mono(), vy_mono(), tr);
  Series want = Series::from_terms(Chart::particle, tr,
                                   {T().vel(1, 1), T().ic(1, 2).h(1).e(-1).b(2)});
  CHECK(vxvy == want);

  Series xvx = star(x_mono(), vx_mono(), tr);
  CHECK(xvx ==
        Series::from_terms(Chart::particle, tr, {T().pos(1, 0).vel(1, 0), T().ic(1, 2).h(1)}));

  std::mt19937 rng(3);
  Series f = random_series(rng, 6);
  CHECK(star(Series::unit(Chart::particle, wide()), f, tr) == truncate_to(f, tr));
  CHECK(star(f, Series::unit(Chart::particle, wide()), tr) == truncate_to(f, tr));
}

TEST_CASE("field-free star reproduces the closed-form expansion") {
  Truncation tr(2, 0, 12);
  Series x2 = mono(Chart::particle, T().pos(2, 0), tr);
  Series vx2 = mono(Chart::particle, T().vel(2, 0), tr);
  Series got = star(x2, vx2, tr, FieldMode::zero_field);
  Series want = Series::from_terms(
      Chart::particle, tr,
      {T().pos(2, 0).vel(2, 0), T().ic(2).h(1).pos(1, 0).vel(1, 0), T(-1, 2).h(2)});
  CHECK(got == want);
}

TEST_CASE("zero-field mode rejects field-bearing symbols") {
  Truncation tr(2, 0, 12);
  Series withb = mono(Chart::particle, T().b(2), tr);
  CHECK_THROWS_AS(star(withb, withb, tr, FieldMode::zero_field), Error);
}

TEST_CASE("moyal bracket examples") {
  Truncation tr = tr_default();
  CHECK(moyal_bracket(x_mono(), vx_mono(), tr) == mono(Chart::particle, T().ic(1).h(1), tr));
  CHECK(moyal_bracket(vx_mono(), vy_mono(), tr) ==
        mono(Chart::particle, T().ic(1).h(1).e(-1).b(2), tr));
  std::mt19937 rng(17);
  Series f = random_series(rng, 6);
  CHECK(moyal_bracket(f, f, tr).is_zero());
}

TEST_CASE("moyal bracket equals the star commutator") {
  Truncation tr = tr_default();
  std::mt19937 rng(23);
  for (int round = 0; round < 10; ++round) {
    Series a = random_series(rng, 4, true, 2);
    Series b = random_series(rng, 4, true, 2);
    CHECK(moyal_bracket(a, b, tr) == sub(star(a, b, tr), star(b, a, tr)));
  }
}

TEST_CASE("poisson bracket examples") {
  CHECK(poisson_bracket(x_mono(), vx_mono()) == Series::unit(Chart::particle, wide()));
  CHECK(poisson_bracket(vx_mono(), vy_mono()) == mono(Chart::particle, T().e(-1).b(2)));
  CHECK(poisson_bracket(x_mono(), y_mono()).is_zero());
}

TEST_CASE("leading moyal bracket term is i hbar times the poisson bracket") {
  Truncation tr(3, -3, 6);
  std::mt19937 rng(31);
  for (int round = 0; round < 10; ++round) {
    Series a = random_series(rng, 4, true, 2);
    Series b = random_series(rng, 4, true, 2);
    Series diff = sub(moyal_bracket(a, b, tr),
                      mul(mono(Chart::particle, T().ic(1).h(1), tr), poisson_bracket(a, b)));
    CHECK(restrict_hbar(diff, 1).is_zero());
  }
}

TEST_CASE("star commutator of hbar-free symbols has no even-hbar content") {
  // the operator-block symmetry: even blocks are symmetric under factor
  // exchange, so they cancel from the commutator of ungraded symbols
  Truncation tr = tr_default();
  std::mt19937 rng(41);
  for (int round = 0; round < 10; ++round) {
    Series a = random_series(rng, 4, true, 2, false);
    Series b = random_series(rng, 4, true, 2, false);
    Series comm = sub(star(a, b, tr), star(b, a, tr));
    CHECK(restrict_hbar(comm, 0).is_zero());
    CHECK(restrict_hbar(comm, 2).is_zero());
  }
}

TEST_CASE("associativity within the truncation window") {
  Truncation tr = tr_default();
  std::mt19937 rng(59);
  for (int round = 0; round < 12; ++round) {
    Series a = random_series(rng, 4, true, 2);
    Series b = random_series(rng, 4, true, 2);
    Series c = random_series(rng, 4, true, 2);
    CHECK(star(star(a, b, tr), c, tr) == star(a, star(b, c, tr), tr));
  }
}

TEST_CASE("symmetrized star products") {
  Truncation tr = tr_default();
  CHECK(symmetrized_star({vx_mono(), vy_mono()}, tr) == mono(Chart::particle, T().vel(1, 1), tr));
  CHECK(symmetrized_star({vx_mono()}, tr) == truncate_to(vx_mono(), tr));
  CHECK(symmetrized_star({vx_mono(), vx_mono(), vy_mono()}, tr) ==
        mono(Chart::particle, T().vel(2, 1), tr));
  // The chain v_x * v_y * v_x differs from the symmetrization by
  // (i hbar / 3 eps) [B, v_x] = -(hbar^2 / 3 eps) B_{,x}: the two orderings
  // coincide only where the commutator is central (the guiding-center
  // algebra), not in the particle chart with inhomogeneous B.
  Series chain = star(star(vx_mono(), vy_mono(), tr), vx_mono(), tr);
  Series correction = mono(Chart::particle, T(-1, 3).h(2).e(-1).db(1, 0), tr);
  CHECK(chain == add(symmetrized_star({vx_mono(), vx_mono(), vy_mono()}, tr), correction));
}

TEST_CASE("symmetrized star of velocity monomials is pointwise, degree <= 4") {
  Truncation tr(3, -3, 6);
  for (int kx = 0; kx <= 4; ++kx)
    for (int ky = 0; kx + ky <= 4; ++ky) {
      if (kx + ky == 0) continue;
      std::vector<Series> factors;
      for (int t = 0; t < kx; ++t) factors.push_back(vx_mono());
      for (int t = 0; t < ky; ++t) factors.push_back(vy_mono());
      CHECK(symmetrized_star(factors, tr) == mono(Chart::particle, T().vel(kx, ky), tr));
    }
}
