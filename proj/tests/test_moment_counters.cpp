#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/moment_counters.hpp"
#include "pdlab/set_algebra.hpp"

using namespace pdlab;

namespace {

FqSet plane(const TowerPtr& f, std::uint32_t k, Elem t) {
  return span_over_subfield(FqSet(f, {1, t}), subfield(f, k));
}

std::int64_t energy_plus(const FqSet& a, Elem xi, const FqSet& b) {
  const auto r = rep_function(a, b.dilate(xi), SetOp::sum);
  std::int64_t s = 0;
  for (auto v : r.counts) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("energy examples") {
  auto f = FieldTower::build(3, 3);
  const FqSet one(f, {7});
  for (Elem xi = 1; xi < 27; ++xi) CHECK(energy(one, xi, one) == 1);
  const auto all = FqSet::full(f);
  CHECK(energy(all, 5, all) == 27 * 27 * 27);
  const auto a = plane(f, 1, 3);
  REQUIRE(a.size() == 9);
  for (Elem xi : {1u, 2u}) CHECK(energy(a, xi, a) == 729);
  CHECK_THROWS_AS(energy(a, 0, a), std::invalid_argument);
}

TEST_CASE("energy matches quadruple loop and both sign conventions") {
  std::mt19937_64 rng(21);
  for (auto spec : {"2^6", "5^3", "31", "3^4"}) {
    auto f = FieldTower::from_spec(spec);
    for (int t = 0; t < 25; ++t) {
      const auto a = oracle::random_set(f, 1 + rng() % 20, rng);
      const auto b = oracle::random_set(f, 1 + rng() % 20, rng);
      const Elem xi = 1 + static_cast<Elem>(rng() % (f->q() - 1));
      const auto e = energy(a, xi, b);
      CHECK(e == oracle::energy(a, xi, b));
      CHECK(e == energy_plus(a, xi, b));
      // E >= |A|^2 |B|^2 / q
      CHECK(Rational(e) >= Rational(BigInt(a.size() * a.size() * b.size() * b.size()),
                                    BigInt(f->q())));
    }
  }
}

TEST_CASE("dilate spectrum of the whole field") {
  auto f = FieldTower::build(2, 4);
  const auto s = dilate_spectrum(FqSet::full(f));
  for (const auto& row : s.rows) CHECK(row.q_xi == 16 * 16 * 16 - 16 * 16);
  CHECK_THROWS_AS(dilate_spectrum(FqSet(f, {1})), std::invalid_argument);
}

TEST_CASE("dilate spectrum sums") {
  std::mt19937_64 rng(22);
  for (auto spec : {"2^6", "5^3", "3^4", "101"}) {
    auto f = FieldTower::from_spec(spec);
    for (int t = 0; t < 20; ++t) {
      const auto a = oracle::random_set(f, 2 + rng() % (f->q() - 2), rng);
      const auto s = dilate_spectrum(a);
      const BigInt n = a.size();
      CHECK(s.sum_q() <= n * n * n * n);
      CHECK(s.sum_e() <= Rational(BigInt(f->q()) * n * n));
      for (const auto& row : s.rows) {
        CHECK(row.energy == energy(a, row.xi, a));
        CHECK(row.e_xi >= 0);
      }
    }
  }
}

TEST_CASE("E_xi can vanish on a proper subset") {
  // A = F_3 inside F_9 and xi outside F_3: a1 - a2 = xi (b1 - b2) forces
  // both sides to 0, so E = |A|^2 = |A|^4 / q.
  auto f = FieldTower::build(3, 2);
  const auto a = subfield(f, 1).elements;
  const auto s = dilate_spectrum(a);
  CHECK(s.at(3).energy == 9);
  CHECK(s.at(3).e_xi == 0);
}

TEST_CASE("spectrum of the prime subfield peaks on F_p") {
  auto f = FieldTower::build(3, 3);
  const auto a = subfield(f, 1).elements;
  const auto s = dilate_spectrum(a);
  std::int64_t best = 0;
  for (const auto& row : s.rows) best = std::max(best, row.q_xi);
  for (const auto& row : s.rows) CHECK((row.q_xi == best) == (row.xi <= 2));
}

TEST_CASE("spectrum csv") {
  auto f = FieldTower::build(2, 2);
  const auto csv = dilate_spectrum(FqSet(f, {0, 1})).to_csv();
  CHECK(csv.rfind("xi,E,Q,E_xi_num,E_xi_den\n1,", 0) == 0);
}

TEST_CASE("D_x examples") {
  auto f2 = FieldTower::build(2, 1);
  CHECK(d_times(FqSet(f2, {0, 1})).d_times == 160);
  CHECK(d_times(FqSet(f2, {1})).d_times == 1);
  auto f = FieldTower::build(5, 2);
  CHECK(d_times(FqSet(f, {3})).d_times == 1);
}

TEST_CASE("D_x matches the six-variable loop") {
  std::mt19937_64 rng(23);
  for (auto spec : {"2^5", "5^2", "37", "3^3"}) {
    auto f = FieldTower::from_spec(spec);
    for (int t = 0; t < 10; ++t) {
      const auto a = oracle::random_set(f, 1 + rng() % 12, rng);
      const auto m = d_times(a);
      CHECK(m.d_times == oracle::d_times6(a));
      CHECK(m.d_times == m.d_zero + m.d_nonzero);
    }
  }
}

TEST_CASE("Cauchy-Schwarz lower bound for the product set") {
  std::mt19937_64 rng(24);
  auto f = FieldTower::build(2, 6);
  for (int t = 0; t < 1000; ++t) {
    const auto a = oracle::random_set(f, 1 + rng() % 10, rng);
    const auto m = d_times(a);
    const auto pda = products_of_differences(a, a, a, a);
    const BigInt n = a.size();
    CHECK(BigInt(pda.size()) * m.d_times >= n * n * n * n * n * n * n * n);
    CHECK(Rational(BigInt(pda.size())) >= m.set_lower_bound);
  }
}

TEST_CASE("D_x is affine invariant") {
  auto f = FieldTower::build(7, 2);
  std::mt19937_64 rng(25);
  const auto a = oracle::random_set(f, 9, rng);
  const auto base = d_times(a).d_times;
  for (Elem c : {1u, 8u, 30u})
    for (Elem lambda : {1u, 2u, 17u, 48u}) CHECK(d_times(a.affine_image(lambda, c)).d_times == base);
}

TEST_CASE("four-set count") {
  std::mt19937_64 rng(26);
  auto f = FieldTower::build(3, 3);
  const auto a = oracle::random_set(f, 6, rng);
  CHECK(d_times4(a, a, a, a).d_times == d_times(a).d_times);
  const FqSet s(f, {4});
  CHECK(d_times4(s, FqSet(f, {5}), FqSet(f, {1}), FqSet(f, {2})).d_times == 1);
  CHECK_THROWS_AS(d_times4(a, FqSet(f), a, a), std::invalid_argument);
  for (int t = 0; t < 30; ++t) {
    const auto b = oracle::random_set(f, 1 + rng() % 7, rng);
    const auto c = oracle::random_set(f, 1 + rng() % 7, rng);
    const auto d = oracle::random_set(f, 1 + rng() % 7, rng);
    const auto e = oracle::random_set(f, 1 + rng() % 7, rng);
    const auto m = d_times4(b, c, d, e);
    CHECK(m.d_times == oracle::d_times4(b, c, d, e));
    const auto rz = rep_function(b, c, SetOp::diff);
    CHECK(m.d_zero >= 0);
  }
}

TEST_CASE("four-set bound on sparse random quadruples") {
  std::mt19937_64 rng(27);
  for (auto spec : {"31", "2^6", "5^3", "101"}) {
    auto f = FieldTower::from_spec(spec);
    for (int t = 0; t < 100; ++t) {
      std::vector<std::size_t> sz(4);
      for (auto& s : sz) s = 2 + rng() % 11;
      std::sort(sz.begin(), sz.end());
      // |A| <= |B|, |C| <= |D|, |B| <= |D|
      const auto a = oracle::random_set(f, sz[0], rng);
      const auto c = oracle::random_set(f, sz[1], rng);
      const auto b = oracle::random_set(f, sz[2], rng);
      const auto d = oracle::random_set(f, sz[3], rng);
      const auto rep = verify_four_set_bound(a, b, c, d);
      CHECK(rep.d_times == oracle::d_times4(a, b, c, d));
      CHECK(rep.holds);
    }
  }
  auto f = FieldTower::build(31, 1);
  CHECK_THROWS_AS(verify_four_set_bound(FqSet(f, {1, 2}), FqSet(f, {1}), FqSet(f, {1}),
                                        FqSet(f, {1})),
                  std::invalid_argument);
}

TEST_CASE("four-set bound fails for a singleton and for dense sets") {
  // |A| = 1 makes D_x(A)^* = 0 while the mixed count still has nonzero
  // solutions.
  auto f31 = FieldTower::build(31, 1);
  const FqSet a(f31, {3});
  const FqSet b(f31, {1, 2, 3, 7, 18, 21, 26, 29});
  const FqSet c(f31, {8, 25, 26});
  const FqSet d(f31, {6, 7, 8, 12, 16, 20, 25, 26, 29});
  const auto rep = verify_four_set_bound(a, b, c, d);
  CHECK(rep.star_product == 0);
  CHECK(rep.d_times == 3356);
  CHECK(rep.zero_term == 2916);
  CHECK(!rep.holds);

  auto f7 = FieldTower::build(7, 1);
  const auto dense = verify_four_set_bound(FqSet(f7, {5, 6}), FqSet(f7, {1, 2, 3, 4, 5, 6}),
                                           FqSet(f7, {2, 3, 4, 5}),
                                           FqSet(f7, {1, 2, 3, 4, 5, 6}));
  CHECK(dense.d_times == 14412);
  CHECK(dense.zero_term == 9216);
  CHECK(!dense.holds);
}

TEST_CASE("collinear energy") {
  auto f3 = FieldTower::build(3, 1);
  CHECK(collinear_energy(FqSet(f3, {1})) == 1);
  CHECK(collinear_energy(FqSet::full(f3)) == oracle::collinear(FqSet::full(f3)));
  std::mt19937_64 rng(28);
  for (auto spec : {"2^6", "31", "3^4"}) {
    auto f = FieldTower::from_spec(spec);
    for (int t = 0; t < 10; ++t) {
      const auto a = oracle::random_set(f, 1 + rng() % 10, rng);
      const auto tv = collinear_energy(a);
      CHECK(tv == oracle::collinear(a));
      CHECK(d_times(a).d_times <= BigInt(a.size() * a.size()) * tv);
    }
  }
  auto big = FieldTower::build(2, 10);
  CHECK_THROWS_AS(collinear_energy(oracle::random_set(big, 50, rng), 40), CostGuardError);
}

TEST_CASE("BKT bound") {
  auto f = FieldTower::build(2, 6);
  const FqSet one(f, {1});
  const auto tiny = verify_bkt(one, one, one);
  CHECK(tiny.holds);
  CHECK(tiny.energy_sum == 1);
  CHECK(tiny.bound == 2);
  CHECK(tiny.witness_ok);
  CHECK_THROWS_AS(verify_bkt(one, one, FqSet(f, {0, 1})), std::invalid_argument);

  std::mt19937_64 rng(29);
  for (auto spec : {"2^6", "5^3"}) {
    auto g = FieldTower::from_spec(spec);
    for (int t = 0; t < 300; ++t) {
      const auto a = oracle::random_set(g, 1 + rng() % 12, rng);
      const auto b = oracle::random_set(g, 1 + rng() % 12, rng);
      const auto s = oracle::random_set(g, 1 + rng() % 20, rng, false);
      const auto rep = verify_bkt(a, b, s);
      CHECK(rep.holds);
      CHECK(rep.witness_ok);
      CHECK(s.contains(rep.witness));
    }
  }
}

TEST_CASE("BKT on a structured instance") {
  auto f = FieldTower::build(3, 3);
  const auto a = plane(f, 1, 3);
  const FqSet s(f, {1, 2});
  const auto rep = verify_bkt(a, a, s);
  // every dilate by F_3^* fixes the plane, so each energy is |A|^3
  CHECK(rep.energy_sum == 2 * 729);
  CHECK(rep.holds);
}

TEST_CASE("popular dilates: size guard") {
  auto f = FieldTower::build(5, 2);
  const auto rep = extract_popular_dilates(FqSet::full(f), Rational(1, 2));
  CHECK(!rep.size_hypothesis);
  CHECK(!rep.x.has_value());
  CHECK_THROWS_AS(extract_popular_dilates(FqSet::full(f), Rational(0)), std::invalid_argument);
}

TEST_CASE("popular dilates: plane in F_125 has no admissible K") {
  auto f = FieldTower::build(5, 3);
  const auto a = plane(f, 1, 5);
  for (auto k : {Rational(1), Rational(5, 4)}) {
    const auto rep = extract_popular_dilates(a, k);
    CHECK(rep.size_hypothesis);
    CHECK(!rep.energy_hypothesis);
  }
  const auto rep = extract_popular_dilates(a, Rational(3));
  CHECK(rep.energy_hypothesis);
  CHECK(!rep.size_hypothesis);
}

TEST_CASE("popular dilates: bounds where hypotheses hold") {
  struct Case {
    const char* field;
    std::uint32_t k;
    bool two_dim;
    Rational kk;
  };
  for (const auto& c : {Case{"2^8", 4, false, Rational(4)}, Case{"5^4", 2, false, Rational(5)},
                        Case{"2^12", 4, true, Rational(4)}}) {
    auto f = FieldTower::from_spec(c.field);
    const auto sub = subfield(f, c.k);
    FqSet a = sub.elements;
    if (c.two_dim) {
      Elem t = 2;
      while (sub.elements.contains(t)) ++t;
      a = span_over_subfield(FqSet(f, {1, t}), sub);
    }
    const auto rep = extract_popular_dilates(a, c.kk);
    CHECK(rep.hypotheses_hold());
    REQUIRE(rep.x.has_value());
    CHECK(rep.bounds_hold);
    // the nonzero subfield elements are exactly the popular dilates
    auto star = sub.elements;
    star.erase(0);
    CHECK(*rep.x == star);
  }
}

TEST_CASE("popular dilates: random sparse sets fail the energy hypothesis") {
  std::mt19937_64 rng(30);
  auto f = FieldTower::build(2, 8);
  for (int t = 0; t < 10; ++t) {
    const auto rep = extract_popular_dilates(oracle::random_set(f, 16, rng), Rational(4));
    CHECK(!rep.energy_hypothesis);
  }
}
