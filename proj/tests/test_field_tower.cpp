#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pdlab/field_tower.hpp"
#include "pdlab/fq_set.hpp"

using namespace pdlab;

namespace {

const std::vector<std::pair<std::uint32_t, std::uint32_t>> kFields = {
    {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 1}, {3, 2}, {3, 3},
    {3, 6}, {5, 1}, {5, 2}, {5, 3}, {7, 2}, {11, 2}, {31, 1}, {101, 1}};

}  // namespace

TEST_CASE("prime field base case") {
  auto f = FieldTower::build(2, 1);
  CHECK(f->q() == 2);
  CHECK(f->modulus() == std::vector<std::uint32_t>{0, 1});
  CHECK(f->mul(1, 1) == 1);
  CHECK(f->add(1, 1) == 0);
}

TEST_CASE("divisor lattice") {
  CHECK(FieldTower::build(3, 3)->subfield_degrees() == std::vector<std::uint32_t>{1, 3});
  CHECK(FieldTower::build(3, 6)->subfield_degrees() ==
        std::vector<std::uint32_t>{1, 2, 3, 6});
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(FieldTower::build(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(FieldTower::build(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(FieldTower::build(2, 25), std::invalid_argument);
  CHECK_THROWS_AS(FieldTower::build(3, 3, 10), std::invalid_argument);
  CHECK_THROWS_AS(FieldTower::from_spec("3^x"), std::invalid_argument);
  CHECK_THROWS_AS(FieldTower::from_spec("6^2"), std::invalid_argument);
  CHECK(FieldTower::from_spec("5^3")->q() == 125);
  CHECK(FieldTower::from_spec("31")->q() == 31);
}

TEST_CASE("modulus is least irreducible") {
  // Least monic irreducibles by coefficient encoding c0 + c1 p + ...
  CHECK(FieldTower::build(2, 2)->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(FieldTower::build(2, 3)->modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(FieldTower::build(3, 2)->modulus() == std::vector<std::uint32_t>{1, 0, 1});
  // Irreducible: no root in F_p for degree <= 3.
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    const auto& m = f->modulus();
    REQUIRE(m.size() == r + 1);
    CHECK(m.back() == 1);
    if (r >= 2 && r <= 3) {
      for (std::uint32_t x = 0; x < p; ++x) {
        std::uint64_t v = 0, pw = 1;
        for (auto c : m) {
          v = (v + c * pw) % p;
          pw = pw * x % p;
        }
        CHECK(v != 0);
      }
    }
  }
}

TEST_CASE("generator is least primitive element") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    const std::uint32_t n = f->q() - 1;
    auto order = [&](Elem x) {
      Elem acc = x;
      std::uint32_t k = 1;
      while (acc != 1) {
        acc = f->mul(acc, x);
        ++k;
      }
      return k;
    };
    CHECK(order(f->generator()) == n);
    for (Elem x = 1; x < f->generator(); ++x) CHECK(order(x) < n);
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(11);
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    std::uniform_int_distribution<Elem> d(0, f->q() - 1);
    for (int i = 0; i < 1000; ++i) {
      const Elem a = d(rng), b = d(rng), c = d(rng);
      CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
      CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      CHECK(f->add(a, f->neg(a)) == 0);
      CHECK(f->add(a, b) == f->add(b, a));
      if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
    }
  }
}

TEST_CASE("addition is digitwise mod p") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    if (f->q() > 1024) continue;
    for (Elem x = 0; x < f->q(); ++x) {
      for (Elem y = 0; y < f->q(); y += 7) {
        Elem s = 0, pw = 1, a = x, b = y;
        for (std::uint32_t i = 0; i < r; ++i) {
          s += ((a % p + b % p) % p) * pw;
          a /= p;
          b /= p;
          pw *= p;
        }
        CHECK(f->add(x, y) == s);
      }
    }
  }
}

TEST_CASE("dlog is a bijection") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    std::set<std::uint32_t> logs;
    for (Elem x = 1; x < f->q(); ++x) {
      CHECK(f->gpow(f->dlog(x)) == x);
      logs.insert(f->dlog(x));
    }
    CHECK(logs.size() == f->q() - 1);
    CHECK(*logs.rbegin() == f->q() - 2);
  }
}

TEST_CASE("frobenius") {
  auto f = FieldTower::build(3, 6);
  for (Elem x = 0; x < f->q(); ++x) {
    CHECK(f->frobenius(x, 6) == x);
    CHECK(f->frobenius(x, 0) == x);
    CHECK(f->frobenius(x, 1) == oracle::slow_pow(*f, x, 3));
  }
  for (Elem x = 0; x < 3; ++x) CHECK(f->frobenius(x, 4) == x);
}

TEST_CASE("subfields of F_729") {
  auto f = FieldTower::build(3, 6);
  for (std::uint32_t k : {1u, 2u, 3u, 6u}) {
    std::size_t fixed = 0;
    for (Elem x = 0; x < f->q(); ++x) fixed += oracle::slow_pow(*f, x, static_cast<std::uint64_t>(std::pow(3, k))) == x;
    auto s = subfield(f, k);
    CHECK(s.size() == fixed);
    CHECK(fixed == static_cast<std::size_t>(std::pow(3, k)));
  }
  auto f9 = subfield(f, 2);
  for (Elem x : f9.elements.elements()) {
    for (Elem y : f9.elements.elements()) {
      CHECK(f9.elements.contains(f->mul(x, y)));
      CHECK(f9.elements.contains(f->add(x, y)));
    }
    if (x != 0) CHECK(f9.elements.contains(f->inv(x)));
  }
  CHECK(subfield(f, 6).size() == 729);
  auto prime = subfield(f, 1).elements.elements();
  CHECK(prime == std::vector<Elem>{0, 1, 2});
  CHECK_THROWS_AS(subfield(f, 4), std::invalid_argument);
}

TEST_CASE("subfield lattice inclusion") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    for (auto k1 : f->subfield_degrees()) {
      for (auto k2 : f->subfield_degrees()) {
        const bool inc = subfield(f, k1).elements.is_subset_of(subfield(f, k2).elements);
        CHECK(inc == (k2 % k1 == 0));
      }
    }
  }
}

TEST_CASE("trace") {
  auto f8 = FieldTower::build(2, 3);
  int zeros = 0;
  for (Elem x = 0; x < 8; ++x) zeros += f8->trace(x, 1) == 0;
  CHECK(zeros == 4);
  CHECK(f8->trace(0, 1) == 0);
  auto f9 = FieldTower::build(3, 2);
  for (Elem x = 0; x < 3; ++x) CHECK(f9->trace(x, 1) == f9->mul(2, x));
  CHECK_THROWS_AS(f9->trace(1, 3), std::invalid_argument);
}

TEST_CASE("trace fibers are uniform") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    if (f->q() > 1024) continue;
    for (auto k : f->subfield_degrees()) {
      const auto sub = subfield(f, k);
      std::vector<std::size_t> fiber(f->q(), 0);
      for (Elem x = 0; x < f->q(); ++x) {
        const Elem t = f->trace(x, k);
        CHECK(sub.elements.contains(t));
        ++fiber[t];
      }
      const std::size_t expect = f->q() / sub.size();
      for (Elem t : sub.elements.elements()) CHECK(fiber[t] == expect);
      // additivity
      for (Elem x = 0; x < f->q(); x += 3)
        CHECK(f->trace(f->add(x, 1), k) == f->add(f->trace(x, k), f->trace(1, k)));
    }
  }
}

TEST_CASE("artin-schreier") {
  CHECK_THROWS(FieldTower::build(3, 2)->solve_artin_schreier(1));
  for (std::uint32_t r : {1u, 2u, 3u, 4u, 6u}) {
    auto f = FieldTower::build(2, r);
    for (Elem w = 0; w < f->q(); ++w) {
      int sols = 0;
      for (Elem z = 0; z < f->q(); ++z) sols += f->add(f->mul(z, z), z) == w;
      auto z = f->solve_artin_schreier(w);
      if (f->abs_trace(w) == 0) {
        CHECK(sols == 2);
        REQUIRE(z.has_value());
        CHECK(f->add(f->mul(*z, *z), *z) == w);
        const Elem z1 = f->add(*z, 1);
        CHECK(f->add(f->mul(z1, z1), z1) == w);
      } else {
        CHECK(sols == 0);
        CHECK(!z.has_value());
      }
    }
    auto z0 = f->solve_artin_schreier(0);
    REQUIRE(z0.has_value());
    CHECK(*z0 <= 1);
  }
}

TEST_CASE("squares") {
  CHECK_THROWS(FieldTower::build(2, 3)->is_square(1));
  for (auto [p, r] : kFields) {
    if (p == 2) continue;
    auto f = FieldTower::build(p, r);
    std::vector<bool> sq(f->q(), false);
    for (Elem y = 0; y < f->q(); ++y) sq[f->mul(y, y)] = true;
    std::size_t count = 0;
    for (Elem x = 0; x < f->q(); ++x) {
      CHECK(f->is_square(x) == sq[x]);
      count += sq[x];
    }
    CHECK(count == (f->q() + 1) / 2);
  }
}

TEST_CASE("square test inside a subfield") {
  auto f = FieldTower::build(3, 6);
  for (std::uint32_t k : {1u, 2u, 3u}) {
    const auto sub = subfield(f, k).elements.elements();
    std::set<Elem> sq;
    for (Elem y : sub) sq.insert(f->mul(y, y));
    for (Elem x : sub) CHECK(f->is_square_in_subfield(x, k) == (sq.count(x) == 1));
  }
}

TEST_CASE("additive characters") {
  for (auto [p, r] : kFields) {
    auto f = FieldTower::build(p, r);
    std::complex<double> s = 0;
    for (Elem x = 0; x < f->q(); ++x) {
      const auto v = f->additive_character(x);
      CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
      s += v;
    }
    CHECK(std::abs(s) < 1e-6 * f->q());
    CHECK(std::abs(f->additive_character(0) - 1.0) < 1e-15);
    for (Elem x = 0; x < f->q(); x += 5) {
      const Elem y = (x * 7 + 3) % f->q();
      CHECK(std::abs(f->additive_character(f->add(x, y)) -
                     f->additive_character(x) * f->additive_character(y)) < 1e-9);
    }
  }
}

TEST_CASE("subfield character sums vanish") {
  auto f = FieldTower::build(2, 6);
  for (std::uint32_t k : {2u, 3u}) {
    std::complex<double> s = 0;
    for (Elem x : subfield(f, k).elements.elements()) s += f->subfield_character(x, k);
    CHECK(std::abs(s) < 1e-9);
  }
}

TEST_CASE("descriptor") {
  auto f = FieldTower::build(3, 3);
  auto j = f->descriptor();
  CHECK(j["p"] == 3);
  CHECK(j["r"] == 3);
  CHECK(j["modulus"].size() == 4);
  CHECK(j["generator"] == f->generator());
}
