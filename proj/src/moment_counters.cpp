#include "pdlab/moment_counters.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pdlab/errors.hpp"
#include "pdlab/set_algebra.hpp"

namespace pdlab {

namespace {

void require_moment_field(const FieldTower& f) {
  if (f.q() > kMomentFieldCap) {
    throw CostGuardError("D_x counts need q <= " + std::to_string(kMomentFieldCap) +
                         ", got " + std::to_string(f.q()));
  }
}

BigInt pow_big(std::size_t base, unsigned e) {
  return boost::multiprecision::pow(BigInt(base), e);
}

// sum_d r1(xi d) r2(d) over the support of r2.
std::int64_t dilated_inner(const FieldTower& f, const RepFn& r1, Elem xi,
                           const std::vector<Elem>& support2, const RepFn& r2) {
  std::int64_t e = 0;
  for (Elem d : support2) e += r1[f.mul(xi, d)] * r2[d];
  return e;
}

MomentReport second_moment(const RepFn& r, const BigInt& mass) {
  u128 zero = static_cast<u128>(r[0]) * static_cast<u128>(r[0]);
  u128 rest = 0;
  for (std::size_t x = 1; x < r.counts.size(); ++x) {
    const auto v = static_cast<u128>(r.counts[x]);
    rest += v * v;
  }
  MomentReport rep;
  rep.d_zero = to_big(zero);
  rep.d_nonzero = to_big(rest);
  rep.d_times = rep.d_zero + rep.d_nonzero;
  rep.set_lower_bound = Rational(mass * mass, rep.d_times);
  return rep;
}

}  // namespace

std::int64_t energy(const FqSet& a, Elem xi, const FqSet& b) {
  require_same_field(a, b);
  if (xi == 0) throw std::invalid_argument("energy needs xi != 0");
  const auto& f = a.tower();
  const auto ra = rep_function(a, a, SetOp::diff);
  const auto rb = rep_function(b, b, SetOp::diff);
  const std::int64_t e = dilated_inner(f, ra, xi, rb.support().elements(), rb);
#ifndef NDEBUG
  const auto direct = rep_function(a, b.dilate(xi), SetOp::diff);
  std::int64_t alt = 0;
  for (auto v : direct.counts) alt += v * v;
  if (alt != e) throw SelfCheckError("energy formulas disagree");
#endif
  return e;
}

BigInt DilateSpectrum::sum_q() const {
  BigInt s = 0;
  for (const auto& row : rows) s += row.q_xi;
  return s;
}

Rational DilateSpectrum::sum_e() const {
  Rational s = 0;
  for (const auto& row : rows) s += row.e_xi;
  return s;
}

std::string DilateSpectrum::to_csv() const {
  std::ostringstream out;
  out << "xi,E,Q,E_xi_num,E_xi_den\n";
  for (const auto& row : rows) {
    out << row.xi << ',' << row.energy << ',' << row.q_xi << ','
        << numerator(row.e_xi) << ',' << denominator(row.e_xi) << '\n';
  }
  return out.str();
}

nlohmann::json DilateSpectrum::to_json() const {
  std::int64_t emax = 0;
  Elem argmax = 0;
  for (const auto& row : rows) {
    if (row.energy > emax) {
      emax = row.energy;
      argmax = row.xi;
    }
  }
  return {{"set_size", set_size},
          {"sum_Q", int_json(sum_q())},
          {"sum_E_xi", rational_json(sum_e())},
          {"max_energy", emax},
          {"argmax_xi", argmax}};
}

DilateSpectrum dilate_spectrum(const FqSet& a) {
  if (a.size() < 2) throw std::invalid_argument("dilate spectrum needs |A| >= 2");
  const auto& f = a.tower();
  const auto r = rep_function(a, a, SetOp::diff);
  const auto support = r.support().elements();
  const auto n = static_cast<std::int64_t>(a.size());
  const Rational mean = Rational(BigInt(n) * n * n * n, BigInt(f.q()));
  DilateSpectrum spec{a.field(), a.size(), {}};
  spec.rows.reserve(f.q() - 1);
  for (Elem xi = 1; xi < f.q(); ++xi) {
    const std::int64_t e = dilated_inner(f, r, xi, support, r);
    spec.rows.push_back({xi, e, e - n * n, Rational(e) - mean});
  }
  return spec;
}

nlohmann::json MomentReport::to_json() const {
  nlohmann::json j{{"D_times", int_json(d_times)},
                   {"D_zero", int_json(d_zero)},
                   {"D_nonzero", int_json(d_nonzero)},
                   {"set_lower_bound", rational_json(set_lower_bound)}};
  if (collinear) j["T"] = int_json(*collinear);
  return j;
}

MomentReport d_times(const FqSet& a) {
  return d_times4(a, a, a, a);
}

MomentReport d_times4(const FqSet& a, const FqSet& b, const FqSet& c,
                      const FqSet& d) {
  require_same_field(a, b);
  require_same_field(a, c);
  require_same_field(a, d);
  if (a.empty() || b.empty() || c.empty() || d.empty()) {
    throw std::invalid_argument("D_x needs nonempty sets");
  }
  require_moment_field(a.tower());
  const auto rab = rep_function(a, b, SetOp::diff);
  const auto r = (a == c && b == d)
                     ? mul_convolution(rab, rab)
                     : mul_convolution(rab, rep_function(c, d, SetOp::diff));
  const BigInt mass = BigInt(a.size()) * b.size() * c.size() * d.size();
  return second_moment(r, mass);
}

nlohmann::json FourSetBoundReport::to_json() const {
  return {{"D_times", int_json(d_times)},
          {"star_product", int_json(star_product)},
          {"zero_term", int_json(zero_term)},
          {"holds", holds}};
}

FourSetBoundReport verify_four_set_bound(const FqSet& a, const FqSet& b,
                                         const FqSet& c, const FqSet& d) {
  if (!(a.size() <= b.size() && c.size() <= d.size() && b.size() <= d.size())) {
    throw std::invalid_argument("four-set bound needs |A|<=|B|, |C|<=|D|, |B|<=|D|");
  }
  FourSetBoundReport rep;
  rep.d_times = d_times4(a, b, c, d).d_times;
  rep.star_product = d_times(a).d_nonzero * d_times(b).d_nonzero *
                     d_times(c).d_nonzero * d_times(d).d_nonzero;
  rep.zero_term = 4 * pow_big(a.size(), 2) * pow_big(c.size(), 2) * pow_big(d.size(), 2);
  const BigInt rest = rep.d_times - rep.zero_term;
  rep.holds = rest <= 0 || boost::multiprecision::pow(rest, 4) <= rep.star_product;
  return rep;
}

BigInt collinear_energy(const FqSet& a, std::size_t size_cap) {
  if (a.empty()) throw std::invalid_argument("T(A) needs nonempty A");
  if (a.size() > size_cap) {
    throw CostGuardError("T(A) is capped at |A| <= " + std::to_string(size_cap));
  }
  const auto& f = a.tower();
  const auto al = a.elements();
  std::vector<std::int64_t> hist(f.q(), 0);
  std::vector<Elem> touched;
  std::vector<Elem> left(al.size()), right(al.size());
  u128 total = 0;
  // For fixed (a1, a3) the count is sum_x h(x)^2 with
  // h(x) = #{(a2, a4) : (a1 - a2)(a3 - a4) = x}.
  for (Elem a1 : al) {
    for (std::size_t i = 0; i < al.size(); ++i) left[i] = f.sub(a1, al[i]);
    for (Elem a3 : al) {
      for (std::size_t i = 0; i < al.size(); ++i) right[i] = f.sub(a3, al[i]);
      touched.clear();
      for (Elem u : left) {
        for (Elem v : right) {
          const Elem x = f.mul(u, v);
          if (hist[x]++ == 0) touched.push_back(x);
        }
      }
      for (Elem x : touched) {
        total += static_cast<u128>(hist[x]) * static_cast<u128>(hist[x]);
        hist[x] = 0;
      }
    }
  }
  const BigInt t = to_big(total);
  if (f.q() <= kMomentFieldCap) {
    const BigInt d = d_times(a).d_times;
    if (d > pow_big(a.size(), 2) * t) {
      throw SelfCheckError("D_x(A) > |A|^2 T(A)");
    }
  }
  return t;
}

nlohmann::json BktReport::to_json() const {
  return {{"energy_sum", int_json(energy_sum)},
          {"bound", int_json(bound)},
          {"holds", holds},
          {"witness", witness},
          {"witness_size", witness_size},
          {"witness_target", rational_json(witness_target)},
          {"witness_ok", witness_ok}};
}

BktReport verify_bkt(const FqSet& a, const FqSet& b, const FqSet& s) {
  require_same_field(a, b);
  require_same_field(a, s);
  if (s.empty()) throw std::invalid_argument("BKT check needs nonempty S");
  if (s.contains(0)) throw std::invalid_argument("BKT check needs 0 not in S");
  const auto& f = a.tower();
  const auto ra = rep_function(a, a, SetOp::diff);
  const auto rb = rep_function(b, b, SetOp::diff);
  const auto support = rb.support().elements();
  BktReport rep;
  for (Elem xi : s.elements()) {
    rep.energy_sum += dilated_inner(f, ra, xi, support, rb);
    const std::size_t size = combine(a, b.dilate(xi), SetOp::sum).size();
    if (size > rep.witness_size) {
      rep.witness_size = size;
      rep.witness = xi;
    }
  }
  const BigInt na = a.size(), nb = b.size();
  rep.bound = na * na * nb * nb + BigInt(s.size()) * na * nb;
  rep.holds = rep.energy_sum <= rep.bound;
  rep.witness_target = Rational(std::min(BigInt(s.size()), BigInt(na * nb)), BigInt(2));
  rep.witness_ok = Rational(BigInt(rep.witness_size)) >= rep.witness_target;
  return rep;
}

nlohmann::json PopularDilatesReport::to_json() const {
  nlohmann::json j{{"K", rational_json(k)},
                   {"D_times", int_json(d_times)},
                   {"D_required", rational_json(d_required)},
                   {"D_gap", rational_json(Rational(d_times) - d_required)},
                   {"energy_hypothesis", energy_hypothesis},
                   {"size_hypothesis", size_hypothesis},
                   {"lower", rational_json(lower)},
                   {"upper", rational_json(upper)}};
  if (x) {
    j["X"] = x->to_json();
    j["X_size"] = x->size();
    j["bounds_hold"] = bounds_hold;
  }
  return j;
}

PopularDilatesReport extract_popular_dilates(const FqSet& a, const Rational& k) {
  if (k <= 0) throw std::invalid_argument("K must be positive");
  if (a.size() < 2) throw std::invalid_argument("popular dilates need |A| >= 2");
  const auto& f = a.tower();
  const BigInt q = f.q();
  const BigInt n = a.size();
  PopularDilatesReport rep;
  rep.k = k;
  rep.d_times = d_times(a).d_times;
  rep.d_required = Rational(pow_big(a.size(), 8), q) +
                   Rational(3 * q * pow_big(a.size(), 5)) / k;
  rep.energy_hypothesis = Rational(rep.d_times) >= rep.d_required;
  rep.size_hypothesis = Rational(n) <= Rational(q) / (4 * k);
  rep.lower = Rational(q) / (k * n);
  rep.upper = 4 * k * q / Rational(3 * n);
  if (!rep.hypotheses_hold()) return rep;

  const auto spec = dilate_spectrum(a);
  const Rational threshold = Rational(n * n * n) / k;
  FqSet x(a.field());
  for (const auto& row : spec.rows) {
    if (Rational(row.q_xi) >= threshold) x.insert(row.xi);
  }
  const Rational size = Rational(BigInt(x.size()));
  rep.bounds_hold = rep.lower <= size && size <= rep.upper;
  rep.x = std::move(x);
  return rep;
}

}  // namespace pdlab
