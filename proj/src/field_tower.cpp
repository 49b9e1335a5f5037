#include "pdlab/field_tower.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over F_p, lowest coefficient first.
using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > df) {
    const std::size_t shift = a.size() - 1 - df;
    const std::uint64_t c = a.back() * lead_inv % p;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + (p - c) * f[i]) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
  }
  return poly_mod(std::move(prod), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint32_t r, std::uint64_t p) {
  if (r == 1) return true;
  const Poly x{0, 1};
  std::vector<Poly> frob(r + 1);  // frob[k] = x^{p^k} mod f
  frob[0] = x;
  for (std::uint32_t k = 1; k <= r; ++k) {
    frob[k] = poly_powmod(frob[k - 1], p, f, p);
  }
  Poly last = frob[r];
  trim(last);
  if (last != x) return false;
  for (std::uint32_t k = 1; k < r; ++k) {
    if (r % k != 0) continue;
    Poly diff = frob[k];
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() != 1) return false;
  }
  return true;
}

}  // namespace

Elem FieldTower::digit_add(Elem x, Elem y) const {
  if (p_ == 2) return x ^ y;
  Elem out = 0;
  for (std::uint32_t i = 0; i < r_; ++i) {
    const std::uint32_t d = (x % p_ + y % p_) % p_;
    out += d * pow_p_[i];
    x /= p_;
    y /= p_;
  }
  return out;
}

Elem FieldTower::slow_mul(Elem x, Elem y) const {
  if (r_ == 1) {
    return static_cast<Elem>(std::uint64_t{x} * y % p_);
  }
  Poly a(r_), b(r_);
  for (std::uint32_t i = 0; i < r_; ++i) {
    a[i] = x % p_;
    b[i] = y % p_;
    x /= p_;
    y /= p_;
  }
  Poly f(modulus_.begin(), modulus_.end());
  Poly prod = poly_mulmod(a, b, f, p_);
  Elem out = 0;
  for (std::size_t i = 0; i < prod.size(); ++i) {
    out += static_cast<Elem>(prod[i]) * pow_p_[i];
  }
  return out;
}

TowerPtr FieldTower::build(std::uint32_t p, std::uint32_t r,
                           std::uint64_t size_cap) {
  if (!is_prime(p)) {
    throw std::invalid_argument("characteristic " + std::to_string(p) +
                                " is not prime");
  }
  if (r < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    q *= p;
    if (q > size_cap) {
      throw std::invalid_argument("field size " + std::to_string(p) + "^" +
                                  std::to_string(r) + " exceeds cap " +
                                  std::to_string(size_cap));
    }
  }

  std::shared_ptr<FieldTower> t(new FieldTower());
  t->p_ = p;
  t->r_ = r;
  t->q_ = static_cast<std::uint32_t>(q);
  t->pow_p_.resize(r + 1);
  t->pow_p_[0] = 1;
  for (std::uint32_t i = 1; i <= r; ++i) t->pow_p_[i] = t->pow_p_[i - 1] * p;
  for (std::uint32_t k = 1; k <= r; ++k) {
    if (r % k == 0) t->subfield_degrees_.push_back(k);
  }

  // Least monic irreducible by the integer encoding of c_0..c_{r-1}.
  for (std::uint64_t n = 0; n < q; ++n) {
    Poly f(r + 1);
    std::uint64_t m = n;
    for (std::uint32_t i = 0; i < r; ++i) {
      f[i] = m % p;
      m /= p;
    }
    f[r] = 1;
    if (is_irreducible(f, r, p)) {
      t->modulus_.assign(f.begin(), f.end());
      break;
    }
  }
  if (t->modulus_.empty()) {
    throw std::logic_error("no irreducible polynomial found");
  }

  const std::uint64_t order = q - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](Elem x, std::uint64_t e) {
    Elem result = 1;
    while (e > 0) {
      if (e & 1) result = t->slow_mul(result, x);
      x = t->slow_mul(x, x);
      e >>= 1;
    }
    return result;
  };
  for (Elem g = 1; g < q; ++g) {
    bool primitive = true;
    for (auto l : factors) {
      if (slow_pow(g, order / l) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      t->generator_ = g;
      break;
    }
  }

  // Multiplication by g is F_p-linear; tabulate c * g * x^i per digit.
  std::vector<Elem> by_g;
  if (r > 1) {
    by_g.resize(std::size_t{r} * p);
    for (std::uint32_t i = 0; i < r; ++i) {
      for (std::uint32_t c = 0; c < p; ++c) {
        by_g[std::size_t{i} * p + c] =
            t->slow_mul(t->generator_, c * t->pow_p_[i]);
      }
    }
  }
  t->exp_.resize(order);
  t->log_.assign(q, 0);
  Elem cur = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    t->exp_[i] = cur;
    t->log_[cur] = static_cast<std::uint32_t>(i);
    if (r == 1) {
      cur = static_cast<Elem>(std::uint64_t{cur} * t->generator_ % p);
    } else {
      Elem next = 0;
      Elem rest = cur;
      for (std::uint32_t d = 0; d < r; ++d) {
        next = t->digit_add(next, by_g[std::size_t{d} * p + rest % p]);
        rest /= p;
      }
      cur = next;
    }
  }
  if (cur != 1) throw std::logic_error("generator order mismatch");

  if (p != 2 && r > 1) {
    t->zech_.resize(order);
    for (std::uint64_t d = 0; d < order; ++d) {
      const Elem s = t->digit_add(1, t->exp_[d]);
      t->zech_[d] = s == 0 ? static_cast<std::uint32_t>(order) : t->log_[s];
    }
  }
  if (p != 2) t->half_order_ = static_cast<std::uint32_t>(order / 2);
  if (p == 2) {
    t->as_columns_.resize(r);
    for (std::uint32_t i = 0; i < r; ++i) {
      const Elem e = Elem{1} << i;
      t->as_columns_[i] = t->mul(e, e) ^ e;
    }
  }
  return t;
}

TowerPtr FieldTower::from_spec(const std::string& spec,
                               std::uint64_t size_cap) {
  const auto caret = spec.find('^');
  unsigned long p = 0;
  unsigned long r = 1;
  try {
    std::size_t used = 0;
    const std::string head = spec.substr(0, caret);
    p = std::stoul(head, &used);
    bool ok = used == head.size();
    if (caret != std::string::npos) {
      const std::string tail = spec.substr(caret + 1);
      r = std::stoul(tail, &used);
      ok = ok && used == tail.size();
    }
    if (!ok || p > 0xffffffffUL || r > 64) throw std::invalid_argument(spec);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed field spec '" + spec +
                                "', expected p^r");
  }
  return build(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(r),
               size_cap);
}

Elem FieldTower::from_int(std::int64_t n) const {
  std::int64_t m = n % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<Elem>(m);
}

Elem FieldTower::add(Elem x, Elem y) const {
  if (p_ == 2) return x ^ y;
  if (r_ == 1) {
    const Elem s = x + y;
    return s >= p_ ? s - p_ : s;
  }
  if (x == 0) return y;
  if (y == 0) return x;
  const std::uint32_t order = q_ - 1;
  std::uint32_t d = log_[y] >= log_[x] ? log_[y] - log_[x]
                                       : log_[y] + order - log_[x];
  const std::uint32_t z = zech_[d];
  if (z == order) return 0;
  std::uint32_t s = log_[x] + z;
  if (s >= order) s -= order;
  return exp_[s];
}

Elem FieldTower::neg(Elem x) const {
  if (p_ == 2 || x == 0) return x;
  if (r_ == 1) return p_ - x;
  std::uint32_t s = log_[x] + half_order_;
  if (s >= q_ - 1) s -= q_ - 1;
  return exp_[s];
}

Elem FieldTower::inv(Elem x) const {
  if (x == 0) throw std::domain_error("inverse of zero");
  const std::uint32_t l = log_[x];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

Elem FieldTower::pow(Elem x, std::uint64_t e) const {
  if (e == 0) return 1;
  if (x == 0) return 0;
  const std::uint64_t order = q_ - 1;
  const auto l = static_cast<unsigned __int128>(log_[x]) * (e % order);
  return exp_[static_cast<std::uint64_t>(l % order)];
}

Elem FieldTower::frobenius(Elem x, std::uint32_t k) const {
  if (x == 0) return 0;
  k %= r_;
  const std::uint64_t order = q_ - 1;
  if (order == 0) return x;
  std::uint64_t mult = 1;
  for (std::uint32_t i = 0; i < k; ++i) mult = mult * p_ % order;
  return exp_[std::uint64_t{log_[x]} * mult % order];
}

Elem FieldTower::trace(Elem x, std::uint32_t down_to_k) const {
  if (!divides_degree(down_to_k)) {
    throw std::invalid_argument("trace target degree " +
                                std::to_string(down_to_k) +
                                " does not divide " + std::to_string(r_));
  }
  Elem acc = 0;
  Elem term = x;
  for (std::uint32_t i = 0; i < r_ / down_to_k; ++i) {
    acc = add(acc, term);
    term = frobenius(term, down_to_k);
  }
  return acc;
}

std::uint32_t FieldTower::trace_to_prime(Elem x, std::uint32_t k) const {
  Elem acc = 0;
  Elem term = x;
  for (std::uint32_t i = 0; i < k; ++i) {
    acc = add(acc, term);
    term = frobenius(term, 1);
  }
  if (acc >= p_) throw std::logic_error("trace left the prime subfield");
  return acc;
}

std::optional<Elem> FieldTower::solve_artin_schreier(Elem w) const {
  if (p_ != 2) {
    throw std::invalid_argument("Artin-Schreier solve needs characteristic 2");
  }
  // Gaussian elimination over F_2 on the columns of z -> z^2 + z, tracking
  // which original columns combine into each reduced vector.
  std::vector<std::pair<Elem, Elem>> basis;  // (reduced vector, combination)
  for (std::uint32_t i = 0; i < r_; ++i) {
    Elem v = as_columns_[i];
    Elem combo = Elem{1} << i;
    for (const auto& [bv, bc] : basis) {
      if (v & (Elem{1} << (31 - __builtin_clz(bv)))) {
        v ^= bv;
        combo ^= bc;
      }
    }
    if (v != 0) {
      // Keep basis sorted by leading bit, highest first.
      auto it = basis.begin();
      while (it != basis.end() && __builtin_clz(it->first) < __builtin_clz(v)) ++it;
      basis.insert(it, {v, combo});
    }
  }
  Elem target = w;
  Elem z = 0;
  for (const auto& [bv, bc] : basis) {
    if (target & (Elem{1} << (31 - __builtin_clz(bv)))) {
      target ^= bv;
      z ^= bc;
    }
  }
  if (target != 0) return std::nullopt;
  return z;
}

bool FieldTower::is_square(Elem x) const {
  if (p_ == 2) throw std::invalid_argument("is_square needs odd characteristic");
  return x == 0 || log_[x] % 2 == 0;
}

bool FieldTower::is_square_in_subfield(Elem x, std::uint32_t k) const {
  if (!divides_degree(k)) throw std::invalid_argument("bad subfield degree");
  if (x == 0 || p_ == 2) return true;
  const std::uint64_t sub_order = std::uint64_t{pow_p_[k]} - 1;
  const std::uint64_t step = (q_ - 1) / sub_order;
  if (log_[x] % step != 0) {
    throw std::invalid_argument("element not in the requested subfield");
  }
  return (log_[x] / step) % 2 == 0;
}

std::complex<double> FieldTower::additive_character(Elem x) const {
  return subfield_character(x, r_);
}

std::complex<double> FieldTower::subfield_character(Elem x,
                                                    std::uint32_t k) const {
  const std::uint32_t t = trace_to_prime(x, k);
  return std::polar(1.0, 2.0 * std::numbers::pi * t / p_);
}

nlohmann::json FieldTower::descriptor() const {
  return {{"p", p_},
          {"r", r_},
          {"modulus", modulus_},
          {"generator", generator_}};
}

std::string FieldTower::name() const {
  return std::to_string(p_) + "^" + std::to_string(r_);
}

}  // namespace pdlab
