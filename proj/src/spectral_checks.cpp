#include "pdlab/spectral_checks.hpp"

#include <cmath>
#include <stdexcept>

#include "pdlab/set_algebra.hpp"

namespace pdlab {

namespace {

void require_in_subfield(const SubfieldHandle& sub, Elem x, const char* what) {
  if (!sub.elements.contains(x)) {
    throw std::invalid_argument(std::string(what) + " must lie in the subfield");
  }
}

}  // namespace

Elem VvInstance::dot(Elem x, Elem y) const {
  const auto& f = *field;
  return f.add(f.mul(static_cast<Elem>(coord_a[x]), static_cast<Elem>(coord_a[y])),
               f.mul(static_cast<Elem>(coord_b[x]), static_cast<Elem>(coord_b[y])));
}

nlohmann::json VvInstance::to_json() const {
  return {{"field", field->name()},
          {"subfield_degree", sub.k},
          {"subfield_size", sub.size()},
          {"xi", xi},
          {"V_size", v.size()}};
}

VvInstance make_vv_instance(const TowerPtr& field) {
  if (field->r() % 3 != 0) {
    throw std::invalid_argument("plane instances need 3 | r, got " + field->name());
  }
  const auto& f = *field;
  VvInstance inst{field, subfield(field, f.r() / 3), 0, FqSet(field), {}, {}};
  const auto fl = inst.sub.elements.elements();
  auto plane_of = [&](Elem xi) {
    FqSet v(field);
    for (Elem a : fl)
      for (Elem b : fl) v.insert(f.add(a, f.mul(b, xi)));
    return v;
  };
  for (Elem xi = 0; xi < f.q(); ++xi) {
    if (inst.sub.elements.contains(xi)) continue;
    auto v = plane_of(xi);
    if (!v.contains(f.mul(xi, xi))) {
      inst.xi = xi;
      inst.v = std::move(v);
      break;
    }
  }
  inst.coord_a.assign(f.q(), -1);
  inst.coord_b.assign(f.q(), -1);
  for (Elem a : fl) {
    for (Elem b : fl) {
      const Elem x = f.add(a, f.mul(b, inst.xi));
      inst.coord_a[x] = a;
      inst.coord_b[x] = b;
    }
  }
  return inst;
}

std::size_t vv_formula(std::uint32_t p, std::size_t n) {
  if (p == 2) return (n * n * n + n * n) / 2;
  return (n * n * n + 2 * n * n - n) / 2;
}

std::size_t vv_triple_count(std::uint32_t p, std::size_t n) {
  if (p == 2) {
    // b = 0 always solvable; b != 0 needs ac / b^2 in the trace-0 half.
    const std::size_t s = n / 2;
    return n * n + (n - 1) * (2 * n - 1 + (n - 1) * (s - 1));
  }
  return (n * n * n + 2 * n * n - n) / 2;
}

nlohmann::json VvCount::to_json() const {
  return {{"count", count},
          {"formula", formula},
          {"match", match},
          {"triple_count", triple_count},
          {"match_triple_count", match_triple_count},
          {"exceeds_half", exceeds_half}};
}

VvCount vv_exact_count(const VvInstance& inst) {
  VvCount c;
  c.count = combine(inst.v, inst.v, SetOp::prod).size();
  c.formula = vv_formula(inst.field->p(), inst.f_size());
  c.match = c.count == c.formula;
  c.triple_count = vv_triple_count(inst.field->p(), inst.f_size());
  c.match_triple_count = c.count == c.triple_count;
  c.exceeds_half = 2 * c.count > inst.field->q();
  return c;
}

bool quadratic_root_criterion(const FieldTower& f, std::uint32_t k, Elem a, Elem b,
                              Elem c) {
  for (Elem x : {a, b, c}) {
    if (!f.in_subfield(x, k)) throw std::invalid_argument("coefficients must lie in F");
  }
  const Elem ac = f.mul(a, c);
  if (f.p() != 2) {
    const Elem disc = f.sub(f.mul(b, b), f.mul(f.from_int(4), ac));
    return f.is_square_in_subfield(disc, k);
  }
  if (b == 0) return true;
  return f.trace_to_prime(f.div(ac, f.mul(b, b)), k) == 0;
}

nlohmann::json KloostermanValue::to_json() const {
  return {{"a", a},
          {"b", b},
          {"re", value.real()},
          {"im", value.imag()},
          {"abs", std::abs(value)},
          {"weil_bound", weil_bound},
          {"within_bound", within_bound}};
}

KloostermanValue kloosterman(const FieldTower& f, const SubfieldHandle& sub, Elem a,
                             Elem b) {
  require_in_subfield(sub, a, "a");
  require_in_subfield(sub, b, "b");
  KloostermanValue k;
  k.a = a;
  k.b = b;
  for (Elem x : sub.elements.elements()) {
    if (x == 0) continue;
    k.value += f.subfield_character(f.add(f.mul(a, x), f.mul(b, f.inv(x))), sub.k);
  }
  k.weil_bound = 2 * std::sqrt(static_cast<double>(sub.size()));
  k.within_bound = (a == 0 && b == 0) || std::abs(k.value) <= k.weil_bound + 1e-6;
  return k;
}

nlohmann::json HisReport::to_json() const {
  nlohmann::json j{{"u", u},
                   {"v", v},
                   {"count", count},
                   {"character_value", character_value},
                   {"tolerance", tolerance},
                   {"character_agrees", character_agrees},
                   {"guaranteed", guaranteed}};
  j["witness"] = witness ? nlohmann::json(*witness) : nlohmann::json(nullptr);
  return j;
}

HisContext::HisContext(const VvInstance& inst, const FqSet& a)
    : inst_(inst), a_(a), diff_(rep_function(a, a, SetOp::diff)) {
  if (!a.is_subset_of(inst.v)) throw std::invalid_argument("A must lie in V");
  const auto& f = *inst.field;
  f_elems_ = inst.sub.elements.elements();
  f_index_.assign(f.q(), -1);
  for (std::size_t i = 0; i < f_elems_.size(); ++i) f_index_[f_elems_[i]] = static_cast<std::int64_t>(i);

  weight_.assign(f.q(), 0.0);
  const auto al = a.elements();
  for (Elem m : inst.v.elements()) {
    std::complex<double> s = 0;
    for (Elem x : al) s += f.subfield_character(f.neg(inst.dot(x, m)), inst.sub.k);
    weight_[m] = std::norm(s);
  }
  const std::size_t n = f_elems_.size();
  kloost_.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      kloost_[i][j] = kloosterman(f, inst.sub, f_elems_[i], f_elems_[j]).value.real();
    }
  }
  const BigInt na = a.size(), nv = inst.v.size(), nf = inst.f_size();
  guaranteed_ = na * na * na * na * nf >= 4 * nv * nv * nv * nv;
}

HisReport HisContext::query(Elem u, Elem v) const {
  if (u == 0 || v == 0) throw std::invalid_argument("u and v must be nonzero");
  if (!inst_.v.contains(u) || !inst_.v.contains(v)) {
    throw std::invalid_argument("u and v must lie in V");
  }
  const auto& f = *inst_.field;
  HisReport rep;
  rep.u = u;
  rep.v = v;
  rep.guaranteed = guaranteed_;
  for (Elem x : f_elems_) {
    if (x == 0) continue;
    const auto term = diff_[f.mul(x, u)] * diff_[f.div(v, x)];
    if (term > 0 && !rep.witness) rep.witness = x;
    rep.count += term;
  }
  // S_u(s) = sum of |A^(m)|^2 over m with u . m = s
  const std::size_t n = f_elems_.size();
  std::vector<double> su(n, 0.0), sv(n, 0.0);
  for (Elem m : inst_.v.elements()) {
    su[f_index_[inst_.dot(u, m)]] += weight_[m];
    sv[f_index_[inst_.dot(v, m)]] += weight_[m];
  }
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total += su[i] * sv[j] * kloost_[i][j];
  }
  const double nv = static_cast<double>(inst_.v.size());
  rep.character_value = total / (nv * nv);
  rep.tolerance = 1e-6 * std::pow(static_cast<double>(n), 3);
  rep.character_agrees =
      std::abs(rep.character_value - static_cast<double>(rep.count)) <= rep.tolerance;
  return rep;
}

HisReport his_pair_exists(const VvInstance& inst, const FqSet& a, Elem u, Elem v) {
  return HisContext(inst, a).query(u, v);
}

nlohmann::json PdaReport::to_json() const {
  return {{"pda_size", pda_size},
          {"vv_size", vv_size},
          {"equal", equal},
          {"containment", rational_json(containment)},
          {"required", required}};
}

PdaReport check_pda_equals_vv(const VvInstance& inst, const FqSet& a) {
  if (!a.is_subset_of(inst.v)) throw std::invalid_argument("A must lie in V");
  if (a.empty()) throw std::invalid_argument("A must be nonempty");
  const auto pda = products_of_differences(a, a, a, a);
  const auto vv = combine(inst.v, inst.v, SetOp::prod);
  PdaReport rep;
  rep.pda_size = pda.size();
  rep.vv_size = vv.size();
  rep.equal = pda == vv;
  rep.containment = Rational(BigInt(rep.pda_size), BigInt(rep.vv_size));
  const BigInt na = a.size(), nv = inst.v.size(), nf = inst.f_size();
  rep.required = na * na * na * na * nf >= 4 * nv * nv * nv * nv;
  return rep;
}

}  // namespace pdlab
