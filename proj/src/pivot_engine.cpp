#include "pdlab/pivot_engine.hpp"

#include <stdexcept>

#include "pdlab/set_algebra.hpp"

namespace pdlab {

namespace {

void require_pivot_input(const FqSet& w, const FqSet& x) {
  require_same_field(w, x);
  if (w.empty()) throw std::invalid_argument("W must be nonempty");
  if (x.empty()) throw std::invalid_argument("X must be nonempty");
  if (x.contains(0)) throw std::invalid_argument("X must not contain 0");
}

Rational size_ratio(std::size_t num, std::size_t den) {
  return Rational(BigInt(num), BigInt(den));
}

nlohmann::json elem_pair(const std::optional<std::pair<Elem, Elem>>& p) {
  if (!p) return nullptr;
  return nlohmann::json::array({p->first, p->second});
}

}  // namespace

Rational PivotRatios::span_product() const {
  return k1 * k1 * k1 * k1 * k2 * k3 * k3 * k3 * k3;
}

Rational PivotRatios::scaling_product() const { return k1 * k1 * k3 * k3 * k3; }

nlohmann::json PivotRatios::to_json() const {
  return {{"K1", rational_json(k1)},
          {"K2", rational_json(k2)},
          {"K3", rational_json(k3)},
          {"K1^4 K2 K3^4", rational_json(span_product())},
          {"K1^2 K3^3", rational_json(scaling_product())}};
}

PivotRatios measure_ratios(const FqSet& w, const FqSet& x) {
  require_pivot_input(w, x);
  const std::size_t n = w.size();
  PivotRatios r;
  r.k1 = size_ratio(combine(w, combine(x, w, SetOp::prod), SetOp::sum).size(), n);
  r.k2 = size_ratio(combine(w, w, SetOp::sum).size(), n);
  std::size_t worst = 0;
  for (Elem a : x.elements()) {
    worst = std::max(worst, combine(w, w.dilate(a), SetOp::sum).size());
  }
  r.k3 = size_ratio(worst, n);
  return r;
}

std::size_t dilate_sumset_size(const FqSet& w, const FqSet& x, Elem xi) {
  require_same_field(w, x);
  const auto& f = w.tower();
  FqSet xs(w.field());
  for (Elem a : x.elements()) xs.insert(f.mul(a, xi));
  return combine(w, xs, SetOp::sum).size();
}

bool is_pivot(const FqSet& w, const FqSet& x, Elem xi) {
  require_pivot_input(w, x);
  const auto& f = w.tower();
  FqSet image(w.field());
  const auto xl = x.elements();
  for (Elem v : w.elements()) {
    for (Elem a : xl) {
      const Elem y = f.add(v, f.mul(a, xi));
      if (image.contains(y)) return false;
      image.insert(y);
    }
  }
  return true;
}

nlohmann::json InvolvedReport::to_json() const {
  nlohmann::json wit = nlohmann::json::array();
  for (const auto& w : witnesses) {
    wit.push_back({{"xi", w.xi}, {"alpha1", w.alpha1}, {"alpha2", w.alpha2},
                   {"v1", w.v1}, {"v2", w.v2}});
  }
  return {{"involved", involved.to_json()},
          {"involved_size", involved.size()},
          {"span", span.to_json()},
          {"span_size", span.size()},
          {"subfield_degree", subfield_degree},
          {"subfield_size", subfield_size},
          {"ratios", ratios.to_json()},
          {"hypotheses_hold", hypotheses_hold},
          {"witnesses", wit}};
}

InvolvedReport involved_set(const FqSet& w, const FqSet& x) {
  require_pivot_input(w, x);
  const auto& f = w.tower();
  const auto gen = generated_subfield(x);
  InvolvedReport rep{FqSet(w.field()), span_over_subfield(w, gen), gen.k, gen.size(),
                     measure_ratios(w, x), false, {}};
  rep.hypotheses_hold = rep.ratios.span_product() < Rational(BigInt(x.size()));

  const auto wl = w.elements();
  const auto xl = x.elements();
  FqSet seen(w.field());
  for (Elem a1 : xl) {
    for (Elem a2 : xl) {
      if (a1 == a2) continue;
      const Elem scale = f.inv(f.sub(a1, a2));
      for (Elem v1 : wl) {
        for (Elem v2 : wl) {
          const Elem xi = f.mul(scale, f.sub(v2, v1));
          if (seen.contains(xi)) continue;
          seen.insert(xi);
          // v1 + a1 xi = v2 + a2 xi is a collision, so this must agree.
          if (!is_pivot(w, x, xi)) {
            rep.involved.insert(xi);
            rep.witnesses.push_back({xi, a1, a2, v1, v2});
          }
        }
      }
    }
  }
  std::sort(rep.witnesses.begin(), rep.witnesses.end(),
            [](const InvolvedWitness& l, const InvolvedWitness& r) { return l.xi < r.xi; });
  return rep;
}

FqSet involved_brute_force(const FqSet& w, const FqSet& x) {
  require_pivot_input(w, x);
  FqSet out(w.field());
  for (Elem xi = 0; xi < w.tower().q(); ++xi) {
    if (!is_pivot(w, x, xi)) out.insert(xi);
  }
  return out;
}

nlohmann::json InvolvedBoundReport::to_json() const {
  return {{"xi", xi},
          {"size", size},
          {"bound", rational_json(bound)},
          {"holds", holds},
          {"slack", rational_json(slack())}};
}

InvolvedBoundReport verify_involved_bound(const FqSet& w, const FqSet& x, Elem xi) {
  if (is_pivot(w, x, xi)) {
    throw std::invalid_argument("element " + std::to_string(xi) + " is a pivot");
  }
  const auto r = measure_ratios(w, x);
  InvolvedBoundReport rep;
  rep.xi = xi;
  rep.size = dilate_sumset_size(w, x, xi);
  rep.bound = r.k1 * r.k1 * r.k3 * r.k3 * Rational(BigInt(w.size()));
  rep.holds = Rational(BigInt(rep.size)) <= rep.bound;
  return rep;
}

nlohmann::json ClosureReport::to_json() const {
  nlohmann::json j{{"ratios", ratios.to_json()},
                   {"involved_size", involved_size},
                   {"addition_checked", addition_checked},
                   {"multiplication_checked", multiplication_checked}};
  if (addition_checked) {
    j["addition_holds"] = addition_holds;
    j["addition_violation"] = elem_pair(addition_violation);
  } else {
    j["addition_status"] = "hypotheses not satisfied";
  }
  if (multiplication_checked) {
    j["multiplication_holds"] = multiplication_holds;
    j["multiplication_violation"] = elem_pair(multiplication_violation);
  } else {
    j["multiplication_status"] = "hypotheses not satisfied";
  }
  return j;
}

ClosureReport verify_closure(const FqSet& w, const FqSet& x) {
  const auto inv = involved_set(w, x);
  const auto& f = w.tower();
  ClosureReport rep;
  rep.ratios = inv.ratios;
  rep.involved_size = inv.involved.size();
  const Rational nx = Rational(BigInt(x.size()));
  const auto il = inv.involved.elements();

  rep.addition_checked = rep.ratios.span_product() < nx;
  if (rep.addition_checked) {
    rep.addition_holds = true;
    for (Elem a : il) {
      for (Elem b : il) {
        if (!inv.involved.contains(f.add(a, b)) || !inv.involved.contains(f.sub(a, b))) {
          rep.addition_holds = false;
          rep.addition_violation = std::make_pair(a, b);
          break;
        }
      }
      if (!rep.addition_holds) break;
    }
  }

  rep.multiplication_checked = rep.ratios.scaling_product() < nx;
  if (rep.multiplication_checked) {
    rep.multiplication_holds = true;
    // x and x^{-1} for x in X generate <X>_x.
    for (Elem a : x.elements()) {
      const Elem ainv = f.inv(a);
      for (Elem xi : il) {
        if (!inv.involved.contains(f.mul(a, xi)) ||
            !inv.involved.contains(f.mul(ainv, xi))) {
          rep.multiplication_holds = false;
          rep.multiplication_violation = std::make_pair(a, xi);
          break;
        }
      }
      if (!rep.multiplication_holds) break;
    }
  }
  return rep;
}

nlohmann::json SpanTheoremReport::to_json() const {
  return {{"involved", involved.to_json()},
          {"involved_in_span", involved_in_span},
          {"involved_equals_span", involved_equals_span},
          {"dimension", dimension},
          {"size_bound", rational_json(size_bound)},
          {"size_bound_holds", size_bound_holds},
          {"mode", involved.hypotheses_hold ? "asserted" : "report-only"},
          {"ok", ok()}};
}

SpanTheoremReport verify_span_theorem(const FqSet& w, const FqSet& x) {
  SpanTheoremReport rep{involved_set(w, x)};
  const auto& inv = rep.involved;
  rep.involved_in_span = inv.involved.is_subset_of(inv.span);
  rep.involved_equals_span = inv.involved == inv.span;
  std::size_t size = 1;
  while (size < inv.span.size()) {
    size *= inv.subfield_size;
    ++rep.dimension;
  }
  const auto& r = inv.ratios;
  rep.size_bound = Rational(BigInt(inv.span.size())) / (2 * r.k1 * r.k1 * r.k3 * r.k3);
  rep.size_bound_holds = Rational(BigInt(w.size())) >= rep.size_bound;
  return rep;
}

nlohmann::json SubfieldDetection::to_json() const {
  return {{"theorem", theorem.to_json()},
          {"size_window", size_window},
          {"cube_subfield", cube_subfield},
          {"plane", plane},
          {"w_bound", rational_json(w_bound)},
          {"w_bound_holds", w_bound_holds},
          {"ok", ok()}};
}

SubfieldDetection detect_subfield(const FqSet& w, const FqSet& x) {
  SubfieldDetection rep{verify_span_theorem(w, x)};
  const auto& inv = rep.theorem.involved;
  const BigInt q = w.tower().q();
  const BigInt nx = x.size();
  const BigInt nw = w.size();
  // q^{1/4} < |X| < q^{1/2} and q^{1/2} < |W| <= q^{2/3}, in integer powers.
  rep.size_window = q < nx * nx * nx * nx && nx * nx < q && q < nw * nw &&
                    nw * nw * nw <= q * q;
  const BigInt fs = inv.subfield_size;
  rep.cube_subfield = fs * fs * fs == q;
  rep.plane = rep.theorem.dimension == 2;
  const auto& r = inv.ratios;
  rep.w_bound = Rational(fs * fs) / (2 * r.k1 * r.k1 * r.k3 * r.k3);
  rep.w_bound_holds = Rational(nw) >= rep.w_bound;
  return rep;
}

}  // namespace pdlab
