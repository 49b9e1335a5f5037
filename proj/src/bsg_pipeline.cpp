#include "pdlab/bsg_pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "pdlab/errors.hpp"
#include "pdlab/moment_counters.hpp"
#include "pdlab/set_algebra.hpp"

namespace pdlab {

namespace {

Rational rat(std::int64_t v) { return Rational(BigInt(v)); }

void check_lambda(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) {
    throw std::invalid_argument("lambda must lie in (0, 1)");
  }
}

long double to_ld(const Rational& v) { return v.convert_to<long double>(); }

Rational size_ratio(std::size_t num, std::size_t den) {
  return Rational(BigInt(num), BigInt(den));
}

}  // namespace

nlohmann::json PopularitySelection::to_json() const {
  return {{"part", part},
          {"selected", selected},
          {"lambda", rational_json(lambda)},
          {"mu", rational_json(mu)},
          {"M", rational_json(m)},
          {"W", rational_json(w)},
          {"level", rational_json(level)},
          {"mass", rational_json(mass)},
          {"guarantee", rational_json(guarantee)},
          {"classes", classes},
          {"meets_log2_bound", meets_log2_bound}};
}

PopularitySelection popularity_level_set(std::span<const std::int64_t> f,
                                         const Rational& lambda,
                                         std::optional<Rational> mu,
                                         std::optional<std::int64_t> m) {
  check_lambda(lambda);
  if (f.empty()) throw std::invalid_argument("empty index set");
  std::int64_t total = 0;
  for (auto v : f) {
    if (v < 0) throw std::invalid_argument("negative f value");
    if (m && v > *m) throw std::invalid_argument("f exceeds its cap M");
    total += v;
  }
  PopularitySelection sel;
  sel.part = 1;
  sel.lambda = lambda;
  sel.mu = mu ? *mu : rat(total);
  if (sel.mu <= 0) throw std::invalid_argument("mu must be positive");
  if (rat(total) < sel.mu) {
    throw std::invalid_argument("sum of f is " + std::to_string(total) +
                                ", below mu = " + sel.mu.str());
  }
  sel.m = m ? rat(*m) : Rational(0);
  sel.w = rat(static_cast<std::int64_t>(f.size()));
  sel.level = lambda * sel.mu / sel.w;
  std::int64_t mass = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (rat(f[i]) >= sel.level) {
      sel.selected.push_back(i);
      mass += f[i];
    }
  }
  sel.mass = rat(mass);
  sel.guarantee = (1 - lambda) * sel.mu;
  sel.meets_log2_bound = sel.mass >= sel.guarantee;
  if (sel.mass < sel.guarantee) {
    throw SelfCheckError("level set carries " + sel.mass.str() + " < " +
                         sel.guarantee.str());
  }
  if (m && rat(static_cast<std::int64_t>(sel.selected.size())) * sel.m < sel.guarantee) {
    throw SelfCheckError("level set smaller than (1 - lambda) mu / M");
  }
  return sel;
}

PopularitySelection popularity_dyadic(std::span<const std::int64_t> f,
                                      std::span<const std::int64_t> w,
                                      const Rational& lambda, std::int64_t m,
                                      std::optional<Rational> mu) {
  check_lambda(lambda);
  if (f.empty()) throw std::invalid_argument("empty index set");
  if (f.size() != w.size()) throw std::invalid_argument("f and w differ in length");
  if (m < 1) throw std::invalid_argument("M must be at least 1");
  std::int64_t total = 0, weight = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || w[i] < 0) throw std::invalid_argument("negative f or w value");
    if (f[i] > m) throw std::invalid_argument("f exceeds its cap M");
    total += f[i] * w[i];
    weight += w[i];
  }
  PopularitySelection sel;
  sel.part = 2;
  sel.lambda = lambda;
  sel.mu = mu ? *mu : rat(total);
  if (sel.mu <= 0) throw std::invalid_argument("mu must be positive");
  if (rat(total) < sel.mu) {
    throw std::invalid_argument("weighted sum is " + std::to_string(total) +
                                ", below mu = " + sel.mu.str());
  }
  sel.m = rat(m);
  sel.w = rat(weight);
  const Rational base = lambda * sel.mu / sel.w;
  const BigInt num = numerator(base), den = denominator(base);

  // Class j holds base 2^j <= f < base 2^{j+1}.
  std::size_t classes = 0;
  while (num << classes <= BigInt(m) * den) ++classes;
  std::map<std::int64_t, int> class_of;
  auto class_index = [&](std::int64_t v) {
    auto it = class_of.find(v);
    if (it != class_of.end()) return it->second;
    int j = -1;
    const BigInt scaled = BigInt(v) * den;
    while (j + 1 < static_cast<int>(classes) && (num << (j + 1)) <= scaled) ++j;
    class_of.emplace(v, j);
    return j;
  };
  std::vector<std::int64_t> mass(classes, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int j = class_index(f[i]);
    if (j >= 0) mass[j] += f[i] * w[i];
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < classes; ++j) {
    if (mass[j] > mass[best]) best = j;
  }
  sel.classes = classes;
  sel.level = base * Rational(BigInt(1) << best);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (class_index(f[i]) == static_cast<int>(best)) sel.selected.push_back(i);
  }
  sel.guarantee = (1 - lambda) * sel.mu / rat(static_cast<std::int64_t>(classes));

  // Direct re-summation of the postconditions.
  std::int64_t direct = 0, sel_weight = 0;
  for (std::size_t i : sel.selected) {
    if (rat(f[i]) < sel.level || rat(f[i]) >= 2 * sel.level) {
      throw SelfCheckError("selected index outside its dyadic window");
    }
    direct += f[i] * w[i];
    sel_weight += w[i];
  }
  sel.mass = rat(direct);
  if (sel.level < base || sel.level > sel.m) {
    throw SelfCheckError("dyadic level outside [lambda mu / W, M]");
  }
  if (sel.mass < sel.guarantee) {
    throw SelfCheckError("dyadic class carries " + sel.mass.str() + " < " +
                         sel.guarantee.str());
  }
  if (sel.mass > 2 * sel.level * rat(sel_weight) ||
      2 * sel.level * rat(sel_weight) > 2 * sel.level * sel.w) {
    throw SelfCheckError("dyadic class mass exceeds 2 N W");
  }
  sel.meets_log2_bound =
      m >= 2 && to_ld(sel.mass) * std::log2(static_cast<long double>(m)) >=
                    to_ld((1 - lambda) * sel.mu);
  return sel;
}

nlohmann::json CsIntersection::to_json() const {
  nlohmann::json pj = nlohmann::json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pj.push_back({pairs[i].first, pairs[i].second, pair_sizes[i]});
  }
  return {{"S", s_size},
          {"T", t_size},
          {"delta", rational_json(delta)},
          {"density", rational_json(density)},
          {"threshold", rational_json(threshold)},
          {"pair_bound", rational_json(pair_bound)},
          {"pairs", pj}};
}

CsIntersection cs_intersection(const std::vector<IndexSet>& family,
                               std::size_t t_size, const Rational& delta) {
  if (family.empty()) throw std::invalid_argument("empty index set");
  if (t_size == 0) throw std::invalid_argument("empty ground set");
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  std::size_t total = 0;
  for (const auto& t : family) {
    if (t.size() != t_size) throw std::invalid_argument("member of wrong size");
    total += t.count();
  }
  CsIntersection cs;
  cs.s_size = family.size();
  cs.t_size = t_size;
  cs.delta = delta;
  cs.density = size_ratio(total, family.size() * t_size);
  if (cs.density < delta) {
    throw std::invalid_argument("density " + cs.density.str() + " below delta " +
                                delta.str());
  }
  cs.threshold = delta * delta * rat(static_cast<std::int64_t>(t_size)) / 2;
  const auto s = rat(static_cast<std::int64_t>(family.size()));
  cs.pair_bound = delta * delta * s * s / 2;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      const std::size_t common = (family[i] & family[j]).count();
      if (rat(static_cast<std::int64_t>(common)) >= cs.threshold) {
        cs.pairs.emplace_back(i, j);
        cs.pair_sizes.push_back(common);
      }
    }
  }
  if (rat(static_cast<std::int64_t>(cs.pairs.size())) < cs.pair_bound) {
    throw SelfCheckError("only " + std::to_string(cs.pairs.size()) +
                         " pairs above the intersection threshold");
  }
  return cs;
}

nlohmann::json BsgCertificate::to_json() const {
  return {{"A_prime", a_prime.to_json()},
          {"B_prime", b_prime.to_json()},
          {"swapped", swapped},
          {"A_size", a_size},
          {"B_size", b_size},
          {"energy", energy},
          {"K_squared", rational_json(k_squared)},
          {"K", static_cast<double>(k)},
          {"L", static_cast<double>(l)},
          {"level", rational_json(level)},
          {"graph_edges", graph_edges},
          {"K0", rational_json(k0)},
          {"anchor", anchor},
          {"anchors_tried", anchors_tried},
          {"min_paths", min_paths},
          {"paths_required", rational_json(paths_required)},
          {"sumset_size", sumset_size},
          {"A_prime_size", a_prime_role()},
          {"B_prime_size", b_prime_role()},
          {"A_lower", static_cast<double>(a_lower)},
          {"B_lower", static_cast<double>(b_lower)},
          {"sumset_upper", static_cast<double>(sumset_upper)},
          {"A_holds", a_holds},
          {"B_holds", b_holds},
          {"sumset_holds", sumset_holds}};
}

namespace {

using Row = std::vector<std::uint64_t>;

bool bit(const Row& r, std::size_t j) { return (r[j >> 6] >> (j & 63)) & 1; }

std::size_t common(const Row& x, const Row& y) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n += std::popcount(x[i] & y[i]);
  return n;
}

}  // namespace

BsgCertificate bsg_extract(const FqSet& a_in, const FqSet& b_in) {
  require_same_field(a_in, b_in);
  if (a_in.size() > kBsgSizeCap || b_in.size() > kBsgSizeCap) {
    throw CostGuardError("BSG extraction is capped at " + std::to_string(kBsgSizeCap) +
                         " elements per set");
  }
  if (a_in.empty() || b_in.empty()) throw std::invalid_argument("empty set");
  BsgCertificate cert{a_in, b_in};
  cert.swapped = b_in.size() > a_in.size();
  const FqSet& a = cert.swapped ? b_in : a_in;
  const FqSet& b = cert.swapped ? a_in : b_in;
  const auto& fld = a.tower();
  const auto ea = a.elements(), eb = b.elements();
  const std::size_t na = ea.size(), nb = eb.size();
  cert.a_size = na;
  cert.b_size = nb;

  const RepFn r = rep_function(a, b, SetOp::sum);
  std::int64_t e = 0;
  for (auto c : r.counts) e += c * c;
  cert.energy = e;
  const std::int64_t nab = static_cast<std::int64_t>(na * nb);
  if (e <= nab) throw std::invalid_argument("degenerate energy E(A,B) = |A||B|");
  const BigInt nab_big(nab);
  cert.k_squared = Rational(nab_big * nab_big * nab_big, BigInt(e) * BigInt(e));
  cert.k = std::pow(static_cast<long double>(nab), 1.5L) / static_cast<long double>(e);
  cert.l = std::log2(static_cast<long double>(nb));

  // Dyadic level on r_{A+B} over A x B.
  std::vector<std::int64_t> f(na * nb), ones(na * nb, 1);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) f[i * nb + j] = r[fld.add(ea[i], eb[j])];
  }
  const auto sel = popularity_dyadic(f, ones, Rational(1, 2),
                                     static_cast<std::int64_t>(nb), Rational(BigInt(e)));
  cert.level = sel.level;
  const std::size_t words = (nb + 63) / 64;
  std::vector<Row> adj(na, Row(words, 0));
  for (std::size_t idx : sel.selected) {
    adj[idx / nb][(idx % nb) >> 6] |= std::uint64_t{1} << ((idx % nb) & 63);
  }
  const std::size_t g = sel.selected.size();
  cert.graph_edges = g;
  cert.k0 = Rational(nab_big, BigInt(g));

  // Codegrees and length-3 path counts a - b' - a' - b.
  std::vector<std::int64_t> codeg(na * na, 0), paths(na * nb, 0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = i; j < na; ++j) {
      codeg[i * na + j] = codeg[j * na + i] =
          static_cast<std::int64_t>(common(adj[i], adj[j]));
    }
  }
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const std::int64_t c = codeg[i * na + j];
      if (c == 0) continue;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = adj[j][w];
        while (bits != 0) {
          paths[i * nb + w * 64 + std::countr_zero(bits)] += c;
          bits &= bits - 1;
        }
      }
    }
  }

  // High-degree part A1 and the good-pair threshold eps |B| / (2 K1^2).
  std::vector<std::size_t> deg(na);
  std::vector<bool> in_a1(na);
  std::size_t a1_size = 0;
  for (std::size_t i = 0; i < na; ++i) {
    deg[i] = common(adj[i], adj[i]);
    in_a1[i] = 2 * na * deg[i] >= g;
    a1_size += in_a1[i];
  }
  const Rational eps = 1 / (16 * cert.k0);
  const Rational k1 = 2 * cert.k0 * size_ratio(a1_size, na);
  const Rational good = eps * rat(static_cast<std::int64_t>(nb)) / (2 * k1 * k1);
  const BigInt g_big(g);
  const BigInt g5 = g_big * g_big * g_big * g_big * g_big;
  const BigInt nab4 = nab_big * nab_big * nab_big * nab_big;
  cert.paths_required = Rational(g5, nab4 * 4096);

  for (std::size_t anchor = 0; anchor < nb; ++anchor) {
    ++cert.anchors_tried;
    std::vector<std::size_t> inner;  // A''
    for (std::size_t i = 0; i < na; ++i) {
      if (in_a1[i] && bit(adj[i], anchor)) inner.push_back(i);
    }
    if (inner.empty()) continue;
    const auto inner_size = rat(static_cast<std::int64_t>(inner.size()));
    std::vector<std::size_t> ap;
    for (std::size_t i : inner) {
      std::int64_t bad = 0;
      for (std::size_t j : inner) bad += rat(codeg[i * na + j]) < good;
      if (rat(bad) <= 2 * eps * inner_size) ap.push_back(i);
    }
    if (ap.empty()) continue;
    const Rational col_need = inner_size / (4 * cert.k0);
    std::vector<std::size_t> bp;
    std::int64_t min_paths = -1;
    for (std::size_t j = 0; j < nb; ++j) {
      std::int64_t hits = 0;
      for (std::size_t i : inner) hits += bit(adj[i], j);
      if (rat(hits) < col_need) continue;
      std::int64_t col_min = -1;
      for (std::size_t i : ap) {
        const auto pc = paths[i * nb + j];
        if (col_min < 0 || pc < col_min) col_min = pc;
      }
      if (Rational(BigInt(col_min)) < cert.paths_required) continue;
      bp.push_back(j);
      if (min_paths < 0 || col_min < min_paths) min_paths = col_min;
    }
    if (bp.empty()) continue;
    const BigInt sa(ap.size()), sb(bp.size());
    const bool a_ok = sa * sa * 32 * nab_big * nab_big >=
                      BigInt(na) * BigInt(na) * g_big * g_big;
    const bool b_ok = sb * 4 * nab_big >= BigInt(nb) * g_big;
    if (!a_ok || !b_ok) continue;

    cert.anchor = eb[anchor];
    cert.min_paths = min_paths;
    FqSet a_out(a.field()), b_out(b.field());
    for (std::size_t i : ap) a_out.insert(ea[i]);
    for (std::size_t j : bp) b_out.insert(eb[j]);
    cert.sumset_size = combine(a_out, b_out, SetOp::sum).size();
    const auto sqrt2 = std::sqrt(2.0L);
    cert.a_lower = static_cast<long double>(na) / (16 * sqrt2 * cert.l * cert.k);
    cert.b_lower = static_cast<long double>(nb) / (16 * cert.l * cert.k);
    cert.sumset_upper = 131072.0L * cert.k * cert.k * cert.k * cert.l * cert.l *
                        std::sqrt(static_cast<long double>(nab));
    cert.a_holds = static_cast<long double>(ap.size()) >= cert.a_lower;
    cert.b_holds = static_cast<long double>(bp.size()) >= cert.b_lower;
    cert.sumset_holds = static_cast<long double>(cert.sumset_size) <= cert.sumset_upper;
    if (cert.swapped) {
      cert.a_prime = std::move(b_out);
      cert.b_prime = std::move(a_out);
    } else {
      cert.a_prime = std::move(a_out);
      cert.b_prime = std::move(b_out);
    }
    return cert;
  }
  throw SelfCheckError("no anchor produced a verified paths-of-length-3 candidate");
}

nlohmann::json StructureCertificate::to_json() const {
  return {{"K", rational_json(k)},
          {"energy_sum", int_json(energy_sum)},
          {"B1", b1.to_json()},
          {"extracted", extracted},
          {"degenerate", degenerate},
          {"cs_delta", rational_json(cs_delta)},
          {"cs_pairs", cs_pairs},
          {"x0", x0},
          {"A_prime", a_prime.to_json()},
          {"X_prime", x_prime.to_json()},
          {"a_bar", a_bar},
          {"a_bar_bar", a_bar_bar},
          {"pigeon_count", pigeon_count},
          {"tau", rational_json(tau)},
          {"popular_pairs", popular_pairs},
          {"N", rational_json(n_level)},
          {"A_star", a_star.to_json()},
          {"A1", a1.to_json()},
          {"ratios",
           {{"A1_plus_XA1", rational_json(a1_plus_xa1)},
            {"A1_minus_XA1", rational_json(a1_minus_xa1)},
            {"A1_plus_A1", rational_json(a1_plus_a1)},
            {"A1_minus_A1", rational_json(a1_minus_a1)},
            {"A1_density", rational_json(a1_density)},
            {"X_density", rational_json(x_density)},
            {"A_prime_plus", rational_json(a_prime_plus)},
            {"A_prime_minus", rational_json(a_prime_minus)},
            {"A_prime_dilate_max", rational_json(a_prime_dilate_max)}}},
          // Asymptotic exponents of K in the matching upper/lower bounds.
          // Recorded only; the implied constants are unknown.
          {"exponents",
           {{"A1_density", -85},
            {"X_density", -5},
            {"A1_plus_XA1", 226},
            {"A1_pm_A1", 92},
            {"A1_pm_xA1", 126}}}};
}

StructureCertificate energy_to_structure(const FqSet& a, const FqSet& x,
                                         const Rational& k) {
  require_same_field(a, x);
  const auto& fld = a.tower();
  if (k <= 0) throw std::invalid_argument("K must be positive");
  if (a.size() < 2) throw std::invalid_argument("A needs at least 2 elements");
  if (x.empty()) throw std::invalid_argument("X is empty");
  if (x.contains(0)) throw std::invalid_argument("X must not contain 0");
  const auto xs = x.elements();
  const std::int64_t na = static_cast<std::int64_t>(a.size());

  const FqSet none(a.field());
  StructureCertificate cert{.k = k,
                            .energy_sum = 0,
                            .b1 = none,
                            .a_prime = none,
                            .x_prime = none,
                            .a_star = none,
                            .a1 = none};
  std::vector<std::int64_t> energies;
  for (Elem b : xs) {
    energies.push_back(energy(a, b, a));
    cert.energy_sum += energies.back();
  }
  const Rational mu = Rational(BigInt(na) * na * na * BigInt(xs.size())) / k;
  if (Rational(cert.energy_sum) < mu) {
    throw std::invalid_argument("energy hypothesis fails: sum E(A, xi A) = " +
                                cert.energy_sum.str() + " < " + mu.str());
  }

  // Popular dilates.
  const auto pop = popularity_level_set(energies, Rational(1, 2), mu);
  std::vector<Elem> b1;
  for (std::size_t i : pop.selected) {
    b1.push_back(xs[i]);
    cert.b1.insert(xs[i]);
  }

  // One BSG extraction per popular dilate.
  const auto ea = a.elements();
  const std::size_t t_size = ea.size() * ea.size();
  std::vector<std::size_t> index_of(fld.q(), 0);
  for (std::size_t i = 0; i < ea.size(); ++i) index_of[ea[i]] = i;
  std::vector<FqSet> first, second;
  std::vector<IndexSet> family;
  for (std::size_t i = 0; i < b1.size(); ++i) {
    const Elem b = b1[i];
    if (energies[pop.selected[i]] == na * na) {
      cert.degenerate.push_back(b);
      continue;
    }
    const auto bsg = bsg_extract(a, a.dilate(b));
    first.push_back(bsg.a_prime);
    second.push_back(bsg.b_prime.dilate(fld.inv(b)));
    cert.extracted.push_back(b);
    IndexSet t(t_size);
    for (Elem u : first.back().elements()) {
      for (Elem v : second.back().elements()) t.set(index_of[u] * ea.size() + index_of[v]);
    }
    family.push_back(std::move(t));
  }
  if (family.empty()) throw PipelineError("bsg", "every popular dilate is degenerate");

  std::size_t total = 0;
  for (const auto& t : family) total += t.count();
  cert.cs_delta = size_ratio(total, family.size() * t_size);
  const auto cs = cs_intersection(family, t_size, cert.cs_delta);
  cert.cs_pairs = cs.pairs.size();
  std::vector<std::size_t> partners(family.size(), 0);
  for (const auto& [s, s2] : cs.pairs) ++partners[s2];
  const std::size_t star =
      std::max_element(partners.begin(), partners.end()) - partners.begin();
  if (partners[star] == 0) throw PipelineError("pigeonhole", "no intersecting pairs");
  cert.x0 = cert.extracted[star];
  cert.a_prime = second[star];
  const Elem star_inv = fld.inv(cert.x0);
  for (const auto& [s, s2] : cs.pairs) {
    if (s2 == star) cert.x_prime.insert(fld.mul(cert.extracted[s], star_inv));
  }

  const auto& ap_set = cert.a_prime;
  const auto ap = ap_set.elements();
  const auto xp = cert.x_prime.elements();
  const std::size_t n = ap.size();
  if (n == 0) throw PipelineError("bsg", "empty A'");
  {
    const auto plus = combine(ap_set, ap_set, SetOp::sum).size();
    const auto minus = combine(ap_set, ap_set, SetOp::diff).size();
    cert.a_prime_plus = size_ratio(plus, n);
    cert.a_prime_minus = size_ratio(minus, n);
    std::size_t worst = 0;
    for (Elem b : xp) {
      const auto bd = ap_set.dilate(b);
      worst = std::max({worst, combine(ap_set, bd, SetOp::sum).size(),
                        combine(ap_set, bd, SetOp::diff).size()});
    }
    cert.a_prime_dilate_max = size_ratio(worst, n);
  }

  // Pigeonhole (a_bar, a_bar_bar) maximising #{a2 - a_bar_bar = b (a1 - a_bar)}.
  if (static_cast<double>(n) * n * n * xp.size() > 5e8) {
    throw CostGuardError("pigeonhole over A' x A' too large");
  }
  std::int64_t best = -1;
  std::vector<std::int64_t> hist(fld.q());
  for (Elem abar : ap) {
    std::fill(hist.begin(), hist.end(), 0);
    for (Elem a1 : ap) {
      const Elem d = fld.sub(a1, abar);
      for (Elem b : xp) {
        const Elem y = fld.mul(b, d);
        for (Elem a2 : ap) {
          const Elem c = fld.sub(a2, y);
          if (ap_set.contains(c)) ++hist[c];
        }
      }
    }
    for (Elem c : ap) {
      if (hist[c] > best) {
        best = hist[c];
        cert.a_bar = abar;
        cert.a_bar_bar = c;
      }
    }
  }
  cert.pigeon_count = best;

  // B_a = {b : b (a - a_bar) in A' - a_bar_bar}.
  std::vector<IndexSet> ba(n, IndexSet(xp.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const Elem d = fld.sub(ap[i], cert.a_bar);
    for (std::size_t j = 0; j < xp.size(); ++j) {
      if (ap_set.contains(fld.add(fld.mul(xp[j], d), cert.a_bar_bar))) ba[i].set(j);
    }
  }
  std::vector<std::int64_t> pair_f(n * n), ones(n * n, 1);
  std::int64_t pair_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      pair_f[i * n + j] = static_cast<std::int64_t>((ba[i] & ba[j]).count());
      pair_total += pair_f[i * n + j];
    }
  }
  if (pair_total == 0) throw PipelineError("pairs", "all B_a are empty");
  const auto pairs = popularity_dyadic(pair_f, ones, Rational(1, 2),
                                       static_cast<std::int64_t>(xp.size()));
  cert.tau = pairs.level;
  cert.popular_pairs = pairs.selected.size();

  std::vector<std::int64_t> partner_count(n, 0), ones_n(n, 1);
  for (std::size_t idx : pairs.selected) ++partner_count[idx / n];
  const auto rows = popularity_dyadic(partner_count, ones_n, Rational(1, 2),
                                      static_cast<std::int64_t>(n));
  cert.n_level = rows.level;
  for (std::size_t i : rows.selected) cert.a_star.insert(ap[i]);
  if (cert.a_star.empty()) throw PipelineError("rows", "no popular rows");
  cert.a1 = cert.a_star.translate(fld.neg(cert.a_bar));

  const auto& a1 = cert.a1;
  const std::size_t m = a1.size();
  const auto xa1 = combine(cert.x_prime, a1, SetOp::prod);
  cert.a1_plus_xa1 = size_ratio(combine(a1, xa1, SetOp::sum).size(), m);
  cert.a1_minus_xa1 = size_ratio(combine(a1, xa1, SetOp::diff).size(), m);
  cert.a1_plus_a1 = size_ratio(combine(a1, a1, SetOp::sum).size(), m);
  cert.a1_minus_a1 = size_ratio(combine(a1, a1, SetOp::diff).size(), m);
  cert.a1_density = size_ratio(m, a.size());
  cert.x_density = size_ratio(cert.x_prime.size(), x.size());
  return cert;
}

}  // namespace pdlab
