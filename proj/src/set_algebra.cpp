#include "pdlab/set_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace pdlab {

std::string to_string(SetOp op) {
  switch (op) {
    case SetOp::sum: return "sum";
    case SetOp::diff: return "diff";
    case SetOp::prod: return "prod";
    case SetOp::ratio: return "ratio";
  }
  return "?";
}

namespace {

Elem apply(const FieldTower& f, Elem a, Elem b, SetOp op) {
  switch (op) {
    case SetOp::sum: return f.add(a, b);
    case SetOp::diff: return f.sub(a, b);
    case SetOp::prod: return f.mul(a, b);
    case SetOp::ratio: return f.div(a, b);
  }
  return 0;
}

void fft(std::vector<std::complex<double>>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2 * std::numbers::pi / static_cast<double>(len) *
                       (invert ? -1 : 1);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        // Twiddles computed directly; repeated multiplication drifts.
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(j));
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
  if (invert) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

void cyclic_direct(const RepFn& f, const RepFn& g, RepFn& out) {
  const auto& t = *f.field;
  const std::uint32_t n = t.q() - 1;
  std::vector<std::pair<std::uint32_t, std::int64_t>> fl, gl;
  for (Elem x = 1; x < t.q(); ++x) {
    if (f[x] != 0) fl.emplace_back(t.dlog(x), f[x]);
    if (g[x] != 0) gl.emplace_back(t.dlog(x), g[x]);
  }
  for (const auto& [lu, fu] : fl) {
    for (const auto& [lv, gv] : gl) {
      std::uint32_t s = lu + lv;
      if (s >= n) s -= n;
      out.counts[t.gpow(s)] += fu * gv;
    }
  }
}

void cyclic_fft(const RepFn& f, const RepFn& g, RepFn& out) {
  const auto& t = *f.field;
  const std::size_t n = t.q() - 1;
  std::size_t size = 1;
  while (size < 2 * n) size <<= 1;
  std::vector<std::complex<double>> fa(size), ga(size);
  for (Elem x = 1; x < t.q(); ++x) {
    fa[t.dlog(x)] = static_cast<double>(f[x]);
    ga[t.dlog(x)] = static_cast<double>(g[x]);
  }
  fft(fa, false);
  fft(ga, false);
  for (std::size_t i = 0; i < size; ++i) fa[i] *= ga[i];
  fft(fa, true);
  double worst = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = fa[k].real() + (k + n < size ? fa[k + n].real() : 0.0);
    const double rounded = std::nearbyint(v);
    worst = std::max(worst, std::abs(v - rounded));
    out.counts[t.gpow(k)] += static_cast<std::int64_t>(rounded);
  }
  if (worst >= 0.25) {
    throw std::runtime_error("FFT convolution rounding error " +
                             std::to_string(worst) + " >= 0.25");
  }
}

FqSet sumset_chain(const std::vector<const FqSet*>& parts,
                   const std::vector<SetOp>& ops) {
  FqSet acc = *parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc = combine(acc, *parts[i], ops[i - 1]);
  }
  return acc;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return c;
}

}  // namespace

FqSet combine(const FqSet& a, const FqSet& b, SetOp op) {
  require_same_field(a, b);
  const auto& f = a.tower();
  FqSet out(a.field());
  const auto bl = b.elements();
  for (Elem x : a.elements()) {
    for (Elem y : bl) {
      if (op == SetOp::ratio && y == 0) continue;
      out.insert(apply(f, x, y, op));
    }
  }
  return out;
}

RepFn rep_function(const FqSet& a, const FqSet& b, SetOp op) {
  require_same_field(a, b);
  if (op == SetOp::ratio) {
    throw std::invalid_argument("rep_function does not support ratio");
  }
  const auto& f = a.tower();
  RepFn out(a.field());
  const auto bl = b.elements();
  for (Elem x : a.elements()) {
    for (Elem y : bl) ++out.counts[apply(f, x, y, op)];
  }
  return out;
}

RepFn mul_convolution(const RepFn& f, const RepFn& g, ConvolutionMode mode) {
  if (!f.field->same_field(*g.field)) {
    throw std::invalid_argument("convolution operands in different fields");
  }
  RepFn out(f.field);
  const std::int64_t sf = f.total();
  const std::int64_t sg = g.total();
  out.counts[0] = f[0] * sg + g[0] * sf - f[0] * g[0];
  if (mode == ConvolutionMode::automatic) {
    mode = f.field->q() <= (1u << 13) ? ConvolutionMode::direct
                                      : ConvolutionMode::fft;
  }
  if (mode == ConvolutionMode::direct) {
    cyclic_direct(f, g, out);
  } else {
    cyclic_fft(f, g, out);
  }
  return out;
}

FqSet products_of_differences(const FqSet& a, const FqSet& b, const FqSet& c,
                              const FqSet& d) {
  require_same_field(a, b);
  require_same_field(a, c);
  require_same_field(a, d);
  if (a.empty() || b.empty() || c.empty() || d.empty()) {
    return FqSet(a.field());
  }
  return mul_convolution(rep_function(a, b, SetOp::diff),
                         rep_function(c, d, SetOp::diff))
      .support();
}

FqSet span_over_subfield(const FqSet& w, const SubfieldHandle& f) {
  if (w.empty()) throw std::invalid_argument("span of an empty set");
  require_same_field(w, f.elements);
  const auto& t = w.tower();
  const auto scalars = f.elements.elements();
  FqSet span(w.field());
  span.insert(0);
  // Adjoin one generator at a time: S <- S + F w. Each step closes under
  // addition and F-scaling, so the loop runs at most dim times past the check.
  for (Elem v : w.elements()) {
    if (span.contains(v)) continue;
    const auto current = span.elements();
    FqSet next(w.field());
    for (Elem c : scalars) {
      const Elem cv = t.mul(c, v);
      for (Elem s : current) next.insert(t.add(s, cv));
    }
    span = std::move(next);
  }
  return span;
}

SubfieldHandle generated_subfield(const FqSet& x) {
  const auto& t = x.tower();
  const auto elems = x.elements();
  for (std::uint32_t k : t.subfield_degrees()) {
    const bool inside = std::all_of(elems.begin(), elems.end(), [&](Elem e) {
      return t.in_subfield(e, k);
    });
    if (inside) return subfield(x.field(), k);
  }
  return subfield(x.field(), t.r());
}

std::string to_string(PlunneckeForm form) {
  switch (form) {
    case PlunneckeForm::different_summands: return "different-summands";
    case PlunneckeForm::large_subset: return "large-subset";
    case PlunneckeForm::triangle: return "triangle";
    case PlunneckeForm::mixed_signs: return "mixed-signs";
  }
  return "?";
}

PlunneckeForm parse_plunnecke_form(const std::string& name) {
  for (auto f : {PlunneckeForm::different_summands, PlunneckeForm::large_subset,
                 PlunneckeForm::triangle, PlunneckeForm::mixed_signs}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown Plunnecke form '" + name + "'");
}

Rational PlunneckeReport::ratio() const {
  Rational base = rhs;
  if (form == PlunneckeForm::large_subset) base /= Rational(BigInt(1) << h);
  return Rational(lhs_size) / base;
}

nlohmann::json PlunneckeReport::to_json() const {
  nlohmann::json j{{"form", to_string(form)},
                   {"h", h},
                   {"lhs", int_json(lhs_size)},
                   {"rhs", rational_json(rhs)},
                   {"holds", holds},
                   {"ratio", rational_json(ratio())}};
  if (witness) {
    j["witness"] = *witness;
    j["witness_search"] = witness_search;
  }
  if (!worst_signs.empty()) j["worst_signs"] = worst_signs;
  return j;
}

PlunneckeReport verify_plunnecke_ruzsa(const FqSet& a,
                                       std::span<const FqSet> bs,
                                       PlunneckeForm form) {
  if (a.empty()) throw std::invalid_argument("Plunnecke check needs nonempty A");
  if (bs.empty()) throw std::invalid_argument("Plunnecke check needs summands");
  for (const auto& b : bs) {
    require_same_field(a, b);
    if (b.empty()) throw std::invalid_argument("empty summand");
  }
  const std::size_t h = form == PlunneckeForm::triangle ? 2 : bs.size();
  if (bs.size() < h) throw std::invalid_argument("triangle form needs B_1, B_2");

  const BigInt na = a.size();
  Rational rhs = Rational(na);
  for (std::size_t i = 0; i < h; ++i) {
    rhs *= Rational(BigInt(combine(a, bs[i], SetOp::sum).size()), na);
  }

  PlunneckeReport rep{form, h, 0, rhs, false, std::nullopt, "", ""};
  std::vector<const FqSet*> parts;
  for (std::size_t i = 0; i < h; ++i) parts.push_back(&bs[i]);

  switch (form) {
    case PlunneckeForm::different_summands: {
      rep.lhs_size = sumset_chain(parts, std::vector<SetOp>(h - 1, SetOp::sum)).size();
      break;
    }
    case PlunneckeForm::triangle: {
      rep.lhs_size = combine(bs[0], bs[1], SetOp::diff).size();
      break;
    }
    case PlunneckeForm::mixed_signs: {
      if (h > 16) throw std::invalid_argument("too many summands for sign scan");
      BigInt worst = 0;
      for (std::uint32_t mask = 0; mask < (1u << (h - 1)); ++mask) {
        std::vector<SetOp> ops;
        std::string signs;
        for (std::size_t i = 0; i + 1 < h; ++i) {
          const bool minus = (mask >> i) & 1;
          ops.push_back(minus ? SetOp::diff : SetOp::sum);
          signs.push_back(minus ? '-' : '+');
        }
        const BigInt size = sumset_chain(parts, ops).size();
        if (size > worst || rep.worst_signs.empty()) {
          worst = size;
          rep.worst_signs = signs.empty() ? "none" : signs;
        }
      }
      rep.lhs_size = worst;
      break;
    }
    case PlunneckeForm::large_subset: {
      rep.rhs = rhs * Rational(BigInt(1) << h);
      const FqSet s = sumset_chain(parts, std::vector<SetOp>(h - 1, SetOp::sum));
      const auto& t = a.tower();
      const auto sl = s.elements();
      const std::size_t min_size = (a.size() + 1) / 2;
      std::vector<Elem> y = a.elements();

      auto sumset_size = [&](const std::vector<Elem>& ys) {
        FqSet out(a.field());
        for (Elem v : ys) {
          for (Elem w : sl) out.insert(t.add(v, w));
        }
        return out.size();
      };
      std::size_t current = sumset_size(y);
      rep.witness_search = "full-set";
      if (Rational(BigInt(current)) > rep.rhs) {
        rep.witness_search = "greedy";
        std::vector<std::uint32_t> cover(t.q(), 0);
        for (Elem v : y) {
          for (Elem w : sl) ++cover[t.add(v, w)];
        }
        while (Rational(BigInt(current)) > rep.rhs && y.size() > min_size) {
          std::size_t best = 0;
          std::size_t best_gain = 0;
          for (std::size_t i = 0; i < y.size(); ++i) {
            std::size_t gain = 0;
            for (Elem w : sl) gain += cover[t.add(y[i], w)] == 1;
            if (gain > best_gain) {
              best_gain = gain;
              best = i;
            }
          }
          for (Elem w : sl) --cover[t.add(y[best], w)];
          current -= best_gain;
          y.erase(y.begin() + static_cast<std::ptrdiff_t>(best));
        }
        if (Rational(BigInt(current)) > rep.rhs) {
          const auto all = a.elements();
          if (binomial_capped(all.size(), min_size, 200000) <= 200000) {
            rep.witness_search = "exhaustive";
            std::vector<bool> pick(all.size(), false);
            std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(min_size), true);
            do {
              std::vector<Elem> cand;
              for (std::size_t i = 0; i < all.size(); ++i) {
                if (pick[i]) cand.push_back(all[i]);
              }
              const std::size_t sz = sumset_size(cand);
              if (sz < current) {
                current = sz;
                y = cand;
              }
              if (Rational(BigInt(current)) <= rep.rhs) break;
            } while (std::prev_permutation(pick.begin(), pick.end()));
          } else {
            rep.witness_search = "none";
          }
        }
      }
      rep.lhs_size = current;
      if (rep.witness_search != "none") rep.witness = y;
      break;
    }
  }
  rep.holds = Rational(rep.lhs_size) <= rep.rhs;
  if (form == PlunneckeForm::large_subset && rep.witness_search == "none") {
    rep.holds = false;
  }
  return rep;
}

}  // namespace pdlab
