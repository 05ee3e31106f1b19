#include "ifes/lattice.hpp"

#include <algorithm>

#include "ifes/errors.hpp"

namespace ifes {

FiniteLattice::FiniteLattice(std::size_t size, const std::function<bool(Element, Element)>& leq)
    : n_(size), leq_(size * size) {
  if (size == 0) throw Error("a lattice needs at least one element");
  for (Element a = 0; a < n_; ++a) {
    for (Element b = 0; b < n_; ++b) leq_[a * n_ + b] = leq(a, b) ? 1 : 0;
  }
}

std::optional<Element> FiniteLattice::join(Element a, Element b) const {
  const Element pair[] = {a, b};
  return sup(pair);
}

std::optional<Element> FiniteLattice::meet(Element a, Element b) const {
  const Element pair[] = {a, b};
  return inf(pair);
}

std::optional<Element> FiniteLattice::bottom() const { return sup({}); }
std::optional<Element> FiniteLattice::top() const { return inf({}); }

std::optional<Element> FiniteLattice::sup(std::span<const Element> subset) const {
  std::optional<Element> best;
  for (Element u = 0; u < n_; ++u) {
    const bool upper = std::all_of(subset.begin(), subset.end(),
                                   [&](Element s) { return leq(s, u); });
    if (!upper) continue;
    if (!best || leq(u, *best)) best = u;
  }
  if (!best) return std::nullopt;
  for (Element u = 0; u < n_; ++u) {
    const bool upper = std::all_of(subset.begin(), subset.end(),
                                   [&](Element s) { return leq(s, u); });
    if (upper && !leq(*best, u)) return std::nullopt;
  }
  return best;
}

std::optional<Element> FiniteLattice::inf(std::span<const Element> subset) const {
  std::optional<Element> best;
  for (Element u = 0; u < n_; ++u) {
    const bool lower = std::all_of(subset.begin(), subset.end(),
                                   [&](Element s) { return leq(u, s); });
    if (!lower) continue;
    if (!best || leq(*best, u)) best = u;
  }
  if (!best) return std::nullopt;
  for (Element u = 0; u < n_; ++u) {
    const bool lower = std::all_of(subset.begin(), subset.end(),
                                   [&](Element s) { return leq(u, s); });
    if (lower && !leq(u, *best)) return std::nullopt;
  }
  return best;
}

LatticeReport verify_lattice(const FiniteLattice& L) {
  LatticeReport r;
  const std::size_t n = L.size();
  auto fail = [&](bool LatticeReport::*flag, std::array<Element, 3> ce, std::string why) {
    r.*flag = false;
    if (!r.counterexample) {
      r.counterexample = ce;
      r.failure = std::move(why);
    }
  };
  for (Element a = 0; a < n; ++a) {
    if (!L.leq(a, a)) fail(&LatticeReport::reflexive, {a, a, a}, "not reflexive");
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (a != b && L.leq(a, b) && L.leq(b, a)) {
        fail(&LatticeReport::antisymmetric, {a, b, a}, "not antisymmetric");
      }
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (!L.leq(a, b)) continue;
      for (Element c = 0; c < n; ++c) {
        if (L.leq(b, c) && !L.leq(a, c)) fail(&LatticeReport::transitive, {a, b, c}, "not transitive");
      }
    }
  }
  if (!r.reflexive || !r.antisymmetric || !r.transitive) return r;
  if (!L.bottom() || !L.top()) {
    r.has_bounds = false;
    if (!r.counterexample) {
      r.counterexample = std::array<Element, 3>{0, 0, 0};
      r.failure = "no bottom or no top";
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      if (!L.join(a, b)) fail(&LatticeReport::has_joins, {a, b, b}, "pair without a join");
      if (!L.meet(a, b)) fail(&LatticeReport::has_meets, {a, b, b}, "pair without a meet");
    }
  }
  return r;
}

OrderVerdict is_order_preserving(const FiniteLattice& L, const MonotoneMap& map) {
  for (Element x = 0; x < L.size(); ++x) {
    for (Element y = 0; y < L.size(); ++y) {
      if (L.leq(x, y) && !L.leq(map(x), map(y))) return {false, std::make_pair(x, y)};
    }
  }
  return {};
}

OrderVerdict verify_monotone(const FiniteLattice& L, MonotoneMap& map) {
  auto v = is_order_preserving(L, map);
  map.verified_monotone = v.preserving;
  return v;
}

namespace {

void require_total(const FiniteLattice& L, const MonotoneMap& map) {
  if (map.image.size() != L.size()) throw Error("map table size does not match the lattice");
  for (Element e : map.image) {
    if (e >= L.size()) throw Error("map sends an element outside the lattice");
  }
}

template <class Step>
Element kleene(const FiniteLattice& L, const MonotoneMap& map, Element start, Step ordered,
               const char* direction) {
  require_total(L, map);
  Element x = start;
  for (std::size_t steps = 0; steps <= L.size(); ++steps) {
    const Element next = map(x);
    if (next == x) return x;
    if (!ordered(x, next)) {
      throw MonotonicityViolation(x, next, std::string("Kleene iteration failed to ") +
                                               direction + ": element " + std::to_string(x) +
                                               " maps to " + std::to_string(next));
    }
    x = next;
  }
  throw Error("Kleene iteration did not stabilize within the lattice size");
}

}  // namespace

Element knaster_tarski_min(const FiniteLattice& L, const MonotoneMap& map) {
  const auto bot = L.bottom();
  if (!bot) throw Error("lattice has no bottom");
  return kleene(L, map, *bot, [&](Element a, Element b) { return L.leq(a, b); }, "ascend");
}

Element knaster_tarski_max(const FiniteLattice& L, const MonotoneMap& map) {
  const auto t = L.top();
  if (!t) throw Error("lattice has no top");
  return kleene(L, map, *t, [&](Element a, Element b) { return L.leq(b, a); }, "descend");
}

std::vector<Element> fixed_point_set(const FiniteLattice& L, const MonotoneMap& map) {
  require_total(L, map);
  std::vector<Element> out;
  for (Element x = 0; x < L.size(); ++x) {
    if (map(x) == x) out.push_back(x);
  }
  return out;
}

bool is_sublattice(const FiniteLattice& L, std::span<const Element> subset) {
  auto member = [&](Element e) { return std::find(subset.begin(), subset.end(), e) != subset.end(); };
  for (Element a : subset) {
    for (Element b : subset) {
      const auto j = L.join(a, b);
      const auto m = L.meet(a, b);
      if (!j || !m || !member(*j) || !member(*m)) return false;
    }
  }
  return true;
}

bool is_complete_lattice_in_induced_order(const FiniteLattice& L, std::span<const Element> subset) {
  if (subset.empty()) return false;
  const std::vector<Element> elems(subset.begin(), subset.end());
  const FiniteLattice induced(elems.size(),
                              [&](Element a, Element b) { return L.leq(elems[a], elems[b]); });
  return verify_lattice(induced).ok();
}

std::optional<Element> MonotoneVectorLattice::index_of(std::span<const int> v) const {
  for (Element i = 0; i < elements.size(); ++i) {
    if (std::equal(v.begin(), v.end(), elements[i].begin(), elements[i].end())) return i;
  }
  return std::nullopt;
}

namespace {

void enumerate(std::size_t length, int levels, std::vector<int>& prefix,
               std::vector<std::vector<int>>& out) {
  if (prefix.size() == length) {
    out.push_back(prefix);
    return;
  }
  const int start = prefix.empty() ? 0 : prefix.back();
  for (int v = start; v < levels; ++v) {
    prefix.push_back(v);
    enumerate(length, levels, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonotoneVectorLattice monotone_vector_lattice(std::size_t length, std::size_t levels) {
  if (length == 0 || levels == 0) throw Error("monotone vector lattice needs length, levels >= 1");
  std::vector<std::vector<int>> elems;
  std::vector<int> prefix;
  enumerate(length, static_cast<int>(levels), prefix, elems);
  FiniteLattice lattice(elems.size(), [&](Element a, Element b) {
    for (std::size_t i = 0; i < length; ++i) {
      if (elems[a][i] > elems[b][i]) return false;
    }
    return true;
  });
  return {std::move(elems), std::move(lattice)};
}

}  // namespace ifes
