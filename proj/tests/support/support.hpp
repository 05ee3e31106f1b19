#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ifes/classes.hpp"
#include "ifes/equation.hpp"
#include "ifes/grid_function.hpp"
#include "ifes/lattice.hpp"

namespace ifes::testing {

/// IFES_TEST_SEED overrides the fixed default.
inline std::uint64_t base_seed() {
  if (const char* s = std::getenv("IFES_TEST_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0') return v;
  }
  return 20240601ULL;
}

inline std::mt19937_64 make_rng(std::uint64_t salt) {
  return std::mt19937_64(base_seed() ^ (salt * 0x9E3779B97F4A7C15ULL));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Elements sorted so that x < y in the order implies x comes first.
inline std::vector<Element> linear_extension(const FiniteLattice& lat) {
  std::vector<Element> order(lat.size());
  std::iota(order.begin(), order.end(), Element{0});
  std::vector<std::size_t> below(lat.size(), 0);
  for (Element a = 0; a < lat.size(); ++a)
    for (Element b = 0; b < lat.size(); ++b)
      if (lat.leq(b, a)) ++below[a];
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return below[a] < below[b]; });
  return order;
}

/// Monotone by construction: T(x) is drawn from the elements above the join of T over
/// everything strictly below x. With `stick` > 0, T(x) = x is chosen with that probability
/// whenever it is allowed, which makes fixed points common.
inline MonotoneMap random_monotone_map(const FiniteLattice& lat, std::mt19937_64& rng,
                                       double stick = 0.0) {
  MonotoneMap map;
  map.image.assign(lat.size(), 0);
  for (Element x : linear_extension(lat)) {
    Element lb = *lat.bottom();
    for (Element y = 0; y < lat.size(); ++y) {
      if (y != x && lat.leq(y, x)) lb = *lat.join(lb, map.image[y]);
    }
    std::vector<Element> allowed;
    for (Element z = 0; z < lat.size(); ++z)
      if (lat.leq(lb, z)) allowed.push_back(z);
    if (stick > 0.0 && lat.leq(lb, x) && uniform(rng, 0.0, 1.0) < stick) {
      map.image[x] = x;
    } else {
      map.image[x] = allowed[pick(rng, allowed.size())];
    }
  }
  return map;
}

/// Nondecreasing vector of `count` entries drawn from `levels`.
inline std::vector<double> random_monotone_values(std::mt19937_64& rng, std::size_t count,
                                                  std::span<const double> levels) {
  std::vector<double> v(count);
  for (auto& x : v) x = levels[pick(rng, levels.size())];
  std::sort(v.begin(), v.end());
  return v;
}

/// Nondecreasing vector in [lo, hi] fixing neither endpoint.
inline std::vector<double> random_monotone_reals(std::mt19937_64& rng, std::size_t count,
                                                 double lo, double hi) {
  std::vector<double> v(count);
  for (auto& x : v) x = uniform(rng, lo, hi);
  std::sort(v.begin(), v.end());
  return v;
}

inline ProductEquationSpec make_spec(Interval J, std::vector<double> lambda, const char* G,
                                     std::vector<const char*> xi, std::vector<const char*> psi,
                                     double delta) {
  ProductEquationSpec s;
  s.domain = J;
  s.exponents = std::move(lambda);
  s.target = parse(G);
  for (auto* e : xi) s.outer_maps.push_back(parse(e));
  for (auto* e : psi) s.inner_maps.push_back(parse(e));
  s.floor = delta;
  return s;
}

inline ProductEquationSpec exmp1_spec() {
  return make_spec(Interval(1.0, std::exp(1.0)), {0.8, 0.2}, "sqrt(x)*exp(0.5*(log(x))^2)",
                   {"x", "exp((log(x))^2)"}, {"x", "x"}, 0.2);
}

inline ClassParams exmp1_classes() { return ClassParams{0.2, 4.0, {1.0, 0.0}, {1.0, 2.0}}; }

inline ProductEquationSpec e1_spec() {
  return make_spec(Interval(0.0, 1.0), {0.8, -0.3}, "(x^2+1)/2", {"x", "(x^4+1)/3"},
                   {"x", "x^3"}, 0.2);
}

inline ProductEquationSpec ex2_spec() {
  return make_spec(Interval(0.0, 1.0), {0.6, -0.1}, "if(x < 0.5, (x^4+1)/3, (x^3+1)/2)",
                   {"x", "(x^4+2)/7"}, {"x", "sin(1.5707963267948966*x)"}, 0.1);
}

/// G = x^lambda on [delta, 1] with every map the identity; g = id solves it exactly.
inline ProductEquationSpec identity_instance(double delta = 0.2) {
  return make_spec(Interval(delta, 1.0), {0.8, -0.3}, "x^0.5", {"x", "x"}, {"x", "x"}, delta);
}

}  // namespace ifes::testing
