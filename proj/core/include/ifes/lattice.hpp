#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ifes {

using Element = std::size_t;

/// A finite poset on ids 0..size-1 given by its order relation. Joins and meets are derived
/// from the relation; they are absent when the relation is not a lattice order.
class FiniteLattice {
public:
  FiniteLattice(std::size_t size, const std::function<bool(Element, Element)>& leq);

  std::size_t size() const noexcept { return n_; }
  bool leq(Element a, Element b) const noexcept { return leq_[a * n_ + b] != 0; }

  std::optional<Element> join(Element a, Element b) const;
  std::optional<Element> meet(Element a, Element b) const;
  /// Least element, if there is one.
  std::optional<Element> bottom() const;
  std::optional<Element> top() const;

  /// Least upper bound of `subset` (bottom for the empty subset), if it exists.
  std::optional<Element> sup(std::span<const Element> subset) const;
  std::optional<Element> inf(std::span<const Element> subset) const;

private:
  std::size_t n_;
  std::vector<unsigned char> leq_;
};

struct LatticeReport {
  bool reflexive = true;
  bool antisymmetric = true;
  bool transitive = true;
  bool has_bounds = true;  // bottom and top exist
  bool has_joins = true;
  bool has_meets = true;
  /// First offending elements (a, b, c); unused slots repeat earlier entries.
  std::optional<std::array<Element, 3>> counterexample;
  std::string failure;

  bool ok() const noexcept {
    return reflexive && antisymmetric && transitive && has_bounds && has_joins && has_meets;
  }
};

/// Checks the partial-order axioms (O(n^3)), then existence of bounds, joins and meets.
LatticeReport verify_lattice(const FiniteLattice& lattice);

/// A total self-map of a finite lattice, stored as an image table.
struct MonotoneMap {
  std::vector<Element> image;
  bool verified_monotone = false;

  Element operator()(Element x) const { return image[x]; }
};

struct OrderVerdict {
  bool preserving = true;
  /// (x, y) with x <= y but T(x) not <= T(y).
  std::optional<std::pair<Element, Element>> witness;
};

/// Exhaustive pair scan.
OrderVerdict is_order_preserving(const FiniteLattice& lattice, const MonotoneMap& map);

/// Scans and, on success, sets verified_monotone.
OrderVerdict verify_monotone(const FiniteLattice& lattice, MonotoneMap& map);

/// Kleene iteration bottom, T(bottom), ... Every step must ascend; a step that does not
/// throws MonotonicityViolation naming the two elements.
Element knaster_tarski_min(const FiniteLattice& lattice, const MonotoneMap& map);
/// Dual: iteration from top, every step must descend.
Element knaster_tarski_max(const FiniteLattice& lattice, const MonotoneMap& map);

std::vector<Element> fixed_point_set(const FiniteLattice& lattice, const MonotoneMap& map);

/// Closed under the ambient join and meet of every pair.
bool is_sublattice(const FiniteLattice& lattice, std::span<const Element> subset);

/// Non-empty, and every pair has a least upper bound and a greatest lower bound inside the
/// subset with respect to the inherited order. For finite sets this is completeness.
bool is_complete_lattice_in_induced_order(const FiniteLattice& lattice,
                                          std::span<const Element> subset);

/// All nondecreasing vectors of `length` entries drawn from 0..levels-1, ordered pointwise.
struct MonotoneVectorLattice {
  std::vector<std::vector<int>> elements;
  FiniteLattice lattice;

  std::optional<Element> index_of(std::span<const int> v) const;
};

MonotoneVectorLattice monotone_vector_lattice(std::size_t length, std::size_t levels);

}  // namespace ifes
