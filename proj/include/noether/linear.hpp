#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>

#include "noether/coeff.hpp"
#include "noether/expr.hpp"
#include "noether/tree.hpp"

namespace noether {

// Scalar hooks for the two coefficient domains used by the solver: exact
// Q(i) numbers, and Laurent monomials in named constants (carried as Expr).
inline bool scalar_is_zero(const Coeff& c) { return c.is_zero(); }
inline Coeff scalar_inverse(const Coeff& c) { return c.inverse(); }
inline bool scalar_is_zero(const Expr& e) { return e.is_zero(); }
inline Expr scalar_inverse(const Expr& e) { return invert_constant(e); }

/// Incremental sparse row-echelon basis with provenance tracking. Each stored
/// row has a distinct pivot (its greatest key under Compare) and remembers the
/// combination of inserted generators that produced it.
template <class Key, class Scalar, class Compare = std::less<Key>>
class EchelonBasis {
public:
  using Vector = std::map<Key, Scalar, Compare>;
  using Combination = std::map<std::size_t, Scalar>;

  struct Reduction {
    Vector remainder;
    Combination combination;  // v - remainder == sum combination[g] * generator[g]
  };

  /// Adds generator `id`; returns false when it is already in the span.
  bool insert(Vector v, std::size_t id) {
    Combination combo;
    combo.emplace(id, Scalar(1));
    while (!v.empty()) {
      auto lead = std::prev(v.end());
      auto row = rows_.find(lead->first);
      if (row == rows_.end()) {
        Key pivot = lead->first;
        rows_.emplace(std::move(pivot), Row{std::move(v), std::move(combo)});
        return true;
      }
      Scalar factor = lead->second * scalar_inverse(row->second.vec.at(row->first));
      axpy(v, row->second.vec, factor);
      axpy(combo, row->second.combo, factor);
    }
    return false;
  }

  /// Full reduction: terms whose key is not a pivot move to the remainder.
  Reduction reduce(Vector v) const {
    Reduction out;
    while (!v.empty()) {
      auto lead = std::prev(v.end());
      auto row = rows_.find(lead->first);
      if (row == rows_.end()) {
        out.remainder.emplace(lead->first, lead->second);
        v.erase(lead);
        continue;
      }
      Scalar factor = lead->second * scalar_inverse(row->second.vec.at(row->first));
      axpy(v, row->second.vec, factor);
      for (const auto& [g, c] : row->second.combo) add_to(out.combination, g, c * factor);
    }
    return out;
  }

  std::size_t rank() const { return rows_.size(); }

private:
  struct Row {
    Vector vec;
    Combination combo;
  };

  template <class Map>
  static void add_to(Map& m, const typename Map::key_type& k, const Scalar& c) {
    if (scalar_is_zero(c)) return;
    auto [it, inserted] = m.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (scalar_is_zero(it->second)) m.erase(it);
    }
  }

  // target -= factor * source
  template <class Map>
  static void axpy(Map& target, const Map& source, const Scalar& factor) {
    for (const auto& [k, c] : source) add_to(target, k, -(c * factor));
  }

  std::map<Key, Row, Compare> rows_;
};

}  // namespace noether
