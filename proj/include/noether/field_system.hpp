#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noether/expr.hpp"

namespace noether {

enum class Flavor { NonRelativistic, Relativistic };

enum class FieldType { Real, Complex, Covector4 };

struct FieldDecl {
  std::string name;
  FieldType type = FieldType::Real;
  bool operator==(const FieldDecl&) const = default;
};

/// Named positive constants with optional numeric bindings (used only by the
/// simulator; symbolic work never reads the numbers).
class ConstantTable {
public:
  void declare(const std::string& name, std::optional<double> value = std::nullopt) {
    if (value && !(std::isfinite(*value) && *value > 0))
      throw std::invalid_argument("constant '" + name + "' must be bound to a finite positive number");
    values_[name] = value;
  }
  bool contains(const std::string& name) const { return values_.contains(name); }
  std::optional<double> value(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? std::nullopt : it->second;
  }
  const std::map<std::string, std::optional<double>>& entries() const { return values_; }
  bool operator==(const ConstantTable&) const = default;

private:
  std::map<std::string, std::optional<double>> values_;
};

/// Diagonal Minkowski metric diag(+1,-1,-1,-1).
inline int metric(int mu) { return mu == 0 ? 1 : -1; }

struct FieldSystem {
  std::string name;
  int dim = 1;
  Flavor flavor = Flavor::NonRelativistic;
  std::vector<FieldDecl> fields;
  ConstantTable constants;
  Expr lagrangian;

  bool operator==(const FieldSystem&) const = default;

  bool relativistic() const { return flavor == Flavor::Relativistic; }

  /// Number of independent coordinates, time included.
  int axis_count() const { return dim + 1; }

  /// Every dependent variable: complex fields contribute psi and psi*,
  /// covectors contribute their four lower-index components.
  std::vector<FieldRef> field_refs() const {
    std::vector<FieldRef> out;
    for (const auto& f : fields) {
      switch (f.type) {
        case FieldType::Real: out.push_back(real_field(f.name)); break;
        case FieldType::Complex:
          out.push_back(complex_field(f.name));
          out.push_back(complex_field(f.name).conj());
          break;
        case FieldType::Covector4:
          for (int mu = 0; mu < 4; ++mu) out.push_back(real_field(component_name(f.name, mu)));
          break;
      }
    }
    return out;
  }

  bool declares(const FieldRef& f) const {
    for (const auto& r : field_refs())
      if (r == f) return true;
    return false;
  }

  static std::string component_name(const std::string& base, int mu) { return base + "_" + std::to_string(mu); }

  /// Throws std::invalid_argument on a malformed system.
  void validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
    if (relativistic() && dim != 3) throw std::invalid_argument("relativistic systems live in 1+3 dimensions");
    for (const auto& s : lagrangian.symbols(SymbolKind::Jet)) {
      if (!declares(s.field)) throw std::invalid_argument("lagrangian mentions undeclared field " + s.field.display());
      for (int ax = axis_count(); ax < kMaxAxes; ++ax)
        if (s.orders[static_cast<std::size_t>(ax)] != 0)
          throw std::invalid_argument("derivative along an axis beyond the system dimension");
    }
    for (const auto& s : lagrangian.symbols(SymbolKind::Coordinate))
      if (s.axis >= axis_count()) throw std::invalid_argument("coordinate beyond the system dimension");
    for (const auto& s : lagrangian.symbols(SymbolKind::Constant))
      if (!constants.contains(s.name)) throw std::invalid_argument("undeclared constant " + s.name);
  }
};

}  // namespace noether
