#pragma once

#include <cctype>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/field_system.hpp"
#include "noether/symmetry.hpp"
#include "noether/tree.hpp"

namespace noether {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(const std::string& msg, SourceSpan s)
      : std::runtime_error(std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg), span(s) {}
};

struct TransformationDecl {
  std::string system;
  Transformation transformation;
  SourceSpan span;
};

struct SystemDecl {
  FieldSystem system;
  SourceSpan span;
};

/// A parsed document: the text plus every declaration with its location.
struct SourceDoc {
  std::string text;
  std::vector<SystemDecl> systems;
  std::vector<TransformationDecl> transformations;

  const FieldSystem& system(const std::string& name) const {
    for (const auto& s : systems)
      if (s.system.name == name) return s.system;
    throw std::out_of_range("no system named " + name);
  }
};

// ---------------------------------------------------------------- printing

namespace dsl_detail {

inline std::string coordinate_name(int axis, Flavor flavor) {
  if (axis == 0 && flavor == Flavor::NonRelativistic) return "t";
  return "x" + std::to_string(axis);
}

inline std::string render_jet(const Symbol& s, Flavor flavor) {
  std::string out = s.field.display();
  if (flavor == Flavor::Relativistic) {
    for (int ax = 0; ax < kMaxAxes; ++ax)
      for (int k = 0; k < s.orders[static_cast<std::size_t>(ax)]; ++k) out = "d(" + out + "," + std::to_string(ax) + ")";
    return out;
  }
  for (int ax = 1; ax < kMaxAxes; ++ax)
    for (int k = 0; k < s.orders[static_cast<std::size_t>(ax)]; ++k) out = "dx(" + out + "," + std::to_string(ax) + ")";
  for (int k = 0; k < s.orders[0]; ++k) out = "dt(" + out + ")";
  return out;
}

inline std::string render_symbol(const Symbol& s, Flavor flavor) {
  switch (s.kind) {
    case SymbolKind::Jet: return render_jet(s, flavor);
    case SymbolKind::Coordinate: return coordinate_name(s.axis, flavor);
    case SymbolKind::Parameter:
    case SymbolKind::Constant: return s.name;
  }
  return {};
}

inline std::string with_power(std::string base, int p) { return p == 1 ? base : base + "^" + std::to_string(p); }

}  // namespace dsl_detail

/// Deterministic rendering in canonical term order. Within a term the factors
/// appear as coefficient, constants, parameters, coordinates, jets; negative
/// powers of constants are written as trailing divisions.
inline std::string print_expr(const Expr& e, Flavor flavor = Flavor::NonRelativistic) {
  using namespace dsl_detail;
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, coeff] : e.terms()) {
    Coeff c = coeff;
    bool negative = c.is_real() ? sgn(c.re()) < 0 : (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    if (negative) c = -c;
    std::vector<std::string> num;
    std::vector<std::string> den;
    for (SymbolKind k : {SymbolKind::Constant, SymbolKind::Parameter, SymbolKind::Coordinate, SymbolKind::Jet})
      for (const auto& [s, p] : mono.factors()) {
        if (s.kind != k) continue;
        if (p > 0)
          num.push_back(with_power(render_symbol(s, flavor), p));
        else
          den.push_back(with_power(render_symbol(s, flavor), -p));
      }
    std::string term;
    if (!c.is_one() || num.empty()) term = c.str();
    for (const auto& f : num) term += (term.empty() ? "" : "*") + f;
    for (const auto& f : den) term += "/" + f;
    if (first)
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

inline std::string print(const FieldSystem& sys) {
  std::ostringstream os;
  os << "system " << sys.name << " {\n";
  os << "  dim " << sys.dim << "\n";
  if (sys.relativistic()) os << "  signature minkowski\n";
  for (const auto& [name, value] : sys.constants.entries()) {
    os << "  const " << name;
    if (value) os << " = " << std::setprecision(17) << *value;
    os << "\n";
  }
  for (const auto& f : sys.fields) {
    const char* type = f.type == FieldType::Real ? "real" : f.type == FieldType::Complex ? "complex" : "covector4";
    os << "  field " << f.name << " " << type << "\n";
  }
  os << "  lagrangian = " << print_expr(sys.lagrangian, sys.flavor) << "\n}\n";
  return os.str();
}

inline std::string print(const Transformation& t, const FieldSystem& sys) {
  std::ostringstream os;
  os << "transformation " << t.name << " for " << sys.name << " {\n";
  os << "  params";
  for (const auto& p : t.parameters) os << " " << p;
  os << "\n";
  if (!t.paired) os << "  independent\n";
  for (const auto& [f, v] : t.variations) os << "  delta " << f.display() << " = " << print_expr(v, sys.flavor) << "\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace dsl_detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto ident_char = [](unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceSpan sp{line, col, 0};
    std::size_t start = i;
    if (std::isalpha(c) || c == '_' || c >= 0x80) {
      std::size_t j = i;
      while (j < src.size() && ident_char(static_cast<unsigned char>(src[j]))) ++j;
      sp.length = static_cast<int>(j - start);
      out.push_back({Tok::Ident, std::string(src.substr(start, j - start)), sp});
      advance(j - start);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      sp.length = static_cast<int>(j - start);
      out.push_back({Tok::Number, std::string(src.substr(start, j - start)), sp});
      advance(j - start);
    } else if (std::string_view("{}(),+-*/^=:").find(static_cast<char>(c)) != std::string_view::npos) {
      sp.length = 1;
      out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), sp});
      advance(1);
    } else {
      throw ParseError("unexpected character", sp);
    }
  }
  out.push_back({Tok::End, "", {line, col, 0}});
  return out;
}

// Exact value of a decimal literal such as "12" or "0.25".
inline Rational decimal_value(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(mpz_class(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty()) digits = "0";
  mpz_class den = 1;
  for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
  Rational q(mpz_class(digits), den);
  q.canonicalize();
  return q;
}

// Scalar or spatial-vector value during expression evaluation.
struct Value {
  bool vector = false;
  Expr s;
  std::vector<Expr> v;
};

constexpr int kMaxDepth = 200;
constexpr int kMaxExponent = 64;

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SourceDoc document(std::string text) {
    SourceDoc doc;
    doc.text = std::move(text);
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && t.text == "system") {
        doc.systems.push_back(system());
        systems_.push_back(doc.systems.back().system);
      } else if (t.kind == Tok::Ident && t.text == "transformation") {
        doc.transformations.push_back(transformation(nullptr));
      } else {
        throw ParseError("expected 'system' or 'transformation'", t.span);
      }
    }
    return doc;
  }

  TransformationDecl single_transformation(const FieldSystem& sys) {
    auto d = transformation(&sys);
    if (peek().kind != Tok::End) throw ParseError("trailing input after transformation", peek().span);
    return d;
  }

private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(const std::string& punct_or_kw) {
    if (peek().kind != Tok::End && peek().kind != Tok::Number && peek().text == punct_or_kw) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(const std::string& what) {
    if (peek().kind == Tok::End || peek().kind == Tok::Number || peek().text != what)
      throw ParseError("expected '" + what + "'", peek().span);
    return next();
  }
  std::string identifier(const char* what) {
    if (peek().kind != Tok::Ident) throw ParseError(std::string("expected ") + what, peek().span);
    return next().text;
  }
  int integer(const char* what) {
    bool neg = accept("-");
    if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos || peek().text.size() > 6)
      throw ParseError(std::string("expected ") + what, peek().span);
    int v = std::stoi(next().text);
    return neg ? -v : v;
  }

  SystemDecl system() {
    SourceSpan span = expect("system").span;
    FieldSystem sys;
    sys.name = identifier("system name");
    expect("{");
    expect("dim");
    SourceSpan dim_span = peek().span;
    sys.dim = integer("dimension");
    if (sys.dim < 1 || sys.dim > 3) throw ParseError("dimension must be 1, 2 or 3", dim_span);
    if (accept("signature")) {
      SourceSpan sp = peek().span;
      std::string sig = identifier("signature");
      if (sig != "minkowski") throw ParseError("unknown signature '" + sig + "'", sp);
      sys.flavor = Flavor::Relativistic;
    }
    while (accept("const")) {
      SourceSpan sp = peek().span;
      std::string name = identifier("constant name");
      check_fresh(sys, name, sp);
      std::optional<double> value;
      if (accept("=")) {
        if (peek().kind != Tok::Number) throw ParseError("expected a number", peek().span);
        try {
          value = std::stod(next().text);
          sys.constants.declare(name, value);
        } catch (const std::exception& ex) {
          throw ParseError(ex.what(), sp);
        }
      } else {
        sys.constants.declare(name);
      }
    }
    while (accept("field")) {
      SourceSpan sp = peek().span;
      std::string name = identifier("field name");
      check_fresh(sys, name, sp);
      SourceSpan tsp = peek().span;
      std::string type = identifier("field type");
      FieldType ft;
      if (type == "real")
        ft = FieldType::Real;
      else if (type == "complex")
        ft = FieldType::Complex;
      else if (type == "covector4")
        ft = FieldType::Covector4;
      else
        throw ParseError("unknown field type '" + type + "'", tsp);
      sys.fields.push_back({name, ft});
    }
    if (peek().text != "lagrangian") throw ParseError("missing lagrangian", peek().span);
    SourceSpan lsp = next().span;
    expect("=");
    if (peek().text == "}" || peek().kind == Tok::End) throw ParseError("missing lagrangian", lsp);
    Scope scope{&sys, {}, {}};
    Value v = expression(scope, 0);
    if (v.vector) throw ParseError("lagrangian must be a scalar", lsp);
    sys.lagrangian = std::move(v.s);
    expect("}");
    try {
      sys.validate();
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), span);
    }
    return {std::move(sys), span};
  }

  TransformationDecl transformation(const FieldSystem* given) {
    SourceSpan span = expect("transformation").span;
    TransformationDecl decl;
    decl.span = span;
    decl.transformation.name = identifier("transformation name");
    const FieldSystem* sys = given;
    if (accept("for")) {
      SourceSpan sp = peek().span;
      decl.system = identifier("system name");
      if (!given) {
        sys = nullptr;
        for (const auto& s : systems_)
          if (s.name == decl.system) sys = &s;
        if (!sys) throw ParseError("unknown system '" + decl.system + "'", sp);
      }
    } else if (!given) {
      if (systems_.empty()) throw ParseError("transformation without a preceding system", span);
      sys = &systems_.back();
    }
    if (given && decl.system.empty()) decl.system = given->name;
    if (!given) decl.system = sys->name;
    expect("{");
    expect("params");
    Scope scope{sys, {}, {}};
    while (peek().kind == Tok::Ident && peek().text != "delta" && peek().text != "independent") {
      SourceSpan sp = peek().span;
      std::string p = next().text;
      bool complex = false;
      if (accept(":")) {
        SourceSpan tsp = peek().span;
        std::string kind = identifier("parameter kind");
        if (kind != "complex") throw ParseError("unknown parameter kind '" + kind + "'", tsp);
        complex = true;
      }
      std::vector<std::string> names = complex ? std::vector<std::string>{p + "_R", p + "_I"} : std::vector<std::string>{p};
      for (const auto& n : names) {
        if (scope.params.contains(n) || sys->constants.contains(n)) throw ParseError("duplicate name '" + n + "'", sp);
        scope.params[n] = Expr::parameter(n);
        decl.transformation.parameters.push_back(n);
      }
      if (complex) scope.params[p] = Expr::parameter(p + "_R") + Expr::imag() * Expr::parameter(p + "_I");
    }
    if (accept("independent")) decl.transformation.paired = false;
    if (peek().text != "delta") throw ParseError("expected 'delta'", peek().span);
    while (accept("delta")) {
      SourceSpan sp = peek().span;
      FieldRef f = field_target(*sys);
      if (decl.transformation.variations.contains(f)) throw ParseError("duplicate variation of " + f.display(), sp);
      expect("=");
      Value v = expression(scope, 0);
      if (v.vector) throw ParseError("variation must be a scalar", sp);
      decl.transformation.variations.emplace(f, std::move(v.s));
    }
    expect("}");
    try {
      decl.transformation.validate(*sys);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), span);
    }
    return decl;
  }

  FieldRef field_target(const FieldSystem& sys) {
    SourceSpan sp = peek().span;
    bool conj_target = false;
    std::string name;
    if (peek().text == "conj" && peek(1).text == "(") {
      next();
      next();
      name = identifier("field name");
      expect(")");
      conj_target = true;
    } else {
      name = identifier("field name");
    }
    for (const auto& f : sys.field_refs()) {
      if (f.name != name) continue;
      if (conj_target && f.kind == FieldKind::Complex) return f.conj();
      if (!conj_target) return f;
    }
    throw ParseError("undeclared field '" + name + "'", sp);
  }

  struct Scope {
    const FieldSystem* sys;
    std::map<std::string, Expr> params;
    std::map<std::string, Expr> extra;
  };

  void check_fresh(const FieldSystem& sys, const std::string& name, SourceSpan sp) {
    if (sys.constants.contains(name)) throw ParseError("duplicate name '" + name + "'", sp);
    for (const auto& f : sys.fields)
      if (f.name == name) throw ParseError("duplicate name '" + name + "'", sp);
    if (name == "i" || name == "t" || (name.size() == 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))))
      throw ParseError("reserved name '" + name + "'", sp);
  }

  static Value scalar(Expr e) { return Value{false, std::move(e), {}}; }

  Value add(Value a, const Value& b, bool subtract, SourceSpan sp) {
    if (a.vector != b.vector) throw ParseError("cannot add a scalar and a vector", sp);
    if (!a.vector) {
      if (subtract)
        a.s -= b.s;
      else
        a.s += b.s;
      return a;
    }
    if (a.v.size() != b.v.size()) throw ParseError("vector size mismatch", sp);
    for (std::size_t k = 0; k < a.v.size(); ++k) {
      if (subtract)
        a.v[k] -= b.v[k];
      else
        a.v[k] += b.v[k];
    }
    return a;
  }

  Value expression(Scope& sc, int depth) {
    if (depth > kMaxDepth) throw ParseError("expression nested too deeply", peek().span);
    Value v = term(sc, depth + 1);
    while (peek().kind == Tok::Punct && (peek().text == "+" || peek().text == "-")) {
      Token op = next();
      Value rhs = term(sc, depth + 1);
      v = add(std::move(v), rhs, op.text == "-", op.span);
    }
    return v;
  }

  Value term(Scope& sc, int depth) {
    Value v = unary(sc, depth + 1);
    while (peek().kind == Tok::Punct && (peek().text == "*" || peek().text == "/")) {
      Token op = next();
      Value rhs = unary(sc, depth + 1);
      if (op.text == "*") {
        if (v.vector && rhs.vector) throw ParseError("use dot() to multiply vectors", op.span);
        if (!v.vector && !rhs.vector) {
          v.s = v.s * rhs.s;
        } else {
          const Expr& k = v.vector ? rhs.s : v.s;
          std::vector<Expr> vec = v.vector ? v.v : rhs.v;
          for (auto& c : vec) c = c * k;
          v = Value{true, {}, std::move(vec)};
        }
      } else {
        if (rhs.vector) throw ParseError("cannot divide by a vector", op.span);
        Expr inv;
        try {
          if (rhs.s.is_zero()) throw NonConstantDivision("division by zero");
          inv = invert_constant(rhs.s);
        } catch (const NonConstantDivision& ex) {
          throw ParseError(ex.what(), op.span);
        }
        if (v.vector)
          for (auto& c : v.v) c = c * inv;
        else
          v.s = v.s * inv;
      }
    }
    return v;
  }

  Value unary(Scope& sc, int depth) {
    if (depth > kMaxDepth) throw ParseError("expression nested too deeply", peek().span);
    if (peek().kind == Tok::Punct && peek().text == "-") {
      next();
      Value v = unary(sc, depth + 1);
      if (v.vector)
        for (auto& c : v.v) c = -c;
      else
        v.s = -v.s;
      return v;
    }
    if (peek().kind == Tok::Punct && peek().text == "+") {
      next();
      return unary(sc, depth + 1);
    }
    return power(sc, depth + 1);
  }

  Value power(Scope& sc, int depth) {
    Value base = primary(sc, depth + 1);
    if (peek().kind == Tok::Punct && peek().text == "^") {
      Token op = next();
      SourceSpan sp = peek().span;
      int n = integer("integer exponent");
      if (base.vector) throw ParseError("cannot raise a vector to a power", op.span);
      if (n > kMaxExponent || n < -kMaxExponent) throw ParseError("exponent out of range", sp);
      try {
        base.s = pow_expr(base.s, n);
      } catch (const NonConstantDivision& ex) {
        throw ParseError(ex.what(), sp);
      }
    }
    return base;
  }

  int axis_argument(int lo, int hi) {
    SourceSpan sp = peek().span;
    int ax = integer("axis index");
    if (ax < lo || ax > hi) throw ParseError("axis index out of range", sp);
    return ax;
  }

  template <class F>
  static Value map_value(Value v, F f) {
    if (v.vector)
      for (auto& c : v.v) c = f(c);
    else
      v.s = f(v.s);
    return v;
  }

  Value call(const Token& fn, Scope& sc, int depth) {
    const int dim = sc.sys->dim;
    Value arg = expression(sc, depth + 1);
    Value out;
    const std::string& f = fn.text;
    if (f == "dt") {
      out = map_value(std::move(arg), [](const Expr& e) { return total_derivative(e, 0); });
    } else if (f == "dx" || f == "d") {
      expect(",");
      int ax = f == "dx" ? axis_argument(1, dim) : axis_argument(0, dim);
      out = map_value(std::move(arg), [ax](const Expr& e) { return total_derivative(e, ax); });
    } else if (f == "conj") {
      out = map_value(std::move(arg), [](const Expr& e) { return conj(e); });
    } else if (f == "grad") {
      if (arg.vector) throw ParseError("grad expects a scalar", fn.span);
      out.vector = true;
      for (int k = 1; k <= dim; ++k) out.v.push_back(total_derivative(arg.s, k));
    } else if (f == "div") {
      if (!arg.vector) throw ParseError("div expects a vector", fn.span);
      for (int k = 1; k <= dim; ++k) out.s += total_derivative(arg.v[static_cast<std::size_t>(k - 1)], k);
    } else if (f == "lap") {
      out = map_value(std::move(arg), [dim](const Expr& e) {
        Expr s;
        for (int k = 1; k <= dim; ++k) s += total_derivative(total_derivative(e, k), k);
        return s;
      });
    } else if (f == "dot") {
      expect(",");
      Value rhs = expression(sc, depth + 1);
      if (!arg.vector || !rhs.vector) throw ParseError("dot expects two vectors", fn.span);
      for (std::size_t k = 0; k < arg.v.size(); ++k) out.s += arg.v[k] * rhs.v[k];
    } else {
      throw ParseError("unknown function '" + f + "'", fn.span);
    }
    expect(")");
    return out;
  }

  Value primary(Scope& sc, int depth) {
    if (depth > kMaxDepth) throw ParseError("expression nested too deeply", peek().span);
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return scalar(Expr(Coeff(decimal_value(t.text))));
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      next();
      Value v = expression(sc, depth + 1);
      expect(")");
      return v;
    }
    if (t.kind != Tok::Ident) throw ParseError("expected an expression", t.span);
    Token id = next();
    if (peek().kind == Tok::Punct && peek().text == "(") {
      next();
      return call(id, sc, depth);
    }
    return scalar(resolve(id, sc));
  }

  Expr resolve(const Token& id, const Scope& sc) {
    const std::string& n = id.text;
    if (n == "i") return Expr::imag();
    if (n == "t") return Expr::coordinate(0);
    if (n.size() == 2 && n[0] == 'x' && n[1] >= '0' && n[1] <= '3') {
      int ax = n[1] - '0';
      if (ax > sc.sys->dim) throw ParseError("coordinate beyond the system dimension", id.span);
      return Expr::coordinate(ax);
    }
    if (auto it = sc.params.find(n); it != sc.params.end()) return it->second;
    if (sc.sys->constants.contains(n)) return Expr::constant(n);
    for (const auto& f : sc.sys->field_refs())
      if (f.name == n && f.kind != FieldKind::Conjugate) return Expr::jet(f);
    throw ParseError("undeclared identifier '" + n + "'", id.span);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<FieldSystem> systems_;
};

}  // namespace dsl_detail

inline SourceDoc parse_document(std::string_view text) {
  dsl_detail::Parser p(text);
  return p.document(std::string(text));
}

/// Parses a document that declares exactly one system.
inline FieldSystem parse_system(std::string_view text) {
  auto doc = parse_document(text);
  if (doc.systems.size() != 1) throw ParseError("expected exactly one system declaration", {1, 1, 0});
  return doc.systems.front().system;
}

/// Parses one transformation block against a known system.
inline Transformation parse_transformation(std::string_view text, const FieldSystem& sys) {
  dsl_detail::Parser p(text);
  return p.single_transformation(sys).transformation;
}

}  // namespace noether
