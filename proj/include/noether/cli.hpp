#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noether/catalog.hpp"
#include "noether/dsl.hpp"
#include "noether/experiment.hpp"
#include "noether/noether.hpp"
#include "noether/verify.hpp"

namespace noether::cli {

using json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Systems and transformations from the catalog, optionally extended by a DSL document.
class Registry {
public:
  explicit Registry(const std::optional<std::string>& dsl_path) {
    if (!dsl_path) return;
    std::ifstream in(*dsl_path);
    if (!in) throw UsageError("cannot read " + *dsl_path);
    std::stringstream ss;
    ss << in.rdbuf();
    doc_ = parse_document(ss.str());
  }

  const FieldSystem& system(const std::string& name) const {
    if (doc_)
      for (const auto& s : doc_->systems)
        if (s.system.name == name) return s.system;
    try {
      return get_entry(name).system;
    } catch (const std::out_of_range&) {
      throw UsageError("unknown system '" + name + "'");
    }
  }

  Transformation transformation(const std::string& sys, const std::string& name) const {
    if (doc_)
      for (const auto& t : doc_->transformations)
        if (t.transformation.name == name && (t.system.empty() || t.system == sys)) return t.transformation;
    for (const auto& e : catalog())
      if (e.name == sys)
        for (const auto& t : e.transformations)
          if (t.name == name) return t;
    throw UsageError("unknown transformation '" + name + "' for system '" + sys + "'");
  }

private:
  std::optional<SourceDoc> doc_;
};

inline std::string witness_line(const DivergenceWitness& w, const FieldSystem& sys) {
  std::string out;
  if (sys.relativistic()) {
    for (std::size_t mu = 0; mu < w.components.size(); ++mu)
      out += (mu ? "; " : "") + std::string("Lambda^") + std::to_string(mu) + " = " + print_expr(w.components[mu], sys.flavor);
    return out;
  }
  out = "Lambda0 = " + print_expr(w.components.at(0), sys.flavor);
  bool spatial_zero = true;
  for (std::size_t k = 1; k < w.components.size(); ++k) spatial_zero = spatial_zero && w.components[k].is_zero();
  if (spatial_zero) return out + "; Lambda = 0";
  for (std::size_t k = 1; k < w.components.size(); ++k)
    out += "; Lambda" + std::to_string(k) + " = " + print_expr(w.components[k], sys.flavor);
  return out;
}

inline json witness_json(const DivergenceWitness& w, const FieldSystem& sys) {
  json a = json::array();
  for (const auto& c : w.components) a.push_back(print_expr(c, sys.flavor));
  return a;
}

inline std::string verdict(const CoincidenceReport& r) {
  if (!r.representable) return "NotRepresentable";
  if (!r.coincides) return "NoCoincidence";
  return r.constant_coefficient ? "Coincides (constant coefficient)" : "Coincides";
}

inline std::string component_label(const FieldSystem& sys, std::size_t mu, const std::string& param) {
  if (sys.relativistic()) return "j^" + std::to_string(mu) + "[" + param + "]";
  return (mu == 0 ? std::string("rho") : "j_" + std::to_string(mu)) + "[" + param + "]";
}

inline std::map<std::string, double> parse_assignments(const std::string& text, const std::string& what) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("malformed " + what + " '" + item + "' (expected name=value)");
    try {
      std::size_t used = 0;
      double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("");
      out[item.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw UsageError("malformed number in " + what + " '" + item + "'");
    }
  }
  return out;
}

}  // namespace detail

struct Options {
  bool json = false;
  std::optional<std::string> output;
  std::optional<std::string> dsl;
  std::string constants;
  std::vector<std::string> tolerances;
};

inline int cmd_list(const Options& o, std::ostream& out) {
  if (o.json) {
    json a = json::array();
    for (const auto& e : catalog()) {
      json t = json::array(), c = json::array();
      for (const auto& x : e.transformations) t.push_back(x.name);
      for (const auto& x : e.charges) c.push_back(x.name);
      a.push_back({{"name", e.name}, {"label", e.label}, {"transformations", t}, {"charges", c}});
    }
    out << a.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : catalog()) {
    out << e.name << "  (" << e.label << ")\n  transformations:";
    for (const auto& t : e.transformations) out << " " << t.name;
    out << "\n  charges:";
    for (const auto& c : e.charges) out << " " << c.name;
    out << "\n";
  }
  return kOk;
}

inline int cmd_eom(const Options& o, const detail::Registry& reg, const std::string& name, std::ostream& out) {
  const auto& sys = reg.system(name);
  sys.validate();
  auto rec = euler_record(sys);
  if (o.json) {
    json j = json::object();
    for (const auto& [f, e] : rec) j[f.display()] = print_expr(e, sys.flavor);
    out << json{{"system", sys.name}, {"euler", j}}.dump(2) << "\n";
    return kOk;
  }
  for (const auto& [f, e] : rec) out << "E[" << f.display() << "] = " << print_expr(e, sys.flavor) << "\n";
  return kOk;
}

inline int cmd_classify(const Options& o, const detail::Registry& reg, const std::string& s, const std::string& t,
                        std::ostream& out) {
  const auto& sys = reg.system(s);
  auto tr = reg.transformation(s, t);
  auto cls = classify(sys, tr);
  if (o.json) {
    json j{{"system", s}, {"transformation", t}, {"tag", tag_name(cls)}};
    if (const auto* q = std::get_if<Quasi>(&cls)) j["witness"] = detail::witness_json(q->witness, sys);
    if (const auto* n = std::get_if<NonNoetherian>(&cls)) j["residual"] = print_expr(n->residual, sys.flavor);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << tag_name(cls);
  if (const auto* q = std::get_if<Quasi>(&cls)) out << "; " << detail::witness_line(q->witness, sys);
  if (const auto* n = std::get_if<NonNoetherian>(&cls)) out << "; residual = " << print_expr(n->residual, sys.flavor);
  out << "\n";
  return kOk;
}

inline int cmd_current(const Options& o, const detail::Registry& reg, const std::string& s, const std::string& t,
                       std::ostream& out) {
  const auto& sys = reg.system(s);
  auto tr = reg.transformation(s, t);
  auto cls = classify(sys, tr);
  if (std::holds_alternative<NonNoetherian>(cls)) {
    if (o.json) out << json{{"system", s}, {"transformation", t}, {"tag", "NonNoetherian"}, {"currents", json::array()}}.dump(2) << "\n";
    else out << "NonNoetherian: no conserved current\n";
    return kFailed;
  }
  auto currents = noether_currents(sys, tr, cls);
  bool ok = true;
  json arr = json::array();
  for (const auto& c : currents) {
    Expr res = continuity_residual(c);
    Expr shell = reduce_on_shell(res, sys);
    auto rep = coincides_with_eom(res, sys);
    ok = ok && shell.is_zero();
    if (o.json) {
      json comps = json::array(), coeffs = json::object();
      for (const auto& e : c.components) comps.push_back(print_expr(e, sys.flavor));
      for (const auto& [f, e] : rep.coefficients) coeffs[f.display()] = print_expr(e, sys.flavor);
      arr.push_back({{"parameter", c.parameter},
                     {"components", comps},
                     {"continuity_residual", print_expr(res, sys.flavor)},
                     {"on_shell", print_expr(shell, sys.flavor)},
                     {"verdict", detail::verdict(rep)},
                     {"coefficients", coeffs}});
      continue;
    }
    out << "parameter " << c.parameter << "\n";
    for (std::size_t mu = 0; mu < c.components.size(); ++mu)
      out << "  " << detail::component_label(sys, mu, c.parameter) << " = " << print_expr(c.components[mu], sys.flavor) << "\n";
    out << "  continuity residual = " << print_expr(res, sys.flavor) << "\n";
    out << "  on shell = " << print_expr(shell, sys.flavor) << "\n";
    out << "  verdict: " << detail::verdict(rep);
    for (const auto& [f, e] : rep.coefficients) out << "; E[" << f.display() << "] * " << print_expr(e, sys.flavor);
    out << "\n";
  }
  if (o.json) out << json{{"system", s}, {"transformation", t}, {"tag", tag_name(cls)}, {"currents", arr}}.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

inline int cmd_equiv(const Options& o, const detail::Registry& reg, const std::string& a, const std::string& b,
                     std::ostream& out) {
  FieldSystem sa = reg.system(a), sb = reg.system(b);
  // A complex density is compared with a real-field one through psi = psi_R + i psi_I.
  auto complex_fields = [](const FieldSystem& s) {
    for (const auto& f : s.fields)
      if (f.type == FieldType::Complex) return true;
    return false;
  };
  if (complex_fields(sa) != complex_fields(sb)) {
    sa = real_imag_decompose(sa);
    sb = real_imag_decompose(sb);
  }
  bool eq = false;
  try {
    eq = lagrangians_equivalent(sa, sb);
  } catch (const MismatchedSystems& ex) {
    throw UsageError(ex.what());
  }
  if (o.json) out << json{{"a", a}, {"b", b}, {"equivalent", eq}}.dump(2) << "\n";
  else out << (eq ? "equivalent" : "not equivalent") << "\n";
  return eq ? kOk : kFailed;
}

inline int cmd_simulate(const Options& o, const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw UsageError(path + ": " + ex.what());
  }
  auto ex = sim::parse_experiment(cfg);
  for (const auto& [k, v] : detail::parse_assignments(o.constants, "constant")) ex.constants[k] = v;
  for (const auto& t : o.tolerances)
    for (const auto& [k, v] : detail::parse_assignments(t, "tolerance")) {
      auto it = ex.thresholds.find(k);
      if (it == ex.thresholds.end()) throw UsageError("config has no threshold named '" + k + "'");
      it->second.value = v;
    }
  auto res = sim::run_experiment(ex);
  const std::string prefix = o.output ? *o.output : std::filesystem::path(path).stem().string();
  {
    std::ofstream csv(prefix + ".csv");
    sim::write_csv(csv, res);
    std::ofstream js(prefix + ".json");
    js << res.summary.dump(2) << "\n";
    if (!csv || !js) throw UsageError("cannot write outputs with prefix " + prefix);
  }
  if (o.json) {
    out << res.summary.dump(2) << "\n";
  } else {
    for (const auto& c : res.summary["checks"]) {
      if (!c.contains("pass")) continue;
      out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
      if (c.contains("value")) out << " = " << c["value"].get<double>();
      if (c.contains("max")) out << " (max " << c["max"].get<double>() << ")";
      if (c.contains("min")) out << " (min " << c["min"].get<double>() << ")";
      out << "\n";
    }
    out << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  }
  return res.pass ? kOk : kFailed;
}

inline int cmd_verify_all(const Options& o, std::ostream& out) {
  auto checks = verify::verify_all();
  std::size_t failed = 0;
  json arr = json::array();
  for (const auto& c : checks) {
    failed += c.ok ? 0 : 1;
    if (o.json) arr.push_back({{"criterion", c.criterion}, {"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    else out << (c.ok ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  -- " + c.detail) << "\n";
  }
  if (o.json) out << json{{"checks", arr}, {"failed", failed}}.dump(2) << "\n";
  else out << checks.size() - failed << "/" << checks.size() << " expectations hold\n";
  return failed == 0 ? kOk : kFailed;
}

/// Entry point behind the `noether` executable.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"symbolic Noether analysis and conservation experiments", "noether"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--output", o.output, "output file (simulate: prefix for .csv/.json)");
  app.add_option("--dsl", o.dsl, "additional systems and transformations in the DSL format");
  app.add_option("--constants", o.constants, "numeric constants for simulate, e.g. hbar=1,m=1");
  app.add_option("--tolerance", o.tolerances, "override a simulation threshold, name=value");

  std::string a, b, path;
  auto* list = app.add_subcommand("list", "catalog entries");
  auto* eom = app.add_subcommand("eom", "Euler expressions");
  eom->add_option("system", a)->required();
  auto* cls = app.add_subcommand("classify", "Strict / Quasi / NonNoetherian");
  cls->add_option("system", a)->required();
  cls->add_option("transformation", b)->required();
  auto* cur = app.add_subcommand("current", "Noether currents and conservation");
  cur->add_option("system", a)->required();
  cur->add_option("transformation", b)->required();
  auto* eqv = app.add_subcommand("equiv", "divergence-equivalence of two densities");
  eqv->add_option("a", a)->required();
  eqv->add_option("b", b)->required();
  auto* simc = app.add_subcommand("simulate", "run a simulation config");
  simc->add_option("config", path)->required();
  auto* va = app.add_subcommand("verify-all", "regenerate every catalog expectation");
  for (auto* s : {list, eom, cls, cur, eqv, simc, va}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::ostringstream buf;
  int code = kOk;
  try {
    detail::Registry reg(o.dsl);
    if (*list) code = cmd_list(o, buf);
    else if (*eom) code = cmd_eom(o, reg, a, buf);
    else if (*cls) code = cmd_classify(o, reg, a, b, buf);
    else if (*cur) code = cmd_current(o, reg, a, b, buf);
    else if (*eqv) code = cmd_equiv(o, reg, a, b, buf);
    else if (*simc) code = cmd_simulate(o, path, buf);
    else if (*va) code = cmd_verify_all(o, buf);
  } catch (const ParseError& e) {
    err << "parse error " << e.what() << "\n";
    return kUsage;
  } catch (const sim::ConfigError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  if (o.output && !*simc) {
    std::ofstream f(*o.output);
    if (!f) {
      err << "error: cannot write " << *o.output << "\n";
      return kUsage;
    }
    f << buf.str();
  } else {
    out << buf.str();
  }
  return code;
}

}  // namespace noether::cli
