#include "parastep/spec_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "parastep/errors.hpp"

namespace parastep {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string child(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

const json& require(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(child(path, key), "missing field");
  return *it;
}

Expr expr_field(const json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected an expression string");
  try {
    return parse(j.get<std::string>());
  } catch (const SyntaxError& e) {
    throw SpecError(path, e.what());
  }
}

bool bool_field(const json& obj, const char* key, const std::string& path, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw SpecError(child(path, key), "expected true or false");
  return it->get<bool>();
}

std::size_t count_field(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::size_t>(j.get<long long>());
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0 && v == std::floor(v) && v < 1e18) return static_cast<std::size_t>(v);
  }
  throw SpecError(path, "expected a non-negative integer");
}

std::optional<double> optional_real(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return real_field(*it, child(path, key));
}

Component component_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  const json& kind = require(j, "kind", path);
  if (!kind.is_string()) throw SpecError(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "atom") {
    return Atom{real_field(require(j, "t", path), path + ".t"),
                real_field(require(j, "w", path), path + ".w")};
  }
  if (k == "train") {
    AtomTrain tr;
    tr.t0 = real_field(require(j, "t0", path), path + ".t0");
    tr.step = real_field(require(j, "step", path), path + ".step");
    const json& count = require(j, "count", path);
    if (!(count.is_string() && count.get<std::string>() == "inf"))
      tr.count = count_field(count, path + ".count");
    tr.weight = expr_field(require(j, "weight", path), path + ".weight");
    tr.decay = optional_real(j, "decay", path).value_or(0.0);
    tr.mirrored = bool_field(j, "mirrored", path, false);
    return tr;
  }
  if (k == "density") {
    Density d;
    d.rho = expr_field(require(j, "expr", path), path + ".expr");
    const json& support = require(j, "support", path);
    if (!support.is_array() || support.size() != 2)
      throw SpecError(path + ".support", "expected [lower, upper]");
    d.lower = real_field(support[0], path + ".support[0]", true);
    d.upper = real_field(support[1], path + ".support[1]", true);
    d.tail_neg = optional_real(j, "tail_neg", path);
    d.tail_pos = optional_real(j, "tail_pos", path);
    if (const auto it = j.find("moment1"); it != j.end() && !it->is_null()) {
      d.moment1 = expr_field(*it, path + ".moment1");
    }
    return d;
  }
  throw SpecError(path + ".kind", "unknown component kind '" + k + "'");
}

RunConfig run_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  RunConfig c;
  if (const auto it = j.find("z0"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw SpecError(path + ".z0", "expected [x, y]");
    const double x = real_field((*it)[0], path + ".z0[0]");
    const double y = real_field((*it)[1], path + ".z0[1]");
    if (!(y > 0.0)) throw SpecError(path + ".z0[1]", "the starting point must lie in the upper half-plane");
    c.z0 = HPoint(x, y);
  }
  if (const auto it = j.find("n"); it != j.end()) c.n = count_field(*it, path + ".n");
  if (const auto it = j.find("window"); it != j.end()) c.window = count_field(*it, path + ".window");
  if (auto v = optional_real(j, "tol", path)) c.tol = *v;
  if (auto v = optional_real(j, "eps_beta", path)) c.eps_beta = *v;
  if (auto v = optional_real(j, "zero_threshold", path)) c.zero_threshold = *v;
  if (const auto it = j.find("output"); it != j.end()) {
    if (!it->is_string()) throw SpecError(path + ".output", "expected a string");
    c.output = it->get<std::string>();
  }
  try {
    check_run_config(c);
  } catch (const SpecError& e) {
    throw SpecError(path + "." + e.path(), e.what());
  }
  return c;
}

json real_to_json(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return v;
}

}  // namespace

void check_run_config(const RunConfig& c) {
  if (c.n < 1) throw SpecError("n", "the orbit needs at least one step");
  if (!(c.tol > 0.0) || !std::isfinite(c.tol)) throw SpecError("tol", "must be positive");
  if (!(c.eps_beta >= 0.0) || !std::isfinite(c.eps_beta)) throw SpecError("eps_beta", "must be non-negative");
  if (!(c.zero_threshold > 0.0) || !std::isfinite(c.zero_threshold)) {
    throw SpecError("zero_threshold", "must be positive");
  }
  if (c.window > c.n) throw SpecError("window", "exceeds the number of steps");
}

double real_field(const json& j, const std::string& path, bool allow_infinite) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw SpecError(path, "expected a number or a constant expression");
  const std::string s = j.get<std::string>();
  if (s == "inf" || s == "+inf" || s == "-inf") {
    if (!allow_infinite) throw SpecError(path, "infinite value not allowed here");
    return s == "-inf" ? -kInf : kInf;
  }
  try {
    return parse_constant(s);
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
}

MapSpecFile map_spec_from_json(const json& j, const NumericOptions& opts) {
  if (!j.is_object()) throw SpecError("", "the spec must be a JSON object");
  MapSpecFile s;
  s.beta = real_field(require(j, "beta", ""), "beta");
  const bool symmetric = bool_field(j, "symmetric", "", false);
  std::vector<Component> parts;
  if (const auto it = j.find("measure"); it != j.end()) {
    if (!it->is_array()) throw SpecError("measure", "expected a list of components");
    for (std::size_t i = 0; i < it->size(); ++i) {
      parts.push_back(component_from_json((*it)[i], "measure[" + std::to_string(i) + "]"));
    }
  }
  try {
    s.measure = MeasureSpec(parts, symmetric, opts);
  } catch (const DomainError& e) {
    // Locate the offending component; otherwise the symmetry claim is at fault.
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        MeasureSpec({parts[i]}, false, opts);
      } catch (const DomainError& single) {
        throw SpecError("measure[" + std::to_string(i) + "]", single.what());
      }
    }
    throw SpecError(symmetric ? "symmetric" : "measure", e.what());
  }
  if (const auto it = j.find("run"); it != j.end()) s.run = run_from_json(*it, "run");
  return s;
}

MapSpecFile load_map_spec(const std::filesystem::path& file, const NumericOptions& opts) {
  std::ifstream in(file);
  if (!in) throw SpecError("", "cannot read " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  return map_spec_from_json(j, opts);
}

json to_json(const Component& c) {
  return std::visit(
      Overloaded{[](const Atom& a) -> json { return {{"kind", "atom"}, {"t", a.t}, {"w", a.w}}; },
                 [](const AtomTrain& tr) -> json {
                   json out = {{"kind", "train"},           {"t0", tr.t0},       {"step", tr.step},
                               {"weight", tr.weight.str()}, {"decay", tr.decay}, {"mirrored", tr.mirrored}};
                   out["count"] = tr.count ? json(*tr.count) : json("inf");
                   return out;
                 },
                 [](const Density& d) -> json {
                   json out = {{"kind", "density"},
                               {"expr", d.rho.str()},
                               {"support", {real_to_json(d.lower), real_to_json(d.upper)}}};
                   if (d.tail_neg) out["tail_neg"] = *d.tail_neg;
                   if (d.tail_pos) out["tail_pos"] = *d.tail_pos;
                   if (d.moment1) out["moment1"] = d.moment1->str();
                   return out;
                 }},
      c);
}

json to_json(const RunConfig& c) {
  return {{"z0", {c.z0.x(), c.z0.y()}},
          {"n", c.n},
          {"tol", c.tol},
          {"eps_beta", c.eps_beta},
          {"zero_threshold", c.zero_threshold},
          {"window", c.window},
          {"output", c.output}};
}

json to_json(const MapSpecFile& s) {
  json parts = json::array();
  for (const auto& c : s.measure.components()) parts.push_back(to_json(c));
  return {{"beta", s.beta},
          {"symmetric", s.measure.declared_symmetric()},
          {"measure", parts},
          {"run", to_json(s.run)}};
}

json to_json(const Classification& c) {
  return {{"verdict", to_string(c.verdict)},
          {"rule", to_string(c.rule)},
          {"beta_tilde", c.beta_tilde ? json(*c.beta_tilde) : json(nullptr)},
          {"reflected", c.reflected},
          {"notes", c.notes}};
}

json to_json(const EmpiricalVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"d_tail", v.d_tail},
          {"b_estimate", v.b_estimate},
          {"y_final", v.y_final},
          {"y_diverging", v.y_diverging},
          {"tangential", v.tangential ? json(to_string(*v.tangential)) : json(nullptr)}};
}

json to_json(const ValidationReport& r) {
  return {
      {"analytic", to_json(r.analytic)}, {"empirical", to_json(r.empirical)}, {"agree", to_string(r.agree)}};
}

json to_json(const PommerenkeEstimate& p) {
  return {{"estimate", p.estimate}, {"dispersion", p.dispersion}, {"converged", p.converged}};
}

}  // namespace parastep
