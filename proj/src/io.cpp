#include "curvstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

namespace curvstab {

using nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  const std::string s(buf);
  // ensure the token parses back as a number
  if (s.find_first_of(".eE") == std::string::npos) return s + ".0";
  return s;
}

void dump_rec(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad1 + ordered_json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad1;
        dump_rec(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path, msg);
}

void check_fields(const ordered_json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
  }
}

double read_double(const ordered_json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end && *end == '\0') return v;
  }
  fail(path, "expected a number");
}

int read_int(const ordered_json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  fail(path, "expected an integer");
}

std::string read_string(const ordered_json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  fail(path, "expected a string");
}

std::vector<double> read_range(const ordered_json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i)
      out.push_back(read_double(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (j.is_object()) {
    check_fields(j, path, {"start", "stop", "count"});
    if (!j.contains("start") || !j.contains("stop") || !j.contains("count"))
      fail(path, "range needs start, stop and count");
    const double a = read_double(j["start"], path + ".start");
    const double b = read_double(j["stop"], path + ".stop");
    const int n = read_int(j["count"], path + ".count");
    if (n < 1) fail(path + ".count", "count must be >= 1");
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1.0));
    return out;
  }
  fail(path, "expected an array or {start, stop, count}");
}

std::vector<int> read_int_list(const ordered_json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(read_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

} // namespace

std::string dump_json(const ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

ordered_json to_json(const EinsteinFactor& f) {
  ordered_json j;
  j["kind"] = to_string(f.kind);
  j["dim"] = f.dim;
  j["einstein_const"] = f.einstein_const;
  if (f.sectional) j["sectional"] = *f.sectional;
  if (f.mu_fn) j["mu_fn"] = *f.mu_fn;
  if (f.mu_oneform) j["mu_oneform"] = *f.mu_oneform;
  j["ric_stable"] = to_string(f.ric_stable);
  if (!f.ft_stable.empty()) {
    ordered_json ft;
    if (f.ft_stable.all) ft["all"] = to_string(*f.ft_stable.all);
    for (const auto& [t, s] : f.ft_stable.entries) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", t);
      ft[buf] = to_string(s);
    }
    j["ft_stable"] = ft;
  }
  return j;
}

ordered_json to_json(const ProductSpace& p) {
  ordered_json j;
  j["factors"] = ordered_json::array();
  for (const auto& f : p.factors) j["factors"].push_back(to_json(f));
  return j;
}

ordered_json to_json(const FunctionalId& f) {
  ordered_json j;
  j["kind"] = f.name();
  if (f.kind == FunctionalId::Kind::Ft) j["t"] = f.t;
  return j;
}

ordered_json to_json(const VariationDirection& d) {
  ordered_json j;
  if (const auto* c = std::get_if<ConformalScale>(&d)) {
    j["type"] = "ConformalScale";
    j["source_factor"] = c->source_factor;
    j["target_factor"] = c->target_factor;
    j["mu"] = c->mu;
    return j;
  }
  if (const auto* m = std::get_if<MixedTT>(&d)) {
    j["type"] = "MixedTT";
    j["nu0"] = m->nu0;
    j["nu1"] = m->nu1;
    if (m->norm_laplacian_sq0) j["norm_laplacian_sq_0"] = *m->norm_laplacian_sq0;
    if (m->norm_laplacian_sq1) j["norm_laplacian_sq_1"] = *m->norm_laplacian_sq1;
    return j;
  }
  const auto& f = std::get<FactorTT>(d);
  j["type"] = "FactorTT";
  j["factor"] = f.factor;
  if (f.factor_hessian_lower_bound) j["factor_hessian_lower_bound"] = *f.factor_hessian_lower_bound;
  return j;
}

ordered_json to_json(const QuadraticFormReport& r) {
  ordered_json j;
  j["functional"] = to_json(r.functional);
  j["direction"] = to_json(r.direction);
  j["defined"] = r.defined;
  j["value"] = r.value;
  if (!r.note.empty()) j["note"] = r.note;
  j["terms"] = ordered_json::array();
  for (const auto& t : r.terms) {
    ordered_json tj;
    tj["label"] = t.label;
    tj["value"] = t.value;
    tj["coeff_delta_sq"] = t.coeff_delta_sq;
    tj["coeff_grad"] = t.coeff_grad;
    tj["constant"] = t.constant;
    j["terms"].push_back(tj);
  }
  return j;
}

ordered_json to_json(const StabilityVerdict& v) {
  ordered_json j;
  j["status"] = to_string(v.status);
  j["witnesses"] = ordered_json::array();
  for (const auto& w : v.witnesses) {
    ordered_json wj;
    wj["direction"] = to_json(w.direction);
    wj["value"] = w.value;
    wj["description"] = w.description;
    j["witnesses"].push_back(wj);
  }
  j["assumptions"] = ordered_json::array();
  for (const auto& a : v.assumptions) j["assumptions"].push_back(a);
  if (v.margin)
    j["margin"] = *v.margin;
  else
    j["margin"] = nullptr;
  return j;
}

ordered_json to_json(const VerificationReport& r) {
  ordered_json j;
  j["case_id"] = r.case_id;
  j["predicted"] = r.predicted;
  j["predicted_from"] = r.predicted_from;
  j["oracle"] = r.oracle;
  j["fd_error"] = r.fd_error;
  j["discrepancy"] = r.discrepancy;
  j["verdict"] = to_string(r.verdict);
  j["notes"] = ordered_json::array();
  for (const auto& n : r.notes) j["notes"].push_back(n);
  return j;
}

EinsteinFactor factor_from_json(const ordered_json& j, const std::string& path) {
  check_fields(j, path,
               {"kind", "dim", "einstein_const", "sectional", "mu_fn", "mu_oneform", "ric_stable",
                "ft_stable"});
  EinsteinFactor f;
  if (!j.contains("kind")) fail(path, "missing required field 'kind'");
  f.kind = factor_kind_from_string(read_string(j["kind"], path + ".kind"));
  if (!j.contains("dim")) fail(path, "missing required field 'dim'");
  f.dim = read_int(j["dim"], path + ".dim");
  if (j.contains("sectional")) f.sectional = read_double(j["sectional"], path + ".sectional");
  if (j.contains("einstein_const")) {
    f.einstein_const = read_double(j["einstein_const"], path + ".einstein_const");
  } else if (f.sectional && f.dim >= 2) {
    f.einstein_const = (f.dim - 1.0) * (*f.sectional);
  } else if (f.dim == 1) {
    f.einstein_const = 0.0;
  } else {
    fail(path, "missing required field 'einstein_const' (no sectional to derive it from)");
  }
  if (j.contains("mu_fn")) f.mu_fn = read_double(j["mu_fn"], path + ".mu_fn");
  if (j.contains("mu_oneform")) f.mu_oneform = read_double(j["mu_oneform"], path + ".mu_oneform");
  if (j.contains("ric_stable"))
    f.ric_stable = tri_state_from_string(read_string(j["ric_stable"], path + ".ric_stable"));
  if (j.contains("ft_stable")) {
    const auto& ft = j["ft_stable"];
    if (!ft.is_object()) fail(path + ".ft_stable", "expected an object");
    for (auto it = ft.begin(); it != ft.end(); ++it) {
      const TriState st = tri_state_from_string(
          read_string(it.value(), path + ".ft_stable." + it.key()));
      if (it.key() == "all") {
        f.ft_stable.all = st;
      } else {
        char* end = nullptr;
        const double t = std::strtod(it.key().c_str(), &end);
        if (!end || *end != '\0')
          fail(path + ".ft_stable." + it.key(), "keys must be t values or 'all'");
        f.ft_stable.entries.emplace_back(t, st);
      }
    }
  }
  return f;
}

ProductSpace product_from_json(const ordered_json& j, const std::string& path) {
  check_fields(j, path, {"factors"});
  if (!j.contains("factors")) fail(path, "missing required field 'factors'");
  const auto& fs = j["factors"];
  if (!fs.is_array()) fail(path + ".factors", "expected an array");
  ProductSpace p;
  for (size_t i = 0; i < fs.size(); ++i)
    p.factors.push_back(factor_from_json(fs[i], path + ".factors[" + std::to_string(i) + "]"));
  return p;
}

FunctionalId functional_from_json(const ordered_json& j, const std::string& path) {
  check_fields(j, path, {"kind", "t"});
  if (!j.contains("kind")) fail(path, "missing required field 'kind'");
  const std::string k = read_string(j["kind"], path + ".kind");
  if (k == "Ric") return FunctionalId::Ric();
  if (k == "S") return FunctionalId::S();
  if (k == "R") return FunctionalId::R();
  if (k == "W2") return FunctionalId::W2();
  if (k == "WnHalf") return FunctionalId::WnHalf();
  if (k == "Ft") {
    if (!j.contains("t")) fail(path, "missing required field 't' for Ft");
    return FunctionalId::Ft(read_double(j["t"], path + ".t"));
  }
  fail(path + ".kind", "unknown functional: " + k);
}

VariationDirection direction_from_json(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) fail(path, "direction needs a 'type' field");
  const std::string type = read_string(j["type"], path + ".type");
  if (type == "ConformalScale") {
    check_fields(j, path, {"type", "source_factor", "target_factor", "mu"});
    ConformalScale c;
    if (!j.contains("source_factor") || !j.contains("target_factor") || !j.contains("mu"))
      fail(path, "ConformalScale needs source_factor, target_factor and mu");
    c.source_factor = read_int(j["source_factor"], path + ".source_factor");
    c.target_factor = read_int(j["target_factor"], path + ".target_factor");
    c.mu = read_double(j["mu"], path + ".mu");
    return c;
  }
  if (type == "MixedTT") {
    check_fields(j, path, {"type", "nu0", "nu1", "norm_laplacian_sq_0", "norm_laplacian_sq_1"});
    MixedTT m;
    if (!j.contains("nu0") || !j.contains("nu1")) fail(path, "MixedTT needs nu0 and nu1");
    m.nu0 = read_double(j["nu0"], path + ".nu0");
    m.nu1 = read_double(j["nu1"], path + ".nu1");
    if (j.contains("norm_laplacian_sq_0"))
      m.norm_laplacian_sq0 = read_double(j["norm_laplacian_sq_0"], path + ".norm_laplacian_sq_0");
    if (j.contains("norm_laplacian_sq_1"))
      m.norm_laplacian_sq1 = read_double(j["norm_laplacian_sq_1"], path + ".norm_laplacian_sq_1");
    return m;
  }
  if (type == "FactorTT") {
    check_fields(j, path, {"type", "factor", "factor_hessian_lower_bound"});
    FactorTT f;
    if (!j.contains("factor")) fail(path, "FactorTT needs a factor index");
    f.factor = read_int(j["factor"], path + ".factor");
    if (j.contains("factor_hessian_lower_bound"))
      f.factor_hessian_lower_bound =
          read_double(j["factor_hessian_lower_bound"], path + ".factor_hessian_lower_bound");
    return f;
  }
  fail(path + ".type", "unknown direction type: " + type);
}

namespace {

RegionGrid grid_from_json(const ordered_json& j, const std::string& path) {
  check_fields(j, path, {"family", "n0", "n1", "mu_over_lambda", "mu0_over_lambda", "t"});
  RegionGrid g;
  if (j.contains("family")) g.family = read_string(j["family"], path + ".family");
  if (j.contains("n0")) g.n0 = read_int_list(j["n0"], path + ".n0");
  if (j.contains("n1")) g.n1 = read_int_list(j["n1"], path + ".n1");
  if (j.contains("mu_over_lambda"))
    g.mu_over_lambda = read_range(j["mu_over_lambda"], path + ".mu_over_lambda");
  if (j.contains("mu0_over_lambda"))
    g.mu0_over_lambda = read_range(j["mu0_over_lambda"], path + ".mu0_over_lambda");
  if (j.contains("t")) g.t = read_range(j["t"], path + ".t");
  return g;
}

} // namespace

RunConfig parse_config(const ordered_json& j) {
  check_fields(j, "config",
               {"command", "product", "functional", "directions", "cases", "grid", "output",
                "tolerances"});
  RunConfig c;
  if (!j.contains("command")) fail("config", "missing required field 'command'");
  c.command = read_string(j["command"], "config.command");
  const std::set<std::string> commands = {"classify", "hessian", "verify", "region", "catalog"};
  if (!commands.count(c.command)) fail("config.command", "unknown command: " + c.command);

  if (j.contains("product")) c.product = product_from_json(j["product"], "config.product");
  if (j.contains("functional"))
    c.functional = functional_from_json(j["functional"], "config.functional");
  if (j.contains("directions")) {
    const auto& ds = j["directions"];
    if (!ds.is_array()) fail("config.directions", "expected an array");
    for (size_t i = 0; i < ds.size(); ++i)
      c.directions.push_back(
          direction_from_json(ds[i], "config.directions[" + std::to_string(i) + "]"));
  }
  if (j.contains("cases")) {
    const auto& cs = j["cases"];
    if (!cs.is_array()) fail("config.cases", "expected an array");
    for (size_t i = 0; i < cs.size(); ++i)
      c.cases.push_back(read_string(cs[i], "config.cases[" + std::to_string(i) + "]"));
  }
  if (j.contains("grid")) c.grid = grid_from_json(j["grid"], "config.grid");
  if (j.contains("output")) {
    c.output = read_string(j["output"], "config.output");
    if (c.output != "json" && c.output != "csv")
      fail("config.output", "output must be 'json' or 'csv'");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    check_fields(t, "config.tolerances", {"criticality", "marginal_band", "validation"});
    if (t.contains("criticality"))
      c.tolerances.criticality_tol = read_double(t["criticality"], "config.tolerances.criticality");
    if (t.contains("marginal_band"))
      c.tolerances.marginal_band = read_double(t["marginal_band"], "config.tolerances.marginal_band");
    if (t.contains("validation")) read_double(t["validation"], "config.tolerances.validation");
  }

  // per-command requirements
  if (c.command == "classify" && (!c.product || !c.functional))
    fail("config", "classify needs 'product' and 'functional'");
  if (c.command == "hessian" && (!c.product || !c.functional || c.directions.empty()))
    fail("config", "hessian needs 'product', 'functional' and 'directions'");
  if (c.command == "region" && (!c.functional || !c.grid))
    fail("config", "region needs 'functional' and 'grid'");
  return c;
}

namespace {

std::string region_csv(const std::vector<RegionRow>& rows) {
  std::string out;
  if (rows.empty()) return out;
  for (size_t i = 0; i < rows[0].params.size(); ++i) {
    out += rows[0].params[i].first;
    out += ",";
  }
  out += "status\n";
  char buf[40];
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.params) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      out += ",";
    }
    out += r.status + "\n";
  }
  return out;
}

} // namespace

int run(const RunConfig& config, const RunFlags& flags, std::ostream& out) {
  const std::string output = flags.output_override.value_or(config.output);
  ClassifyOptions opts = config.tolerances;
  opts.auto_rescale = flags.auto_rescale;

  if (config.command == "classify") {
    const auto verdict = classify(*config.functional, *config.product, opts);
    out << dump_json(to_json(verdict));
    if (flags.strict && verdict.status == Status::Indeterminate) return 3;
    return 0;
  }

  if (config.command == "hessian") {
    ordered_json j;
    j["reports"] = ordered_json::array();
    for (const auto& dir : config.directions) {
      try {
        j["reports"].push_back(to_json(hessian(*config.functional, *config.product, dir)));
      } catch (const std::exception& e) {
        ordered_json err;
        err["direction"] = to_json(dir);
        err["error"] = e.what();
        j["reports"].push_back(err);
      }
    }
    out << dump_json(j);
    return 0;
  }

  if (config.command == "verify") {
    std::vector<VerificationReport> reports;
    std::vector<std::string> ids = config.cases;
    if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = builtin_cases(false);
    for (const auto& id : ids) {
      if (id == "continuation_suite") {
        for (auto& r : continuation_suite()) reports.push_back(std::move(r));
      } else if (id == "consistency_suite") {
        for (auto& r : consistency_suite()) reports.push_back(std::move(r));
      } else {
        reports.push_back(verify_case(id));
      }
    }
    ordered_json j;
    j["reports"] = ordered_json::array();
    bool any_refuted = false;
    for (const auto& r : reports) {
      j["reports"].push_back(to_json(r));
      any_refuted = any_refuted || r.verdict == VerificationReport::Verdict::Refuted;
    }
    out << dump_json(j);
    return any_refuted ? 1 : 0;
  }

  if (config.command == "region") {
    const auto rows = region_scan(*config.functional, *config.grid, opts);
    if (output == "csv") {
      out << region_csv(rows);
    } else {
      ordered_json j;
      j["rows"] = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json rj;
        for (const auto& [k, v] : r.params) rj[k] = v;
        rj["status"] = r.status;
        j["rows"].push_back(rj);
      }
      out << dump_json(j);
    }
    if (flags.strict) {
      bool all_ind = !rows.empty();
      for (const auto& r : rows) all_ind = all_ind && r.status == "Indeterminate";
      if (all_ind) return 3;
    }
    return 0;
  }

  if (config.command == "catalog") {
    ordered_json j;
    j["entries"] = ordered_json::array();
    for (const auto& e : catalog()) {
      ordered_json ej;
      ej["name"] = e.name;
      ej["predicate"] = e.predicate;
      ej["functional"] = to_json(e.functional);
      ej["expected"] = to_string(e.expected);
      ej["samples"] = ordered_json::array();
      bool all_match = true;
      for (const auto& s : e.samples) {
        ordered_json sj;
        sj["product"] = to_json(s);
        std::string st;
        try {
          st = to_string(classify(e.functional, s, opts).status);
        } catch (const std::exception& ex) {
          st = std::string("error: ") + ex.what();
        }
        sj["classify_status"] = st;
        all_match = all_match && st == to_string(e.expected);
        ej["samples"].push_back(sj);
      }
      ej["match"] = all_match;
      j["entries"].push_back(ej);
    }
    out << dump_json(j);
    return 0;
  }

  throw ConfigError("config.command", "unknown command: " + config.command);
}

} // namespace curvstab
