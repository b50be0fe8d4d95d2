#include "archicop/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "archicop/error.hpp"

namespace archicop {

using ojson = nlohmann::ordered_json;

namespace {

ojson params_object(const Generator& g) {
  const FamilyParams& p = g.params();
  ojson out = ojson::object();
  switch (g.family()) {
    case Family::clayton:
    case Family::power_kink:
      out["theta"] = p.theta;
      break;
    case Family::reciprocal_uniform:
      out["a"] = p.a;
      out["b"] = p.b;
      break;
    case Family::lower_bound:
      out["order"] = p.order;
      break;
    case Family::discrete_radial: {
      ojson atoms = ojson::array();
      for (const Atom& a : p.atoms) atoms.push_back({a.location, a.mass});
      out["atoms"] = atoms;
      break;
    }
    case Family::independence:
    case Family::piecewise_quadratic:
      break;
    case Family::custom:
      throw Error(ErrorCode::invalid_parameter, "custom generators cannot be serialised");
  }
  return out;
}

double number_field(const ojson& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw Error(ErrorCode::invalid_parameter, std::string("missing numeric parameter '") + key + "'");
  }
  return j[key].get<double>();
}

FamilyParams params_from(Family family, const ojson& j) {
  FamilyParams p;
  if (!j.is_object()) throw Error(ErrorCode::invalid_parameter, "params must be a JSON object");
  switch (family) {
    case Family::clayton:
    case Family::power_kink:
      p.theta = number_field(j, "theta");
      break;
    case Family::reciprocal_uniform:
      p.a = number_field(j, "a");
      p.b = number_field(j, "b");
      break;
    case Family::lower_bound:
      if (j.contains("order")) p.order = static_cast<int>(number_field(j, "order"));
      break;
    case Family::discrete_radial:
      if (!j.contains("atoms") || !j["atoms"].is_array()) {
        throw Error(ErrorCode::invalid_parameter, "discrete_radial needs an 'atoms' array");
      }
      for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
          throw Error(ErrorCode::invalid_parameter, "atoms must be [location, mass] pairs");
        }
        p.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      break;
    default:
      break;
  }
  return p;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string family_params_json(const Generator& g) {
  if (g.family() == Family::custom) return "{}";
  return params_object(g).dump();
}

std::string generator_to_json(const Generator& g) {
  ojson j;
  j["family"] = std::string(family_name(g.family()));
  j["params"] = params_object(g);
  j["d_context"] = g.d_context();
  return j.dump();
}

FamilyParams family_params_from_json(Family family, const std::string& text) {
  try {
    return params_from(family, ojson::parse(text));
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("bad params JSON: ") + e.what());
  }
}

Generator generator_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("bad generator JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw Error(ErrorCode::invalid_parameter, "generator JSON needs a 'family' string");
  }
  const auto fam = family_from_name(j["family"].get<std::string>());
  if (!fam || *fam == Family::custom) {
    throw Error(ErrorCode::invalid_parameter, "unknown family '" + j["family"].get<std::string>() + "'");
  }
  const ojson params = j.contains("params") ? j["params"] : ojson::object();
  int d = 2;
  if (j.contains("d_context")) {
    if (!j["d_context"].is_number_integer()) {
      throw Error(ErrorCode::invalid_parameter, "d_context must be an integer");
    }
    d = j["d_context"].get<int>();
  }
  return make_family(*fam, params_from(*fam, params), d);
}

void write_sample_csv(std::ostream& os, const SampleMatrix& m) {
  const char* prefix = m.meta.algorithm == "l1_symmetric" ? "x" : "u";
  for (std::size_t j = 0; j < m.d; ++j) os << (j ? "," : "") << prefix << j + 1;
  os << '\n';
  std::string line;
  for (std::size_t i = 0; i < m.n; ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.d; ++j) {
      if (j) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    os << line;
  }
}

SampleMatrix read_sample_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::io, "empty CSV input");
  std::size_t d = 1;
  for (char c : line) d += (c == ',');
  SampleMatrix m;
  m.d = d;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw Error(ErrorCode::io, "CSV line " + std::to_string(lineno) + ": bad number");
      }
      m.values.push_back(v);
      p = res.ptr;
      if (j + 1 < d) {
        if (p == end || *p != ',') {
          throw Error(ErrorCode::io, "CSV line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(d) + " columns");
        }
        ++p;
      }
    }
    if (p != end) {
      throw Error(ErrorCode::io, "CSV line " + std::to_string(lineno) + ": trailing data");
    }
    ++m.n;
  }
  m.meta.algorithm = "input";
  m.meta.params_json = "{}";
  return m;
}

void write_xy_csv(std::ostream& os, const std::string& x_name, const std::string& y_name,
                  const std::vector<double>& x, const std::vector<double>& y) {
  os << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    os << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
  }
}

namespace {

ojson number_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

}  // namespace

std::string to_json(const MonotonicityReport& r) {
  ojson j;
  j["d"] = r.d;
  j["pass"] = r.pass;
  j["certification"] = r.certification;
  j["numeric_derivatives"] = r.numeric_derivatives;
  ojson orders = ojson::array();
  for (const auto& o : r.orders) {
    ojson e;
    e["order"] = o.order;
    e["points"] = o.points;
    e["min_signed_value"] = number_or_null(o.min_value);
    e["pass"] = o.pass;
    orders.push_back(e);
  }
  j["orders"] = orders;
  ojson shape;
  shape["order"] = r.d - 2;
  shape["nonincreasing"] = r.shape.nonincreasing;
  shape["convex"] = r.shape.convex;
  shape["continuous_at_kinks"] = r.shape.continuous;
  shape["max_increase"] = r.shape.max_increase;
  shape["max_convexity_gap"] = r.shape.max_convexity_gap;
  shape["max_continuity_gap"] = r.shape.max_continuity_gap;
  j["shape"] = shape;
  if (r.first_violation) {
    ojson v;
    v["x"] = r.first_violation->x;
    v["order"] = r.first_violation->order;
    v["value"] = number_or_null(r.first_violation->value);
    v["kind"] = r.first_violation->kind;
    j["first_violation"] = v;
  } else {
    j["first_violation"] = nullptr;
  }
  ojson grid;
  grid["points"] = r.grid.points;
  grid["x_min"] = r.grid.x_min;
  grid["x_max"] = r.grid.x_max;
  grid["refined_at"] = r.grid.refined_at;
  j["grid"] = grid;
  return j.dump(2);
}

std::string to_json(const DiagnosticsReport& r) {
  ojson j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["excluded_rows"] = r.excluded;
  j["pass"] = r.pass;
  ojson radial;
  radial["ks"] = r.radial.ks;
  radial["threshold"] = r.thresholds.radial_ks;
  radial["pass"] = r.radial_pass;
  ojson atoms = ojson::array();
  for (const auto& a : r.radial.atoms) {
    ojson e;
    e["location"] = a.location;
    e["model_mass"] = a.model_mass;
    e["empirical_mass"] = a.empirical_mass;
    atoms.push_back(e);
  }
  radial["atoms"] = atoms;
  j["radial"] = radial;
  ojson uni;
  uni["ks"] = r.uniformity_ks;
  uni["threshold"] = r.thresholds.uniformity_ks;
  uni["pass"] = r.uniformity_pass;
  j["uniformity"] = uni;
  ojson ind;
  ind["tau"] = r.independence_tau;
  ind["max_abs_tau"] = r.max_abs_tau;
  ind["threshold"] = r.thresholds.independence_tau;
  ind["pass"] = r.independence_pass;
  j["independence"] = ind;
  if (r.kendall) {
    ojson k;
    k["sup_distance_to_model"] = number_or_null(r.kendall_distance.value_or(NAN));
    ojson xs = ojson::array(), ys = ojson::array();
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      xs.push_back(x);
      ys.push_back((*r.kendall)(x));
    }
    k["x"] = xs;
    k["k_hat"] = ys;
    j["kendall"] = k;
  } else {
    j["kendall"] = nullptr;
  }
  return j.dump(2);
}

std::string to_json(const FitResult& r) {
  ojson j;
  j["family"] = std::string(family_name(r.family));
  j["parameter"] = r.parameter;
  j["value"] = r.value;
  j["distance"] = r.distance;
  j["evaluations"] = r.evaluations;
  j["bounds"] = {r.lo, r.hi};
  return j.dump(2);
}

std::string to_json(const PlodReport& r) {
  ojson j;
  j["pass"] = r.pass;
  j["max_violation"] = r.max_violation;
  j["worst_point"] = r.worst_point;
  j["points_checked"] = r.points_checked;
  return j.dump(2);
}

}  // namespace archicop
