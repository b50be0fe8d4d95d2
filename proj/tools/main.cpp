// Command-line front end over the C API.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "archicop/archicop.h"

using ojson = nlohmann::ordered_json;

namespace {

struct Failure {
  ac_status status;
  std::string message;
};

void check(ac_status s) {
  if (s != AC_OK) throw Failure{s, ac_last_error()};
}

[[noreturn]] void fail(ac_status s, const std::string& msg) { throw Failure{s, msg}; }

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ojson json_num(double x) { return std::isfinite(x) ? ojson(x) : ojson(num(x)); }

struct GeneratorDeleter {
  void operator()(ac_generator* g) const { ac_generator_free(g); }
};
using GenPtr = std::unique_ptr<ac_generator, GeneratorDeleter>;

struct Config {
  std::string family;
  std::optional<double> theta, a, b;
  std::optional<int> order;
  std::string atoms;
  std::string generator;
  int d = 2;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";
  int grid = 0;
  std::string u;
  std::optional<double> s;
  std::string input;
  std::optional<double> lo, hi;
  std::string algorithm = "williamson";
  int d_max = 0;
  bool kendall = true;
  std::string figure;
};

ojson generator_json(const Config& c) {
  if (!c.generator.empty()) {
    try {
      return ojson::parse(c.generator);
    } catch (const ojson::exception& e) {
      fail(AC_INVALID_PARAMETER, std::string("--generator is not valid JSON: ") + e.what());
    }
  }
  if (c.family.empty()) fail(AC_INVALID_PARAMETER, "need --family or --generator");
  ojson params = ojson::object();
  if (c.family == "clayton" || c.family == "power_kink") {
    if (!c.theta) fail(AC_INVALID_PARAMETER, c.family + " needs --theta");
    params["theta"] = *c.theta;
  } else if (c.family == "reciprocal_uniform") {
    if (!c.a || !c.b) fail(AC_INVALID_PARAMETER, "reciprocal_uniform needs --a and --b");
    params["a"] = *c.a;
    params["b"] = *c.b;
  } else if (c.family == "lower_bound") {
    if (c.order) params["order"] = *c.order;
  } else if (c.family == "discrete_radial") {
    if (c.atoms.empty()) fail(AC_INVALID_PARAMETER, "discrete_radial needs --atoms t:p,...");
    ojson list = ojson::array();
    std::stringstream ss(c.atoms);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail(AC_INVALID_PARAMETER, "atoms must be t:p pairs");
      try {
        list.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
      } catch (const std::exception&) {
        fail(AC_INVALID_PARAMETER, "atoms must be t:p pairs of numbers");
      }
    }
    params["atoms"] = list;
  }
  ojson j;
  j["family"] = c.family;
  j["params"] = params;
  j["d_context"] = c.d;
  return j;
}

GenPtr make_generator(const Config& c) {
  ac_generator* g = nullptr;
  check(ac_generator_from_json(generator_json(c).dump().c_str(), &g));
  return GenPtr(g);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), x);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      fail(AC_INVALID_PARAMETER, std::string("bad number in ") + what + ": '" + item + "'");
    }
    v.push_back(x);
  }
  if (v.empty()) fail(AC_INVALID_PARAMETER, std::string(what) + " is empty");
  return v;
}

struct Table {
  std::size_t n = 0;
  int d = 0;
  std::vector<double> values;
};

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(AC_IO, "cannot open input '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(AC_IO, "input '" + path + "' is empty");
  Table t;
  t.d = 1;
  for (char ch : line) t.d += (ch == ',');
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (int j = 0; j < t.d; ++j) {
      double x = 0.0;
      auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc()) fail(AC_IO, path + ":" + std::to_string(lineno) + ": bad number");
      t.values.push_back(x);
      p = res.ptr;
      if (j + 1 < t.d) {
        if (p == end || *p != ',') {
          fail(AC_IO, path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.d) +
                          " columns");
        }
        ++p;
      }
    }
    if (p != end) fail(AC_IO, path + ":" + std::to_string(lineno) + ": trailing data");
    ++t.n;
  }
  return t;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) fail(AC_IO, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void close() {
    if (!path_.empty()) {
      file_.close();
      if (!file_) fail(AC_IO, "error writing '" + path_ + "'");
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_sidecar(const std::string& command, const Config& c, const CLI::App& sub) {
  if (c.out.empty()) return;
  ojson j;
  j["command"] = command;
  ojson opts = ojson::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_name() == "--help" || o->get_name() == "--out" || o->count() == 0) continue;
    std::string name = o->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    opts[name] = o->as<std::string>();
  }
  j["options"] = opts;
  if (!c.family.empty() || !c.generator.empty()) {
    try {
      j["generator"] = generator_json(c);
    } catch (const Failure&) {
    }
  }
  j["library_version"] = ac_version();
  const std::string path = c.out + ".config.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(AC_IO, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

void emit_json(const Config& c, const std::string& text) {
  Output out(c.out);
  out.stream() << text << '\n';
  out.close();
}

std::string take(char* s) {
  std::string r(s);
  ac_string_free(s);
  return r;
}

// --- subcommands -----------------------------------------------------------

void cmd_sample(const Config& c) {
  if (c.n == 0) fail(AC_INVALID_PARAMETER, "--n must be >= 1");
  std::vector<double> buf(c.n * static_cast<std::size_t>(c.d));
  const char* prefix = "u";
  if (c.algorithm == "frailty") {
    if (c.family != "clayton" || !c.theta) {
      fail(AC_INVALID_PARAMETER, "frailty sampling needs --family clayton --theta > 0");
    }
    check(ac_sample_frailty_clayton(*c.theta, c.d, c.n, c.seed, c.threads, buf.data()));
  } else {
    auto g = make_generator(c);
    if (c.algorithm == "l1") {
      check(ac_sample_l1_symmetric(g.get(), c.d, c.n, c.seed, c.threads, buf.data()));
      prefix = "x";
    } else if (c.algorithm == "williamson") {
      check(ac_sample_copula(g.get(), c.d, c.n, c.seed, c.threads, buf.data()));
    } else {
      fail(AC_INVALID_PARAMETER, "--algorithm must be williamson, frailty or l1");
    }
  }
  Output out(c.out);
  auto& os = out.stream();
  for (int j = 0; j < c.d; ++j) os << (j ? "," : "") << prefix << j + 1;
  os << '\n';
  std::string line;
  for (std::size_t i = 0; i < c.n; ++i) {
    line.clear();
    for (int j = 0; j < c.d; ++j) {
      if (j) line += ',';
      line += num(buf[i * c.d + j]);
    }
    line += '\n';
    os << line;
  }
  out.close();
}

void radial_rows(const Config& c, ac_generator* g, std::ostream& os, const std::string& prefix) {
  ac_radial* raw = nullptr;
  check(ac_radial_from_generator(g, c.d, &raw));
  std::unique_ptr<ac_radial, void (*)(ac_radial*)> r(raw, ac_radial_free);
  double hi = c.hi.value_or(0.0);
  if (!c.hi) {
    double x0 = 0.0;
    check(ac_zero_point(g, &x0));
    if (std::isfinite(x0)) {
      hi = 1.1 * x0;
    } else {
      check(ac_radial_quantile(r.get(), 0.999, &hi));
      hi *= 1.2;
    }
  }
  const double lo = c.lo.value_or(0.0);
  const int points = c.grid > 0 ? c.grid : 201;
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    double f = 0.0;
    check(ac_radial_cdf(r.get(), x, &f));
    double dens = 0.0;
    std::string dcell;
    if (x > 0.0 && ac_radial_density(g, c.d, x, &dens) == AC_OK) dcell = num(dens);
    os << prefix << num(x) << ',' << num(f) << ',' << dcell << '\n';
  }
}

void cmd_radial(const Config& c) {
  Output out(c.out);
  auto& os = out.stream();
  if (c.figure == "1") {
    os << "theta,x,cdf,density\n";
    for (double theta : {-0.3334, -0.3, -0.2, 0.0, 0.2}) {
      Config ci = c;
      ci.family = "clayton";
      ci.generator.clear();
      ci.theta = theta;
      ci.d = 3;
      if (!ci.hi) ci.hi = 8.0;
      auto g = make_generator(ci);
      radial_rows(ci, g.get(), os, num(theta) + ",");
    }
  } else if (!c.figure.empty()) {
    fail(AC_INVALID_PARAMETER, "--figure supports only 1");
  } else {
    auto g = make_generator(c);
    os << "x,cdf,density\n";
    radial_rows(c, g.get(), os, "");
  }
  out.close();
}

void cmd_cdf(const Config& c, bool density) {
  const auto u = parse_list(c.u, "--u");
  Config ci = c;
  ci.d = static_cast<int>(u.size());
  auto g = make_generator(ci);
  ojson j;
  j["u"] = u;
  if (density) {
    double v = 0.0;
    int numeric = 0;
    check(ac_copula_density(g.get(), ci.d, u.data(), &v, &numeric));
    j["density"] = json_num(v);
    j["numeric"] = numeric != 0;
  } else {
    double v = 0.0;
    check(ac_copula_cdf(g.get(), ci.d, u.data(), &v));
    j["cdf"] = json_num(v);
  }
  emit_json(c, j.dump(2));
}

void cmd_kendall(const Config& c) {
  auto g = make_generator(c);
  const int points = c.grid > 0 ? c.grid : 101;
  std::vector<double> x(points), k(points), kr(points);
  for (int i = 0; i < points; ++i) x[i] = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
  check(ac_kendall_function(g.get(), c.d, x.data(), x.size(), k.data(), kr.data()));
  Output out(c.out);
  auto& os = out.stream();
  os << "x,k,k_radial\n";
  for (int i = 0; i < points; ++i) os << num(x[i]) << ',' << num(k[i]) << ',' << num(kr[i]) << '\n';
  out.close();
}

void cmd_tau(const Config& c) {
  auto g = make_generator(c);
  double tau = 0.0, via = 0.0, bound = 0.0;
  check(ac_kendall_tau(g.get(), &tau, &via));
  check(ac_tau_lower_bound(c.d, &bound));
  ojson j;
  j["tau"] = tau;
  j["tau_via_radial"] = via;
  j["lower_bound"] = bound;
  j["lower_bound_d"] = c.d;
  emit_json(c, j.dump(2));
}

void cmd_check(const Config& c) {
  Config ci = c;
  ci.d = 1;  // validate the generator on its own; the check decides the dimension
  auto g = make_generator(ci);
  if (c.d_max > 0) {
    int best = 0;
    check(ac_max_dimension(g.get(), c.d_max, &best));
    ojson j;
    j["d_max"] = c.d_max;
    j["max_dimension"] = best;
    emit_json(c, j.dump(2));
    return;
  }
  int pass = 0;
  char* json = nullptr;
  check(ac_check_d_monotone(g.get(), c.d, c.grid, c.threads, &pass, &json));
  emit_json(c, take(json));
}

void cmd_levelset(const Config& c) {
  if (!c.s) fail(AC_INVALID_PARAMETER, "levelset needs --s");
  auto g = make_generator(c);
  double m = 0.0;
  check(ac_level_set_mass(g.get(), c.d, *c.s, &m));
  ojson j;
  j["s"] = *c.s;
  j["mass"] = m;
  emit_json(c, j.dump(2));
}

void cmd_plod(const Config& c) {
  auto g = make_generator(c);
  char* json = nullptr;
  check(ac_plod_check(g.get(), c.d, c.grid > 0 ? c.grid : 20, &json));
  emit_json(c, take(json));
}

void cmd_diagnose(const Config& c) {
  if (c.input.empty()) fail(AC_INVALID_PARAMETER, "diagnose needs --input");
  const Table t = read_csv(c.input);
  Config ci = c;
  ci.d = t.d;
  auto g = make_generator(ci);
  int pass = 0;
  char* json = nullptr;
  check(ac_diagnose(g.get(), t.values.data(), t.n, t.d, c.threads, c.kendall ? 1 : 0, &pass, &json));
  emit_json(c, take(json));
}

void cmd_fit(const Config& c) {
  if (c.input.empty()) fail(AC_INVALID_PARAMETER, "fit needs --input");
  if (c.family.empty()) fail(AC_INVALID_PARAMETER, "fit needs --family");
  if (!c.lo || !c.hi) fail(AC_INVALID_PARAMETER, "fit needs --lo and --hi");
  const Table t = read_csv(c.input);
  char* json = nullptr;
  check(ac_fit(c.family.c_str(), t.values.data(), t.n, t.d, *c.lo, *c.hi, c.threads, &json));
  emit_json(c, take(json));
}

void add_generator_options(CLI::App* sub, Config& c) {
  sub->add_option("--family", c.family, "clayton, independence, lower_bound, reciprocal_uniform, "
                                        "power_kink, discrete_radial, piecewise_quadratic");
  sub->add_option("--theta", c.theta, "clayton / power_kink parameter");
  sub->add_option("--a", c.a, "reciprocal_uniform lower end");
  sub->add_option("--b", c.b, "reciprocal_uniform upper end");
  sub->add_option("--order", c.order, "lower_bound order m, psi = (1-x)_+^(m-1)");
  sub->add_option("--atoms", c.atoms, "discrete_radial atoms as t:p,t:p,...");
  sub->add_option("--generator", c.generator, "generator as JSON {family, params, d_context}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Archimedean copulas through the Williamson d-transform"};
  app.require_subcommand(1);
  Config c;

  auto* sample = app.add_subcommand("sample", "draw copula observations (CSV)");
  add_generator_options(sample, c);
  sample->add_option("--d", c.d, "dimension");
  sample->add_option("--n", c.n, "number of rows");
  sample->add_option("--seed", c.seed, "64-bit seed");
  sample->add_option("--threads", c.threads, "worker threads (output does not depend on it)");
  sample->add_option("--algorithm", c.algorithm, "williamson | frailty | l1");
  sample->add_option("--out", c.out, "output file (default stdout)");

  auto* radial = app.add_subcommand("radial", "radial CDF and density on a grid (CSV)");
  add_generator_options(radial, c);
  radial->add_option("--d", c.d, "dimension");
  radial->add_option("--grid", c.grid, "grid points");
  radial->add_option("--lo", c.lo, "grid start");
  radial->add_option("--hi", c.hi, "grid end");
  radial->add_option("--figure", c.figure, "1: trivariate Clayton radial laws");
  radial->add_option("--out", c.out, "output file");

  auto* cdf = app.add_subcommand("cdf", "copula CDF at a point");
  add_generator_options(cdf, c);
  cdf->add_option("--u", c.u, "point u1,...,ud")->required();
  cdf->add_option("--out", c.out, "output file");

  auto* density = app.add_subcommand("density", "copula density at a point");
  add_generator_options(density, c);
  density->add_option("--u", c.u, "point u1,...,ud")->required();
  density->add_option("--out", c.out, "output file");

  auto* kendall = app.add_subcommand("kendall", "Kendall function on a grid (CSV)");
  add_generator_options(kendall, c);
  kendall->add_option("--d", c.d, "dimension");
  kendall->add_option("--grid", c.grid, "grid points on [0,1]");
  kendall->add_option("--out", c.out, "output file");

  auto* tau = app.add_subcommand("tau", "Kendall's tau of the bivariate margin");
  add_generator_options(tau, c);
  tau->add_option("--d", c.d, "dimension for the lower bound");
  tau->add_option("--out", c.out, "output file");

  auto* chk = app.add_subcommand("check", "d-monotonicity report (JSON)");
  add_generator_options(chk, c);
  chk->add_option("--d", c.d, "dimension to test");
  chk->add_option("--d-max", c.d_max, "report the largest passing dimension up to this");
  chk->add_option("--grid", c.grid, "grid points (default 512)");
  chk->add_option("--threads", c.threads, "worker threads");
  chk->add_option("--out", c.out, "output file");

  auto* levelset = app.add_subcommand("levelset", "mass of the level set {C = s}");
  add_generator_options(levelset, c);
  levelset->add_option("--d", c.d, "dimension");
  levelset->add_option("--s", c.s, "level in [0,1]");
  levelset->add_option("--out", c.out, "output file");

  auto* plod = app.add_subcommand("plod", "check C >= C_d^L on an interior grid (JSON)");
  add_generator_options(plod, c);
  plod->add_option("--d", c.d, "dimension");
  plod->add_option("--grid", c.grid, "points per axis (default 20)");
  plod->add_option("--out", c.out, "output file");

  auto* diagnose = app.add_subcommand("diagnose", "model checks on a sample CSV (JSON)");
  add_generator_options(diagnose, c);
  diagnose->add_option("--input", c.input, "sample CSV with header")->required();
  diagnose->add_option("--threads", c.threads, "worker threads");
  diagnose->add_option("--kendall", c.kendall, "estimate the Kendall function (1/0)");
  diagnose->add_option("--out", c.out, "output file");

  auto* fit = app.add_subcommand("fit", "fit a one-parameter family to a sample (JSON)");
  fit->add_option("--family", c.family, "clayton, power_kink or reciprocal_uniform (b, a = 1)");
  fit->add_option("--input", c.input, "sample CSV with header")->required();
  fit->add_option("--lo", c.lo, "lower bound");
  fit->add_option("--hi", c.hi, "upper bound");
  fit->add_option("--threads", c.threads, "worker threads");
  fit->add_option("--out", c.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: invalid_parameter: " << e.what() << '\n';
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "sample") cmd_sample(c);
    else if (name == "radial") cmd_radial(c);
    else if (name == "cdf") cmd_cdf(c, false);
    else if (name == "density") cmd_cdf(c, true);
    else if (name == "kendall") cmd_kendall(c);
    else if (name == "tau") cmd_tau(c);
    else if (name == "check") cmd_check(c);
    else if (name == "levelset") cmd_levelset(c);
    else if (name == "plod") cmd_plod(c);
    else if (name == "diagnose") cmd_diagnose(c);
    else if (name == "fit") cmd_fit(c);
    write_sidecar(name, c, *sub);
  } catch (const Failure& f) {
    std::cerr << "error: " << ac_status_name(f.status) << ": " << f.message << '\n';
    return f.status == AC_IO ? 2 : 1;
  }
  return 0;
}
