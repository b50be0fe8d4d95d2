#include "archicop/archicop.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "archicop/copula_eval.hpp"
#include "archicop/diagnostics.hpp"
#include "archicop/error.hpp"
#include "archicop/generator.hpp"
#include "archicop/monotonicity.hpp"
#include "archicop/radial.hpp"
#include "archicop/sampling.hpp"
#include "archicop/serialize.hpp"
#include "archicop/williamson.hpp"

struct ac_generator {
  archicop::Generator g;
};

struct ac_radial {
  archicop::RadialDistribution r;
};

namespace {

thread_local std::string last_error;

template <class F>
ac_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return AC_OK;
  } catch (const archicop::Error& e) {
    last_error = e.what();
    return static_cast<ac_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return AC_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return AC_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return AC_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    throw archicop::Error(archicop::ErrorCode::invalid_parameter, std::string(what) + " is NULL");
  }
}

void need_dim(int d) {
  if (d < 2) throw archicop::Error(archicop::ErrorCode::invalid_parameter, "dimension d must be >= 2");
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

archicop::SampleMatrix wrap_sample(const double* u, size_t n, int d) {
  need(u, "sample");
  need_dim(d);
  archicop::SampleMatrix m(n, static_cast<std::size_t>(d));
  std::memcpy(m.values.data(), u, n * static_cast<std::size_t>(d) * sizeof(double));
  m.meta.algorithm = "input";
  return m;
}

void copy_out(const archicop::SampleMatrix& m, double* out) {
  std::memcpy(out, m.values.data(), m.values.size() * sizeof(double));
}

}  // namespace

extern "C" {

const char* ac_version(void) { return "0.1.0"; }

const char* ac_last_error(void) { return last_error.c_str(); }

const char* ac_status_name(ac_status status) {
  if (status == AC_OK) return "ok";
  return archicop::error_code_name(static_cast<archicop::ErrorCode>(status));
}

void ac_string_free(char* s) { std::free(s); }

ac_status ac_generator_create(const char* family, const double* params, size_t n_params,
                              int d_context, ac_generator** out) {
  return guard([&] {
    need(family, "family");
    need(out, "out");
    if (n_params > 0) need(params, "params");
    const auto fam = archicop::family_from_name(family);
    if (!fam || *fam == archicop::Family::custom) {
      throw archicop::Error(archicop::ErrorCode::invalid_parameter,
                            std::string("unknown family '") + family + "'");
    }
    archicop::FamilyParams p;
    auto expect = [&](size_t lo, size_t hi) {
      if (n_params < lo || n_params > hi) {
        throw archicop::Error(archicop::ErrorCode::invalid_parameter,
                              std::string("wrong number of parameters for ") + family);
      }
    };
    switch (*fam) {
      case archicop::Family::clayton:
      case archicop::Family::power_kink:
        expect(1, 1);
        p.theta = params[0];
        break;
      case archicop::Family::reciprocal_uniform:
        expect(2, 2);
        p.a = params[0];
        p.b = params[1];
        break;
      case archicop::Family::lower_bound:
        expect(0, 1);
        if (n_params == 1) {
          if (params[0] != std::floor(params[0])) {
            throw archicop::Error(archicop::ErrorCode::invalid_parameter, "order must be an integer");
          }
          p.order = static_cast<int>(params[0]);
        }
        break;
      case archicop::Family::discrete_radial:
        if (n_params == 0 || n_params % 2 != 0) {
          throw archicop::Error(archicop::ErrorCode::invalid_parameter,
                                "discrete_radial needs (location, mass) pairs");
        }
        for (size_t i = 0; i < n_params; i += 2) p.atoms.push_back({params[i], params[i + 1]});
        break;
      default:
        expect(0, 0);
        break;
    }
    *out = new ac_generator{archicop::make_family(*fam, p, d_context)};
  });
}

ac_status ac_generator_from_json(const char* json, ac_generator** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new ac_generator{archicop::generator_from_json(json)};
  });
}

ac_status ac_generator_to_json(const ac_generator* g, char** out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    *out = dup_string(archicop::generator_to_json(g->g));
  });
}

void ac_generator_free(ac_generator* g) { delete g; }

ac_status ac_psi(const ac_generator* g, double x, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    if (!(x >= 0.0)) throw archicop::Error(archicop::ErrorCode::domain, "psi: x must be >= 0");
    *out = g->g.psi(x);
  });
}

ac_status ac_psi_inv(const ac_generator* g, double u, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    if (!(u >= 0.0 && u <= 1.0)) {
      throw archicop::Error(archicop::ErrorCode::domain, "psi_inv: u must lie in [0, 1]");
    }
    *out = g->g.psi_inv(u);
  });
}

ac_status ac_psi_deriv(const ac_generator* g, double x, int k, ac_side side, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    if (k < 0) throw archicop::Error(archicop::ErrorCode::invalid_parameter, "order k must be >= 0");
    if (!(x > 0.0)) throw archicop::Error(archicop::ErrorCode::domain, "derivative needs x > 0");
    *out = g->g.deriv(x, k, side == AC_LEFT ? archicop::Side::left : archicop::Side::right);
  });
}

ac_status ac_zero_point(const ac_generator* g, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    *out = g->g.zero_point();
  });
}

ac_status ac_williamson_transform_atoms(const double* locations, const double* masses, size_t n,
                                        int d, double x, double* out) {
  return guard([&] {
    need(locations, "locations");
    need(masses, "masses");
    need(out, "out");
    need_dim(d);
    std::vector<archicop::Atom> atoms;
    for (size_t i = 0; i < n; ++i) atoms.push_back({locations[i], masses[i]});
    *out = archicop::williamson_transform(atoms, d, x);
  });
}

ac_status ac_inverse_williamson(const ac_generator* g, int d, double x, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    need_dim(d);
    *out = archicop::inverse_williamson(g->g, d, x);
  });
}

ac_status ac_radial_from_generator(const ac_generator* g, int d, ac_radial** out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    need_dim(d);
    *out = new ac_radial{archicop::radial_from_generator(g->g, d)};
  });
}

void ac_radial_free(ac_radial* r) { delete r; }

ac_status ac_radial_cdf(const ac_radial* r, double x, double* out) {
  return guard([&] {
    need(r, "radial");
    need(out, "out");
    *out = r->r.cdf(x);
  });
}

ac_status ac_radial_quantile(const ac_radial* r, double u, double* out) {
  return guard([&] {
    need(r, "radial");
    need(out, "out");
    *out = r->r.quantile(u);
  });
}

ac_status ac_radial_atoms(const ac_radial* r, double* locations, double* masses, size_t capacity,
                          size_t* count) {
  return guard([&] {
    need(r, "radial");
    need(count, "count");
    const auto& atoms = r->r.atoms();
    *count = atoms.size();
    if (capacity > 0) {
      need(locations, "locations");
      need(masses, "masses");
    }
    for (size_t i = 0; i < atoms.size() && i < capacity; ++i) {
      locations[i] = atoms[i].location;
      masses[i] = atoms[i].mass;
    }
  });
}

ac_status ac_radial_density(const ac_generator* g, int d, double x, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    need_dim(d);
    const auto v = archicop::radial_density(g->g, d, x);
    if (!v) {
      throw archicop::Error(archicop::ErrorCode::no_density,
                            "radial law has no closed-form density in this dimension");
    }
    *out = *v;
  });
}

ac_status ac_sample_copula(const ac_generator* g, int d, size_t n, uint64_t seed, unsigned threads,
                           double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    need_dim(d);
    archicop::SamplingOptions opts;
    opts.threads = threads;
    copy_out(archicop::sample_copula(g->g, d, n, seed, opts), out);
  });
}

ac_status ac_sample_l1_symmetric(const ac_generator* g, int d, size_t n, uint64_t seed,
                                 unsigned threads, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    need_dim(d);
    archicop::SamplingOptions opts;
    opts.threads = threads;
    copy_out(archicop::sample_l1_symmetric(g->g, d, n, seed, opts), out);
  });
}

ac_status ac_sample_frailty_clayton(double theta, int d, size_t n, uint64_t seed, unsigned threads,
                                    double* out) {
  return guard([&] {
    need(out, "out");
    need_dim(d);
    archicop::SamplingOptions opts;
    opts.threads = threads;
    copy_out(archicop::sample_frailty_clayton(theta, d, n, seed, opts), out);
  });
}

ac_status ac_copula_cdf(const ac_generator* g, int d, const double* u, double* out) {
  return guard([&] {
    need(g, "generator");
    need(u, "u");
    need(out, "out");
    need_dim(d);
    for (int i = 0; i < d; ++i) {
      if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
        throw archicop::Error(archicop::ErrorCode::domain, "u must lie in [0, 1]^d");
      }
    }
    *out = archicop::copula_cdf(g->g, {u, static_cast<size_t>(d)});
  });
}

ac_status ac_copula_density(const ac_generator* g, int d, const double* u, double* out,
                            int* numeric) {
  return guard([&] {
    need(g, "generator");
    need(u, "u");
    need(out, "out");
    need_dim(d);
    const auto v = archicop::copula_density(g->g, d, {u, static_cast<size_t>(d)});
    *out = v.value;
    if (numeric) *numeric = v.numeric ? 1 : 0;
  });
}

ac_status ac_level_set_mass(const ac_generator* g, int d, double s, double* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    *out = archicop::level_set_mass(g->g, d, s);
  });
}

ac_status ac_kendall_function(const ac_generator* g, int d, const double* x, size_t n, double* k,
                              double* k_radial) {
  return guard([&] {
    need(g, "generator");
    need(x, "x");
    need(k, "k");
    need_dim(d);
    if (k_radial) {
      const auto kf = archicop::kendall_function(g->g, d);
      for (size_t i = 0; i < n; ++i) {
        k[i] = kf(x[i]);
        k_radial[i] = kf.via_radial(x[i]);
      }
    } else {
      for (size_t i = 0; i < n; ++i) k[i] = archicop::kendall_value(g->g, d, x[i]);
    }
  });
}

ac_status ac_kendall_tau(const ac_generator* g, double* tau, double* via_radial) {
  return guard([&] {
    need(g, "generator");
    need(tau, "tau");
    const auto t = archicop::kendall_tau_both(g->g);
    *tau = t.value;
    if (via_radial) *via_radial = t.via_radial;
  });
}

ac_status ac_tau_lower_bound(int d, double* out) {
  return guard([&] {
    need(out, "out");
    *out = archicop::tau_lower_bound(d);
  });
}

ac_status ac_w_volume(int d, const double* lo, const double* hi, double* out) {
  return guard([&] {
    need(lo, "lo");
    need(hi, "hi");
    need(out, "out");
    if (d < 1) throw archicop::Error(archicop::ErrorCode::invalid_parameter, "d must be >= 1");
    *out = archicop::w_volume({lo, static_cast<size_t>(d)}, {hi, static_cast<size_t>(d)});
  });
}

ac_status ac_plod_check(const ac_generator* g, int d, int grid_resolution, char** json) {
  return guard([&] {
    need(g, "generator");
    need(json, "json");
    *json = dup_string(archicop::to_json(archicop::plod_dominates(g->g, d, grid_resolution)));
  });
}

ac_status ac_check_d_monotone(const ac_generator* g, int d, int grid_points, unsigned threads,
                              int* pass, char** json) {
  return guard([&] {
    need(g, "generator");
    archicop::MonotonicityOptions opts;
    if (grid_points > 0) opts.grid_points = grid_points;
    opts.threads = threads;
    const auto rep = archicop::check_d_monotone(g->g, d, opts);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (json) *json = dup_string(archicop::to_json(rep));
  });
}

ac_status ac_max_dimension(const ac_generator* g, int d_max, int* out) {
  return guard([&] {
    need(g, "generator");
    need(out, "out");
    *out = archicop::max_dimension(g->g, d_max);
  });
}

ac_status ac_diagnose(const ac_generator* g, const double* u, size_t n, int d, unsigned threads,
                      int with_kendall, int* pass, char** json) {
  return guard([&] {
    need(g, "generator");
    archicop::DiagnosticsOptions opts;
    opts.threads = threads;
    opts.kendall = with_kendall != 0;
    const auto rep = archicop::diagnose(g->g, wrap_sample(u, n, d), opts);
    if (pass) *pass = rep.pass ? 1 : 0;
    if (json) *json = dup_string(archicop::to_json(rep));
  });
}

ac_status ac_empirical_kendall(const double* u, size_t n, int d, unsigned threads, const double* x,
                               size_t m, double* out) {
  return guard([&] {
    need(x, "x");
    need(out, "out");
    const auto emp = archicop::empirical_kendall(wrap_sample(u, n, d), threads);
    for (size_t i = 0; i < m; ++i) out[i] = emp(x[i]);
  });
}

ac_status ac_fit(const char* family, const double* u, size_t n, int d, double lo, double hi,
                 unsigned threads, char** json) {
  return guard([&] {
    need(family, "family");
    need(json, "json");
    const auto fam = archicop::family_from_name(family);
    if (!fam) {
      throw archicop::Error(archicop::ErrorCode::invalid_parameter,
                            std::string("unknown family '") + family + "'");
    }
    archicop::FitOptions opts;
    opts.threads = threads;
    *json = dup_string(archicop::to_json(archicop::fit_generator(*fam, wrap_sample(u, n, d), lo, hi, opts)));
  });
}

}  // extern "C"
