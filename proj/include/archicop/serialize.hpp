#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "archicop/copula_eval.hpp"
#include "archicop/diagnostics.hpp"
#include "archicop/generator.hpp"
#include "archicop/monotonicity.hpp"
#include "archicop/sampling.hpp"

namespace archicop {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// {"family": ..., "params": {...}, "d_context": d}. Custom generators cannot
/// be serialised and throw Error(invalid_parameter).
std::string generator_to_json(const Generator& g);
Generator generator_from_json(const std::string& text);

/// The "params" object of generator_to_json on its own.
std::string family_params_json(const Generator& g);
FamilyParams family_params_from_json(Family family, const std::string& params_text);

/// CSV with header u1..ud (or x1..xd for l1-symmetric draws), LF endings.
void write_sample_csv(std::ostream& os, const SampleMatrix& m);
/// Parses a numeric CSV with one header line. Throws Error(io) on malformed
/// rows.
SampleMatrix read_sample_csv(std::istream& is);

/// Two-column table "x,y" with the given header names.
void write_xy_csv(std::ostream& os, const std::string& x_name, const std::string& y_name,
                  const std::vector<double>& x, const std::vector<double>& y);

/// Reports as JSON objects with a fixed key order.
std::string to_json(const MonotonicityReport& r);
std::string to_json(const DiagnosticsReport& r);
std::string to_json(const FitResult& r);
std::string to_json(const PlodReport& r);

}  // namespace archicop
