#pragma once

// Serialization: fixed number formatting, BoundReport / table emitters and
// the tabulated-CDF JSON format {"x": [...], "F": [...]}.

#include <optional>
#include <string>
#include <vector>

#include "freeevt/distributions.hpp"
#include "freeevt/metrics.hpp"
#include "freeevt/stein.hpp"

namespace freeevt::io {

// Shortest round-trip decimal, capped at 15 significant digits. Non-finite
// values print as "nan", "inf", "-inf" (JSON emitters turn them into null).
std::string format_number(double v);

std::string bound_report_json(const BoundReport& r);

std::string table_csv(const std::vector<ConvergenceRow>& rows);
std::string table_json(const std::vector<ConvergenceRow>& rows);

std::string tabulated_json(const TabulatedCdf& t);

// Optional extras accepted next to "x" and "F" in custom-family input.
struct TabulatedInput {
  TabulatedCdf table;
  // Density at the knots; interpolated linearly between them.
  std::optional<std::vector<double>> density;
  // Closed-form tag: {"law": {"calculus": "classical"|"free", "gamma": g}}
  // or {"law": {"uniform": [lo, hi]}}.
  std::optional<Cdf> closed_form;
  std::optional<ExtremeValueLaw> law;  // set for the gamma form of the tag
};

// Throws Error(ParseError) on malformed JSON or a wrong shape, and
// Error(InvalidArgument) when the table itself is invalid.
TabulatedInput parse_tabulated(const std::string& text);

// Cdf for a parsed input: the closed form if tagged, else the tabulated
// CDF (with the supplied density if present).
Cdf to_cdf(const TabulatedInput& in);

}  // namespace freeevt::io
