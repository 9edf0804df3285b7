#include "freeevt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "freeevt/error.hpp"

namespace freeevt::io {
namespace {

using nlohmann::json;

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : "null";
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorKind::ParseError, std::string("expected an array \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

std::pair<Cdf, std::optional<ExtremeValueLaw>> closed_form_law(const json& tag) {
  if (!tag.is_object()) throw Error(ErrorKind::ParseError, "\"law\" must be an object");
  if (tag.contains("uniform")) {
    const auto& u = tag.at("uniform");
    if (!u.is_array() || u.size() != 2 || !u[0].is_number() || !u[1].is_number()) {
      throw Error(ErrorKind::ParseError, "\"uniform\" must be [lo, hi]");
    }
    return {uniform(u[0].get<double>(), u[1].get<double>()), std::nullopt};
  }
  if (!tag.contains("gamma") || !tag.at("gamma").is_number()) {
    throw Error(ErrorKind::ParseError, "\"law\" needs a numeric \"gamma\" or a \"uniform\" range");
  }
  const double g = tag.at("gamma").get<double>();
  const std::string calculus = tag.value("calculus", "classical");
  if (calculus != "classical" && calculus != "free") {
    throw Error(ErrorKind::ParseError, "\"calculus\" must be \"classical\" or \"free\"");
  }
  const ExtremeValueLaw law{calculus == "free" ? Calculus::Free : Calculus::Classical, regime_of(g), g};
  return {make_law(law), law};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  // %.15g agrees with the shortest round-trip form whenever that form has at
  // most 15 digits, and caps it otherwise.
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

std::string bound_report_json(const BoundReport& r) {
  std::ostringstream s;
  s << "{\"n\":" << r.n << ",\"gamma\":" << json_number(r.gamma)
    << ",\"integral_term\":" << json_number(r.integral_term)
    << ",\"boundary_term\":" << json_number(r.boundary_term)
    << ",\"total\":" << json_number(r.total) << ",\"measured_dk\":" << json_optional(r.measured_dk)
    << ",\"reference_rate\":" << json_number(r.reference_rate) << "}";
  return s.str();
}

std::string table_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  s << "n,dk,stein_total,integral_term,boundary_term,reference\n";
  for (const auto& r : rows) {
    if (r.error) {
      s << r.n << ",,,,," << format_number(r.reference) << "\n";
      continue;
    }
    s << r.n << "," << format_number(r.dk) << "," << format_number(r.stein_total) << ","
      << csv_optional(r.integral_term) << "," << csv_optional(r.boundary_term) << ","
      << format_number(r.reference) << "\n";
  }
  return s.str();
}

std::string table_json(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) s << ",";
    s << "{\"n\":" << r.n;
    if (r.error) {
      s << ",\"dk\":null,\"stein_total\":null,\"integral_term\":null,\"boundary_term\":null";
    } else {
      s << ",\"dk\":" << json_number(r.dk) << ",\"stein_total\":" << json_number(r.stein_total)
        << ",\"integral_term\":" << json_optional(r.integral_term)
        << ",\"boundary_term\":" << json_optional(r.boundary_term);
    }
    s << ",\"reference\":" << json_number(r.reference);
    if (r.error) s << ",\"error\":" << json(*r.error).dump();
    s << "}";
  }
  s << "]\n";
  return s.str();
}

std::string tabulated_json(const TabulatedCdf& t) {
  std::ostringstream s;
  s << "{\"x\":[";
  for (std::size_t i = 0; i < t.x.size(); ++i) s << (i ? "," : "") << json_number(t.x[i]);
  s << "],\"F\":[";
  for (std::size_t i = 0; i < t.F.size(); ++i) s << (i ? "," : "") << json_number(t.F[i]);
  s << "]}\n";
  return s.str();
}

TabulatedInput parse_tabulated(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "expected a JSON object");

  TabulatedInput in;
  in.table.x = number_array(j, "x");
  in.table.F = number_array(j, "F");
  in.table.validate();
  if (j.contains("density")) {
    auto d = number_array(j, "density");
    if (d.size() != in.table.x.size()) {
      throw Error(ErrorKind::InvalidArgument, "\"density\" must have one value per knot");
    }
    for (double v : d) {
      if (!(v >= 0) || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, "\"density\" values must be finite and >= 0");
      }
    }
    in.density = std::move(d);
  }
  if (j.contains("law")) std::tie(in.closed_form, in.law) = closed_form_law(j.at("law"));
  return in;
}

Cdf to_cdf(const TabulatedInput& in) {
  if (in.closed_form) return *in.closed_form;
  Cdf F = make_tabulated(in.table);
  if (!in.density) return F;

  const std::vector<double> x = in.table.x;
  const std::vector<double> d = *in.density;
  // Segment index i with x[i] <= t < x[i+1], or -1 outside.
  auto segment = [x](double t) -> std::ptrdiff_t {
    if (!(t >= x.front() && t < x.back())) return -1;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    return (it - x.begin()) - 1;
  };
  F.density = [x, d, segment](double t) {
    const auto i = segment(t);
    if (i < 0) return 0.0;
    const double w = (t - x[i]) / (x[i + 1] - x[i]);
    return d[i] + w * (d[i + 1] - d[i]);
  };
  F.log_density_derivative = [x, d, segment, dens = F.density](double t) {
    const auto i = segment(t);
    if (i < 0) return std::numeric_limits<double>::quiet_NaN();
    return (d[i + 1] - d[i]) / (x[i + 1] - x[i]) / dens(t);
  };
  return F;
}

}  // namespace freeevt::io
