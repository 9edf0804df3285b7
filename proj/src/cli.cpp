#include "freeevt/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "freeevt/error.hpp"
#include "freeevt/families.hpp"
#include "freeevt/io.hpp"
#include "freeevt/metrics.hpp"

namespace freeevt::cli {
namespace {

constexpr const char* kNumericRhoWarning =
    "rho_n obtained by numerical differentiation; bound accuracy is limited";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

io::TabulatedInput load_input(const std::string& path) { return io::parse_tabulated(read_file(path)); }

// Checks family/gamma consistency and returns the effective gamma.
double resolve_gamma(const CliConfig& c) {
  switch (c.family) {
    case Family::Gumbel:
      if (c.gamma && *c.gamma != 0.0) throw Error(ErrorKind::InvalidArgument, "gumbel family needs gamma = 0");
      return 0.0;
    case Family::Frechet:
      if (!c.gamma || !(*c.gamma > 0)) throw Error(ErrorKind::InvalidArgument, "frechet family needs --gamma > 0");
      return *c.gamma;
    case Family::Weibull:
      if (!c.gamma || !(*c.gamma < 0)) throw Error(ErrorKind::InvalidArgument, "weibull family needs --gamma < 0");
      return *c.gamma;
    case Family::Custom:
      if (!c.input_path) throw Error(ErrorKind::InvalidArgument, "custom family needs --input");
      if (!c.gamma) throw Error(ErrorKind::InvalidArgument, "custom family needs --gamma");
      return *c.gamma;
  }
  return 0.0;
}

struct FamilySource {
  double gamma = 0.0;
  std::optional<io::TabulatedInput> input;
  std::optional<Cdf> sample;  // custom U

  NormingSequence norming(const CliConfig& c, int n) const {
    if (c.a && c.b) return {*c.a, *c.b, n};
    if (c.a || c.b) throw Error(ErrorKind::InvalidArgument, "--a and --b go together");
    if (input && input->law) return norming_constants(*input->law, n);
    throw Error(ErrorKind::InvalidArgument, "custom family needs --a and --b");
  }

  WorkedFamily build(const CliConfig& c, int n) const {
    if (!sample) return worked_family(gamma, n);
    return generic_family(*sample, gamma, norming(c, n));
  }
};

FamilySource family_source(const CliConfig& c) {
  FamilySource src;
  src.gamma = resolve_gamma(c);
  if (c.family == Family::Custom) {
    src.input = load_input(*c.input_path);
    src.sample = io::to_cdf(*src.input);
  }
  return src;
}

int required_n(const CliConfig& c) {
  if (!c.n) throw Error(ErrorKind::InvalidArgument, "--n is required");
  if (*c.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be positive");
  return *c.n;
}

// Law named by family/gamma and --free/--classical, or the custom input.
Cdf base_law(const CliConfig& c) {
  if (c.family == Family::Custom) return io::to_cdf(load_input(*c.input_path));
  const double g = resolve_gamma(c);
  return c.free_calculus ? free_law(g) : classical_law(g);
}

std::string emit_law(const CliConfig& c) {
  if (c.x.empty()) throw Error(ErrorKind::InvalidArgument, "law needs at least one --x");
  Cdf F;
  if (c.n) {
    F = family_source(c).build(c, required_n(c)).cdf;
  } else {
    F = base_law(c);
  }
  std::ostringstream s;
  if (c.format == Format::Csv) {
    s << "x,F\n";
    for (double x : c.x) s << io::format_number(x) << "," << io::format_number(eval_cdf(F, x)) << "\n";
  } else {
    s << "[";
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      s << (i ? "," : "") << "{\"x\":" << io::format_number(c.x[i])
        << ",\"F\":" << io::format_number(eval_cdf(F, c.x[i])) << "}";
    }
    s << "]\n";
  }
  return s.str();
}

std::string emit_convolve(const CliConfig& c) {
  std::vector<double> knots;
  Cdf F;
  if (c.input_path) {
    auto in = load_input(*c.input_path);
    knots = in.table.x;
    F = io::to_cdf(in);
  } else {
    F = base_law(c);
  }
  Cdf H;
  if (c.input2_path) {
    auto in2 = load_input(*c.input2_path);
    knots.insert(knots.end(), in2.table.x.begin(), in2.table.x.end());
    H = free_max_conv_pair(F, io::to_cdf(in2));
  } else {
    H = free_max_power(F, c.n ? required_n(c) : 2);
  }
  if (knots.empty()) {
    for (int k = 0; k <= 200; ++k) {
      const double p = std::clamp(k / 200.0, 1e-6, 1.0 - 1e-6);
      knots.push_back(quantile(H, p));
    }
  }
  if (std::isfinite(H.support_lo)) knots.push_back(H.support_lo);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  const TabulatedCdf table = tabulate(H, knots);
  if (c.format == Format::Json) return io::tabulated_json(table);
  std::ostringstream s;
  s << "x,F\n";
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    s << io::format_number(table.x[i]) << "," << io::format_number(table.F[i]) << "\n";
  }
  return s.str();
}

std::string emit_bound(const CliConfig& c, std::ostream& err) {
  const FamilySource src = family_source(c);
  const WorkedFamily fam = src.build(c, required_n(c));
  if (fam.n < 2) throw Error(ErrorKind::InvalidArgument, "bound needs n >= 2");
  BoundReport rep = stein_bound(src.gamma, fam.profile, c.tol);
  rep.measured_dk = kolmogorov_distance(fam.cdf, free_law(src.gamma), c.tol);
  if (fam.rho_numeric) err << "warning: " << kNumericRhoWarning << "\n";

  if (c.format == Format::Json) {
    std::string j = io::bound_report_json(rep);
    if (fam.rho_numeric) {
      j.pop_back();
      j += std::string(",\"warning\":\"") + kNumericRhoWarning + "\"}";
    }
    return j + "\n";
  }
  std::ostringstream s;
  if (fam.rho_numeric) s << "# warning: " << kNumericRhoWarning << "\n";
  s << "n,gamma,integral_term,boundary_term,total,measured_dk,reference_rate\n"
    << rep.n << "," << io::format_number(rep.gamma) << "," << io::format_number(rep.integral_term)
    << "," << io::format_number(rep.boundary_term) << "," << io::format_number(rep.total) << ","
    << io::format_number(*rep.measured_dk) << "," << io::format_number(rep.reference_rate) << "\n";
  return s.str();
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string json_string(const std::string& v) { return nlohmann::json(v).dump(); }

// Returns the emitted text and the first failed check, if any.
std::pair<std::string, const ConditionCheck*> emit_validate(const CliConfig& c,
                                                            ValidationReport& report) {
  const FamilySource src = family_source(c);
  const WorkedFamily fam = src.build(c, required_n(c));
  report = validate_density_profile(src.gamma, fam.profile);
  std::ostringstream s;
  if (c.format == Format::Csv) {
    s << "condition,passed,evidence,detail\n";
    for (const auto& ck : report.checks) {
      s << ck.name << "," << (ck.passed ? "true" : "false") << "," << io::format_number(ck.evidence)
        << "," << csv_field(ck.detail) << "\n";
    }
  } else {
    s << "{\"gamma\":" << io::format_number(report.gamma) << ",\"n\":" << fam.n
      << ",\"ok\":" << (report.ok() ? "true" : "false") << ",\"checks\":[";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      const auto& ck = report.checks[i];
      s << (i ? "," : "") << "{\"condition\":" << json_string(ck.name)
        << ",\"passed\":" << (ck.passed ? "true" : "false") << ",\"evidence\":"
        << (std::isfinite(ck.evidence) ? io::format_number(ck.evidence) : "null")
        << ",\"detail\":" << json_string(ck.detail) << "}";
    }
    s << "]";
    if (fam.rho_numeric) s << ",\"warning\":" << json_string(kNumericRhoWarning);
    s << "}\n";
  }
  return {s.str(), report.first_failure()};
}

std::string emit_table(const CliConfig& c, std::ostream& err) {
  const FamilySource src = family_source(c);
  const int n_max = c.n_max ? *c.n_max : required_n(c);
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "--n-max must be at least 2");
  std::vector<int> ns;
  for (int n = 2; n <= n_max; ++n) ns.push_back(n);

  auto rows = convergence_table(
      src.gamma, [&](int n) { return src.build(c, n); }, ns, c.tol);
  for (const auto& r : rows) {
    if (r.error) err << "n=" << r.n << ": " << *r.error << "\n";
  }
  if (src.sample && src.build(c, 2).rho_numeric) {
    err << "warning: " << kNumericRhoWarning << "\n";
  }
  return c.format == Format::Csv ? io::table_csv(rows) : io::table_json(rows);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
      return kParseError;
    case ErrorKind::HypothesesViolated:
      return kHypothesisViolation;
    case ErrorKind::DomainError:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::NoSignChange:
    case ErrorKind::LimitNotDetected:
    case ErrorKind::DegeneratePower:
    case ErrorKind::ProfileMismatch:
    case ErrorKind::NoDensity:
      return kNumericFailure;
    default:
      return kInvalidConfig;
  }
}

void write_output(const CliConfig& c, const std::string& text, std::ostream& out) {
  if (!c.output_path) {
    out << text;
    return;
  }
  std::ofstream f(*c.output_path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + *c.output_path);
  f << text;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::string text;
    switch (config.command) {
      case Command::Law:
        text = emit_law(config);
        break;
      case Command::Convolve:
        text = emit_convolve(config);
        break;
      case Command::Bound:
        text = emit_bound(config, err);
        break;
      case Command::Validate: {
        ValidationReport report;
        auto [body, failed] = emit_validate(config, report);
        write_output(config, body, out);
        if (failed) {
          err << "hypothesis violated: " << failed->name << ": " << failed->detail << "\n";
          return kHypothesisViolation;
        }
        return kOk;
      }
      case Command::Table:
        text = emit_table(config, err);
        break;
    }
    write_output(config, text, out);
    return kOk;
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violated: " << e.condition() << ": " << e.what() << "\n";
    return kHypothesisViolation;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  if (const char* env = std::getenv(kToleranceEnv)) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(t > 0)) {
      err << kToleranceEnv << " must be a positive number, got '" << env << "'\n";
      return kInvalidConfig;
    }
    c.tol.abs_tol = c.tol.rel_tol = t;
  }

  CLI::App app{"Free extreme value laws: evaluation, free max-convolution, Stein bounds."};
  app.require_subcommand(1);

  const std::map<std::string, Family> families{{"gumbel", Family::Gumbel},
                                               {"frechet", Family::Frechet},
                                               {"weibull", Family::Weibull},
                                               {"custom", Family::Custom}};
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};
  bool free_flag = false;
  bool classical_flag = false;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<int> max_ref;

  auto add = [&](const char* name, const char* help, Command cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&c, cmd] { c.command = cmd; });
    sub->add_option("--family", c.family, "gumbel, frechet, weibull or custom")
        ->transform(CLI::CheckedTransformer(families, CLI::ignore_case));
    sub->add_option("--gamma", c.gamma, "extreme value index");
    sub->add_option("--n", c.n, "number of free max-convolved copies")->check(CLI::PositiveNumber);
    sub->add_option("--input", c.input_path, "tabulated CDF JSON {\"x\":[..],\"F\":[..]}");
    sub->add_option("--a", c.a, "custom norming scale a_n")->check(CLI::PositiveNumber);
    sub->add_option("--b", c.b, "custom norming shift b_n");
    sub->add_option("--output", c.output_path, "write here instead of standard output");
    sub->add_option("--format", c.format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--abs-tol", abs_tol, "absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-refinements", max_ref, "quadrature bisection depth")
        ->check(CLI::PositiveNumber);
    return sub;
  };

  CLI::App* law = add("law", "evaluate Phi_gamma, Psi_gamma, W_n or a custom CDF", Command::Law);
  law->add_option("--x", c.x, "evaluation point(s)")->required();
  for (CLI::App* sub : {law, add("convolve", "free max-convolution power or pair", Command::Convolve)}) {
    auto* f = sub->add_flag("--free", free_flag, "free law Psi_gamma (default)");
    auto* k = sub->add_flag("--classical", classical_flag, "classical law Phi_gamma");
    f->excludes(k);
  }
  app.get_subcommand("convolve")->add_option("--input2", c.input2_path, "second tabulated CDF");
  add("bound", "Stein bound on d_K(W_n, Psi_gamma)", Command::Bound);
  add("validate", "check the density conditions for W_n", Command::Validate);
  add("table", "convergence table for n = 2..n-max", Command::Table)
      ->add_option("--n-max", c.n_max, "largest n")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  c.free_calculus = !classical_flag;
  if (abs_tol) c.tol.abs_tol = *abs_tol;
  if (rel_tol) c.tol.rel_tol = *rel_tol;
  if (max_ref) c.tol.max_refinements = *max_ref;
  return run(c, out, err);
}

}  // namespace freeevt::cli
