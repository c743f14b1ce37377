// Command-line front end: verification runs, convergence tables, basis
// constants, quadrature self-tests, and expression parsing.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsco/job.hpp"
#include "hsco/multi_index.hpp"
#include "hsco/parse.hpp"
#include "hsco/quadrature.hpp"
#include "hsco/report.hpp"
#include "hsco/spaces.hpp"
#include "hsco/verify.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hsco::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw hsco::ValidationError("cannot write '" + out_path + "'");
  out << text;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

hsco::JobDocument load_document(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw hsco::SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return hsco::job_document_from_json(j);
}

int verdict_exit_code(hsco::Verdict v) {
  switch (v) {
    case hsco::Verdict::ExactMatch:
    case hsco::Verdict::ComparableBounded: return 0;
    case hsco::Verdict::Diverged:          return 2;
    case hsco::Verdict::Inconclusive:      return 3;
  }
  return kExitInternal;
}

struct VerifyArgs {
  std::string job_path;
  std::string format = "structured";
  std::string out_path;
  int truncation = 0;
  std::vector<int> quad;
  bool deterministic = false;
};

int run_verify(const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  hsco::JobDocument doc = load_document(a.job_path);
  if (a.truncation > 0) doc.truncation = a.truncation;
  if (!a.quad.empty()) {
    doc.quad_radial = a.quad[0];
    doc.quad_angular = a.quad[1];
  }
  const hsco::HSJob job = hsco::build_job(doc);
  const hsco::HSReport rep = hsco::verify(job);
  const double wall =
      a.deterministic
          ? 0.0
          : std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
  const auto report =
      hsco::make_report_document(hsco::normalized_document(doc, job), rep, wall);
  const auto format = a.format == "table" ? hsco::ReportFormat::Table
                                          : hsco::ReportFormat::Structured;
  write_out(hsco::emit_report(report, format), a.out_path);
  return verdict_exit_code(rep.verdict);
}

int run_convergence(const std::string& job_path, int truncation, const std::string& out_path) {
  hsco::JobDocument doc = load_document(job_path);
  if (truncation > 0) doc.truncation = truncation;
  const hsco::HSJob job = hsco::build_job(doc);
  const hsco::HSReport rep = hsco::verify(job);

  std::string text = "k,S_k,characterization,ratio\n";
  for (std::size_t k = 0; k < rep.partial_sums.size(); ++k) {
    text += std::to_string(k) + "," + fmt17(rep.partial_sums[k]) + ",";
    if (rep.characterization.finite) {
      text += fmt17(rep.characterization.value) + "," +
              fmt17(rep.partial_sums[k] / rep.characterization.value);
    } else {
      text += "infinite,-";
    }
    text += "\n";
  }
  write_out(text, out_path);
  return 0;
}

int run_bases(const std::string& kind_name, int n, double alpha, int max_degree) {
  const hsco::SourceSpace space(hsco::detail::space_kind_from_name(kind_name), n, alpha);
  for (std::uint32_t k = 0; k <= static_cast<std::uint32_t>(max_degree); ++k) {
    for (const auto& J : hsco::enumerate_degree(static_cast<std::size_t>(n), k)) {
      std::string line = "(";
      for (std::size_t i = 0; i < J.size(); ++i) {
        if (i) line += ",";
        line += std::to_string(J[i]);
      }
      line += ") " + fmt17(hsco::basis_constant_sq(space, J));
      std::cout << line << "\n";
    }
  }
  return 0;
}

int run_quad_selftest(std::optional<double> beta_arg, int n_rad, int n_ang) {
  using hsco::CompensatedSum;
  std::vector<double> betas = beta_arg ? std::vector<double>{*beta_arg}
                                       : std::vector<double>{-0.5, 0.0, 1.0, 3.0};
  bool ok = true;
  auto check = [&](bool pass, const std::string& what) {
    std::cout << (pass ? "[ok]   " : "[FAIL] ") << what << "\n";
    ok = ok && pass;
  };

  for (double beta : betas) {
    const auto rule = hsco::build_disk_rule(beta, n_rad, n_ang);

    const double mass =
        hsco::integrate_real(rule, [](hsco::Complex) { return 1.0; });
    check(std::abs(mass - 1.0) <= 1e-14, "beta=" + fmt17(beta) + " unit mass");

    double worst = 0.0;
    for (std::uint32_t j = 1; j <= static_cast<std::uint32_t>(2 * n_rad - 1); ++j) {
      CompensatedSum mj;
      for (std::size_t i = 0; i < rule.radial_x.size(); ++i)
        mj.add(rule.radial_w[i] * std::pow(rule.radial_x[i], static_cast<double>(j)));
      const double want = hsco::radial_moment(beta, j);
      worst = std::max(worst, std::abs(mj.value() - want) / want);
    }
    check(worst <= 1e-12,
          "beta=" + fmt17(beta) + " radial moments up to 2r-1 (worst rel err " +
              fmt17(worst) + ")");

    const auto cross = hsco::integrate(rule, [](hsco::Complex z) {
      return z * z * z * std::conj(z);
    });
    check(std::abs(cross) <= 1e-14, "beta=" + fmt17(beta) + " angular orthogonality");
  }

  // Tensor rule factorizes over axes.
  const auto tensor = hsco::build_polydisk_rule(0.0, 2, 16, 32);
  const double got = hsco::integrate_real(tensor, [](std::span<const hsco::Complex> z) {
    return std::norm(z[0]) * std::norm(z[1]) * std::norm(z[1]);
  });
  const double want = hsco::radial_moment(0.0, 1) * hsco::radial_moment(0.0, 2);
  check(std::abs(got - want) <= 1e-13 * want, "tensor rule factorizes");

  return ok ? 0 : 1;
}

int run_parse(const std::string& expr, int vars) {
  try {
    const auto p = hsco::parse_poly(expr, static_cast<std::size_t>(vars));
    std::cout << p.to_string() << "\n";
    return 0;
  } catch (const hsco::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-Schmidt verification of weighted composition-type operators"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run one verification job");
  verify->add_option("job", va.job_path, "job document (JSON)")->required();
  verify->add_option("--format", va.format, "structured|table")
      ->check(CLI::IsMember({"structured", "table"}));
  verify->add_option("--truncation", va.truncation, "override truncation order");
  verify->add_option("--quad", va.quad, "override rule resolution: radial,angular")
      ->delimiter(',')
      ->expected(0, 2);
  verify->add_option("--out", va.out_path, "write the report here instead of stdout");
  verify->add_flag("--deterministic", va.deterministic,
                   "zero the wall-clock field for byte-stable output");

  std::string conv_path, conv_out;
  int conv_trunc = 0;
  auto* convergence = app.add_subcommand("convergence", "partial-sum table for one job");
  convergence->add_option("job", conv_path, "job document (JSON)")->required();
  convergence->add_option("--truncation", conv_trunc, "override truncation order");
  convergence->add_option("--out", conv_out, "write the table here instead of stdout");

  std::string bases_kind;
  int bases_n = 1, bases_deg = 8;
  double bases_alpha = 0.0;
  auto* bases = app.add_subcommand("bases", "squared basis constants by multi-index");
  bases->add_option("--space", bases_kind, "space kind")->required();
  bases->add_option("--n", bases_n, "source dimension")->required();
  bases->add_option("--alpha", bases_alpha, "Bergman weight exponent");
  bases->add_option("--max-degree", bases_deg, "largest total degree listed");

  std::optional<double> st_beta;
  int st_rad = 64, st_ang = 128;
  auto* selftest = app.add_subcommand("quad-selftest", "exercise the quadrature rules");
  selftest->add_option("--beta", st_beta, "check a single weight exponent");
  selftest->add_option("--radial", st_rad, "radial node count");
  selftest->add_option("--angular", st_ang, "angular node count");

  std::string parse_expr;
  int parse_vars = 1;
  auto* parse = app.add_subcommand("parse", "echo an expression in canonical form");
  parse->add_option("expr", parse_expr, "expression text")->required();
  parse->add_option("--vars", parse_vars, "number of variables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) {
      if (!va.quad.empty() && va.quad.size() != 2)
        throw hsco::ValidationError("--quad needs exactly two values: radial,angular");
      return run_verify(va);
    }
    if (*convergence) return run_convergence(conv_path, conv_trunc, conv_out);
    if (*bases) return run_bases(bases_kind, bases_n, bases_alpha, bases_deg);
    if (*selftest) return run_quad_selftest(st_beta, st_rad, st_ang);
    if (*parse) return run_parse(parse_expr, parse_vars);
  } catch (const hsco::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::InvalidWeight& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::UnsupportedPairing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::UnsupportedSpace& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hsco::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
