#pragma once

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "giweyl/field_model.hpp"
#include "giweyl/hamiltonian.hpp"
#include "giweyl/text.hpp"
#include "giweyl/verify.hpp"

namespace giweyl {

// Exit codes: 0 success/verified, 1 verification mismatch, 2 parse/usage
// error, 3 truncation (eps-underflow) error.
enum ExitCode { exit_ok = 0, exit_mismatch = 1, exit_usage = 2, exit_underflow = 3 };

namespace clidetail {

inline std::string format_series(const Series& s, const std::string& format) {
  if (format == "json") return to_structured(s).dump(2);
  return render(s);
}

inline std::string format_jpoly(const JPolynomial& p, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < p.coeff.size(); ++k) {
      if (p.coeff[k].is_zero() && k > 0) continue;
      nlohmann::ordered_json e;
      e["jpow"] = k;
      e["coeff"] = to_structured(p.coeff[k]);
      arr.push_back(e);
    }
    return arr.dump(2);
  }
  return jpoly_text(p);
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

}  // namespace clidetail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact star products and guiding-center expansions for gauge-invariant "
               "phase-space symbols"};
  app.require_subcommand(1);

  int max_hbar = 2, min_eps = -2, max_eps = 3;
  std::string format = "text";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--max-hbar", max_hbar, "highest kept power of hbar")->capture_default_str();
    cmd->add_option("--min-eps", min_eps, "lowest admissible power of eps")->capture_default_str();
    cmd->add_option("--max-eps", max_eps, "highest kept power of eps")->capture_default_str();
    cmd->add_option("--format", format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  std::string expr_a, expr_b;
  CLI::App* cmd_star = app.add_subcommand("star", "star product of two symbols");
  cmd_star->add_option("exprA", expr_a)->required();
  cmd_star->add_option("exprB", expr_b)->required();
  add_common(cmd_star);

  std::string bracket_type;
  CLI::App* cmd_bracket = app.add_subcommand("bracket", "Moyal or Poisson bracket");
  cmd_bracket->add_option("--type", bracket_type, "moyal|poisson")
      ->required()
      ->check(CLI::IsMember({"moyal", "poisson"}));
  cmd_bracket->add_option("exprA", expr_a)->required();
  cmd_bracket->add_option("exprB", expr_b)->required();
  add_common(cmd_bracket);

  CLI::App* cmd_derive = app.add_subcommand("derive", "guiding-center derivations");
  cmd_derive->require_subcommand(1);
  bool spin = false;
  CLI::App* cmd_ham = cmd_derive->add_subcommand("hamiltonian", "guiding-center Hamiltonian");
  cmd_ham->add_flag("--spin", spin, "use the magnetic-moment potential -mu_z B");
  cmd_ham->add_option("--format", format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  CLI::App* cmd_classical =
      cmd_derive->add_subcommand("classical", "classical (hbar -> 0) Hamiltonian");
  cmd_classical->add_option("--format", format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  int level_n = 0;
  CLI::App* cmd_levels = cmd_derive->add_subcommand("levels", "quantized gyration levels");
  cmd_levels->add_option("--n", level_n, "gyration quantum number")->required();
  cmd_levels->add_option("--format", format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  CLI::App* cmd_verify = app.add_subcommand("verify", "run the built-in verification suites");
  std::string verify_what;
  cmd_verify->add_option("suite", verify_what, "suite name: appendix")
      ->required()
      ->check(CLI::IsMember({"appendix"}));

  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "numeric cross-check of the symbolic star product");
  std::string model_path;
  int points = 100;
  unsigned long long seed = 42;
  double tol = 1e-9;
  cmd_oracle->add_option("--model", model_path, "field model file")->required();
  cmd_oracle->add_option("--points", points)->capture_default_str();
  cmd_oracle->add_option("--seed", seed)->capture_default_str();
  cmd_oracle->add_option("--tol", tol)->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("giweyl");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    Truncation trunc(max_hbar, min_eps, max_eps);
    if (cmd_star->parsed()) {
      Series a = truncate_to(parse(expr_a), trunc);
      Series b = truncate_to(parse(expr_b), trunc);
      out << clidetail::format_series(star(a, b, trunc), format) << "\n";
      return exit_ok;
    }
    if (cmd_bracket->parsed()) {
      Series a = truncate_to(parse(expr_a), trunc);
      Series b = truncate_to(parse(expr_b), trunc);
      Series r = bracket_type == "moyal" ? moyal_bracket(a, b, trunc) : poisson_bracket(a, b);
      out << clidetail::format_series(r, format) << "\n";
      return exit_ok;
    }
    if (cmd_derive->parsed()) {
      if (cmd_ham->parsed()) {
        out << clidetail::format_jpoly(derive_hamiltonian(spin), format) << "\n";
      } else if (cmd_classical->parsed()) {
        out << clidetail::format_jpoly(classical_hamiltonian(), format) << "\n";
      } else {
        out << clidetail::format_series(quantized_levels(level_n), format) << "\n";
      }
      return exit_ok;
    }
    if (cmd_verify->parsed()) {
      auto results = run_appendix_verification();
      bool all = true;
      for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.pass && !r.detail.empty()) out << ": " << r.detail;
        out << "\n";
      }
      for (const auto& r : results) all = all && r.pass;
      out << (all ? "all checks passed" : "some checks FAILED") << "\n";
      return all ? exit_ok : exit_mismatch;
    }
    if (cmd_oracle->parsed()) {
      FieldModel model = FieldModel::load(model_path);
      Truncation otr(max_hbar, -max_hbar, max_eps);
      auto monos = phase_monomials(3, otr);
      std::vector<std::pair<Series, Series>> pairs;
      pairs.reserve(monos.size() * monos.size());
      for (const auto& a : monos)
        for (const auto& b : monos) pairs.emplace_back(a, b);
      OracleReport rep = compare_symbolic_numeric(pairs, model, points, seed, tol, otr);
      out << "oracle pairs=" << rep.pairs << " points=" << rep.points << " seed=" << rep.seed
          << " tol=" << clidetail::format_double(rep.tol)
          << " max-rel=" << clidetail::format_double(rep.max_rel)
          << " max-abs=" << clidetail::format_double(rep.max_abs) << " -> "
          << (rep.pass ? "PASS" : "FAIL") << "\n";
      return rep.pass ? exit_ok : exit_mismatch;
    }
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::eps_underflow:
        err << "truncation error: " << e.what() << "\n";
        return exit_underflow;
      case Errc::parse_error:
      case Errc::chart_mixing:
      case Errc::negative_power:
        err << "parse error: " << e.what() << "\n";
        return exit_usage;
      default:
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
  }
  return exit_usage;
}

}  // namespace giweyl
