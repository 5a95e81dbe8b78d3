// vascorr: build Vasyunin correction sequences, compare their coefficients
// against the closed form, and measure divergence of the L1 norms with
// exact rational truncations and rigorous tail bounds.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "vascorr/cli.hpp"

namespace {

int write_output(const vascorr::cli::RunConfig& config, const std::string& text) {
  if (config.out_path) {
    std::ofstream out(*config.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output file '" << *config.out_path << "'\n";
      return 2;
    }
    out << text;
    return out ? 0 : 2;
  }
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using vascorr::cli::RunConfig;

  CLI::App app{
      "vascorr: exact Vasyunin-correction coefficients, step profiles,\n"
      "canonical forms, and divergence diagnostics"};
  app.require_subcommand(1);

  RunConfig config;
  std::string family_name = "first";
  long long x_value = 0;
  long long horizon_value = 0;
  std::string x_policy = "default";
  std::string mutate_spec;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd, bool with_family) {
    if (with_family)
      cmd->add_option("--family", family_name, "seed family: first|second|third")
          ->check(CLI::IsMember({"first", "second", "third"}));
    cmd->add_option("--precision", config.precision,
                    "decimal digits for renderings (default 50, min 15)");
    cmd->add_option("--format", config.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "write output to this path instead of stdout");
  };

  CLI::App* coeffs = app.add_subcommand(
      "coeffs", "coefficient table: recurrence vs closed form");
  coeffs->add_option("--n-max", config.n_max, "compute c_1..c_n_max")->required();
  add_common(coeffs, true);

  CLI::App* profile = app.add_subcommand(
      "profile", "step profile v_m of the correction phi_n");
  profile->add_option("--n", config.n, "correction index")->required();
  profile->add_option("--horizon", horizon_value,
                      "number of unit intervals to tabulate (default 4n)");
  add_common(profile, true);

  CLI::App* canonical = app.add_subcommand(
      "canonical", "canonical floor-combination coefficients of phi_n (first family)");
  canonical->add_option("--n", config.n, "correction index")->required();
  add_common(canonical, true);

  CLI::App* diverge = app.add_subcommand(
      "diverge", "per-n divergence report with exact truncations and tail bounds");
  diverge->add_option("--n-max", config.n_max, "report rows n = 1..n_max")->required();
  diverge->add_option("--x", x_value, "fixed truncation point (default: per-row n*2^12)");
  diverge->add_option("--x-policy", x_policy, "truncation policy: default")
      ->check(CLI::IsMember({"default"}));
  add_common(diverge, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "run the identity/plateau/canonical/idempotency self-checks");
  verify->add_option("--suite", config.suites,
                     "suites to run: identity|plateau|canonical|idempotency|none "
                     "(default: all)");
  verify->add_option("--n-max", config.n_max, "override correction depth for the suites");
  verify->add_option("--identity-n", config.identity_limit,
                     "range for the Dirichlet identity audit (default 10000)");
  verify->add_option("--mutate", mutate_spec,
                     "negative control: override one closed-form coefficient, e.g. 2=2");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    if (auto f = vascorr::seed_family_from_string(family_name))
      config.family = *f;
    else
      throw vascorr::cli::UsageError("unknown family '" + family_name + "'");
    if (diverge->count("--x")) config.x_override = x_value;
    if (profile->count("--horizon")) config.horizon = horizon_value;
    if (!out_path.empty()) config.out_path = out_path;
    if (!mutate_spec.empty()) {
      auto eq = mutate_spec.find('=');
      if (eq == std::string::npos)
        throw vascorr::cli::UsageError("--mutate expects k=value");
      config.mutate = {std::stoll(mutate_spec.substr(0, eq)),
                       std::stoll(mutate_spec.substr(eq + 1))};
    }

    vascorr::cli::json doc = vascorr::cli::run_command(config);
    const int io = write_output(config, vascorr::cli::render_output(config, doc));
    if (io != 0) return io;
    if (config.command == "verify" && !doc.at("pass").get<bool>()) return 1;
    return 0;
  } catch (const vascorr::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
