#pragma once

#include <json.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vascorr/corrections.hpp"
#include "vascorr/diagnostics.hpp"
#include "vascorr/natural_function.hpp"
#include "vascorr/numtheory.hpp"

namespace vascorr::cli {

using json = nlohmann::ordered_json;

/// Bad flags / out-of-range parameters; the tool maps this to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr long long kMaxN = 1LL << 16;
constexpr long long kMaxX = 1LL << 30;

struct RunConfig {
  std::string command;  // coeffs | profile | canonical | diverge | verify
  SeedFamily family = SeedFamily::First;
  long long n = 0;      // profile, canonical
  long long n_max = 0;  // coeffs, diverge; optional override for verify suites
  std::optional<long long> x_override;
  unsigned precision = 50;
  std::string format = "json";  // json | csv
  std::optional<std::string> out_path;
  std::optional<long long> horizon;                        // profile; default 4n
  std::vector<std::string> suites;                         // verify; empty = all
  std::optional<std::pair<long long, long long>> mutate;   // verify: c_k := v
  long long identity_limit = 10000;                        // verify
};

namespace detail {

inline void put_rational(json& obj, const std::string& key, const Rational& r) {
  obj[key] = rational_to_string(r);
  obj[key + "_decimal"] = decimal_string(r);
}

inline json metadata(const RunConfig& config, const char* family_name, json parameters) {
  json m;
  m["command"] = config.command;
  m["family"] = family_name;
  m["parameters"] = std::move(parameters);
  m["precision"] = config.precision;
  return m;
}

inline void check_common(const RunConfig& config) {
  if (config.precision < 15) throw UsageError("--precision must be at least 15");
  if (config.precision > 10000) throw UsageError("--precision is unreasonably large");
  if (config.format != "json" && config.format != "csv")
    throw UsageError("--format must be json or csv");
  if (config.x_override && (*config.x_override < 1 || *config.x_override > kMaxX))
    throw UsageError("--x out of range (1..2^30)");
}

}  // namespace detail

/// Rows {k, c_recurrence, c_closed, match}; the closed-form column exists for
/// the first family only.
inline json run_coeffs(const RunConfig& config) {
  if (config.n_max < 1 || config.n_max > kMaxN)
    throw UsageError("coeffs: --n-max required, in 1..2^16");
  CorrectionBuilder builder(config.family);
  builder.extend_to(config.n_max);
  const bool closed = config.family == SeedFamily::First;
  json meta = detail::metadata(config, to_string(config.family),
                               json{{"n_max", config.n_max}});
  if (!closed)
    meta["note"] = "closed-form column omitted (closed form applies to the first family only)";
  json rows = json::array();
  for (long long k = 1; k <= config.n_max; ++k) {
    json row;
    row["k"] = k;
    const Rational& c_rec = builder.coeffs()[static_cast<std::size_t>(k - 1)];
    detail::put_rational(row, "c_recurrence", c_rec);
    if (closed) {
      const Rational c_cl(coeff_closed(k));
      detail::put_rational(row, "c_closed", c_cl);
      row["match"] = (c_rec == c_cl);
    }
    rows.push_back(std::move(row));
  }
  return json{{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
}

/// Rows (m, v_m) of the step profile of phi_n up to the horizon (default 4n).
inline json run_profile(const RunConfig& config) {
  if (config.n < 1 || config.n > kMaxN) throw UsageError("profile: --n required, in 1..2^16");
  const long long horizon = config.horizon.value_or(4 * config.n);
  if (horizon < 0 || horizon > kMaxX) throw UsageError("profile: --horizon out of range");
  Correction corr = build_correction(config.family, config.n);
  StepProfile prof = profile(corr.phi, horizon);
  json meta = detail::metadata(config, to_string(config.family),
                               json{{"n", config.n}, {"horizon", horizon}});
  json rows = json::array();
  for (long long m = 0; m < horizon; ++m) {
    json row;
    row["m"] = m;
    detail::put_rational(row, "v_m", prof.values[static_cast<std::size_t>(m)]);
    rows.push_back(std::move(row));
  }
  return json{{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
}

/// Rows {denominator, coefficient, mobius_match_flag} of the canonical form
/// of a first-family correction; the flag is null beyond k = n.
inline json run_canonical(const RunConfig& config) {
  if (config.family != SeedFamily::First)
    throw UsageError("canonical: closed canonical form applies to the first family only");
  if (config.n < 1 || config.n > kMaxN) throw UsageError("canonical: --n required, in 1..2^16");
  Correction corr = build_correction(config.family, config.n);
  NaturalFunction canon = to_canonical(corr);
  json meta = detail::metadata(config, to_string(config.family), json{{"n", config.n}});
  json rows = json::array();
  for (const auto& [a, alpha] : canon.terms()) {
    json row;
    row["denominator"] = a;
    detail::put_rational(row, "coefficient", alpha);
    if (a <= config.n)
      row["mobius_match_flag"] = (alpha == mobius(a));
    else
      row["mobius_match_flag"] = nullptr;
    rows.push_back(std::move(row));
  }
  return json{{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
}

namespace detail {

inline json norm_estimate_json(const NormEstimate& est) {
  json j;
  j["truncated"] = rational_to_string(est.truncated);
  j["decimal"] = est.decimal;
  j["x"] = est.truncation_point;
  put_rational(j, "tail_bound", est.tail_bound);
  return j;
}

inline json integral_diag_json(const IntegralDiagnostic& diag) {
  json j;
  if (diag.closed_form)
    j["closed_form"] = decimal_string(*diag.closed_form);
  else
    j["closed_form"] = nullptr;
  if (diag.log2_factor)
    put_rational(j, "log2_factor", *diag.log2_factor);
  else
    j["log2_factor"] = nullptr;
  j["truncated"] = rational_to_string(diag.truncated);
  j["decimal"] = diag.decimal;
  j["x"] = diag.truncation_point;
  put_rational(j, "tail_bound", diag.tail_bound);
  return j;
}

}  // namespace detail

/// DivergenceReport serialization: rows n = 1..n_max (delta starts at n = 2),
/// non_cauchy flag for the first family.
inline json run_diverge(const RunConfig& config) {
  if (config.n_max < 2 || config.n_max > kMaxN)
    throw UsageError("diverge: --n-max required, in 2..2^16");
  if (config.x_override && *config.x_override < config.n_max)
    throw UsageError("diverge: --x must be >= n_max");
  DivergenceReport report = divergence_report(config.family, config.n_max, config.x_override);
  json meta = detail::metadata(
      config, to_string(config.family),
      json{{"n_max", config.n_max}, {"x_policy", report.metadata.x_policy}});
  json rows = json::array();
  for (const DivergenceRow& r : report.rows) {
    json row;
    row["n"] = r.n;
    detail::put_rational(row, "c_n", r.c_n);
    row["delta_l1"] = r.delta_l1 ? detail::norm_estimate_json(*r.delta_l1) : json(nullptr);
    row["I_n"] = detail::integral_diag_json(r.integral);
    rows.push_back(std::move(row));
  }
  json doc{{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
  if (report.non_cauchy) doc["non_cauchy"] = *report.non_cauchy;
  return doc;
}

namespace detail {

struct SuiteLimits {
  long long plateau_first = 128;
  long long plateau_other = 64;
  long long canonical = 64;
  long long idempotency = 64;
};

inline json suite_row(const std::string& suite, const std::string& scope,
                      long long limit, bool pass, const std::string& note) {
  json row;
  row["suite"] = suite;
  row["scope"] = scope;
  row["limit"] = limit;
  row["pass"] = pass;
  row["detail"] = note;
  return row;
}

}  // namespace detail

/// Runs the identity/plateau/canonical/idempotency suites at desk-scale
/// limits. The full-depth acceptance checks live in the test suite; this
/// command is a quick self-check with a mutation hook as negative control.
inline json run_verify(const RunConfig& config) {
  std::vector<std::string> suites = config.suites;
  if (suites.empty()) suites = {"identity", "plateau", "canonical", "idempotency"};
  if (suites.size() == 1 && suites[0] == "none") suites.clear();

  detail::SuiteLimits limits;
  if (config.n_max > 0) {
    if (config.n_max > kMaxN) throw UsageError("verify: --n-max out of range");
    limits.plateau_first = limits.plateau_other = config.n_max;
    limits.canonical = limits.idempotency = config.n_max;
  }

  json rows = json::array();
  bool all_pass = true;
  auto add = [&](json row) {
    all_pass = all_pass && row["pass"].get<bool>();
    rows.push_back(std::move(row));
  };

  const SeedFamily families[] = {SeedFamily::First, SeedFamily::Second, SeedFamily::Third};
  for (const std::string& suite : suites) {
    if (suite == "identity") {
      AuditReport audit;
      if (config.mutate) {
        const auto [mk, mv] = *config.mutate;
        audit = identity_audit(config.identity_limit, [mk, mv](long long k) {
          return k == mk ? mv : coeff_closed(k);
        });
      } else {
        audit = identity_audit(config.identity_limit);
      }
      add(detail::suite_row("identity", "closed-form coefficients", config.identity_limit,
                            audit.pass,
                            audit.pass ? "ok"
                                       : "first failure at m=" + std::to_string(audit.first_failure) +
                                             ", residual " + std::to_string(audit.residual)));
    } else if (suite == "plateau") {
      for (SeedFamily family : families) {
        const long long limit =
            family == SeedFamily::First ? limits.plateau_first : limits.plateau_other;
        CorrectionBuilder builder(family);
        bool pass = true;
        std::string note = "ok";
        for (long long n = 1; n <= limit && pass; ++n) {
          builder.extend_to(n);
          PlateauReport rep = verify_plateau(builder.snapshot());
          if (!rep.pass) {
            pass = false;
            note = "n=" + std::to_string(n) + " fails at interval " +
                   std::to_string(rep.first_failure) + " with value " +
                   rational_to_string(rep.value);
          }
        }
        add(detail::suite_row("plateau", to_string(family), limit, pass, note));
      }
    } else if (suite == "canonical") {
      {
        CorrectionBuilder builder(SeedFamily::First);
        bool pass = true;
        std::string note = "ok";
        for (long long n = 1; n <= limits.canonical && pass; ++n) {
          builder.extend_to(n);
          Correction corr = builder.snapshot();
          if (!(to_canonical(corr) == corr.phi)) {
            pass = false;
            note = "canonical form differs from direct expansion at n=" + std::to_string(n);
          }
        }
        add(detail::suite_row("canonical", "first: closed form vs expansion",
                              limits.canonical, pass, note));
      }
      for (SeedFamily family : families) {
        CorrectionBuilder builder(family);
        builder.extend_to(limits.canonical);
        LeadingCoeffReport rep = leading_coefficients_check(builder.snapshot());
        add(detail::suite_row(
            "canonical", std::string(to_string(family)) + ": leading coefficients",
            limits.canonical, rep.pass,
            rep.pass ? "ok"
                     : "mismatch at k=" + std::to_string(rep.first_mismatch) + ": found " +
                           rational_to_string(rep.found) + ", expected mu(k)=" +
                           std::to_string(rep.expected)));
      }
    } else if (suite == "idempotency") {
      for (SeedFamily family : families) {
        bool pass = true;
        std::string note = "ok";
        for (long long n = 1; n <= limits.idempotency && pass; ++n) {
          NaturalFunction s = seed(family, n);
          if (!s.certified_zero_sum()) {
            pass = false;
            note = "seed n=" + std::to_string(n) + " is not zero-sum";
            break;
          }
          const long long p = to_int64(period(s));
          StepProfile prof = profile(s, p);
          for (long long m = 0; m < p; ++m) {
            const Rational& v = prof.values[static_cast<std::size_t>(m)];
            if (v != 0 && v != 1) {
              pass = false;
              note = "seed n=" + std::to_string(n) + " takes value " +
                     rational_to_string(v) + " on [" + std::to_string(m) + "," +
                     std::to_string(m + 1) + ")";
              break;
            }
          }
        }
        add(detail::suite_row("idempotency", to_string(family), limits.idempotency,
                              pass, note));
      }
    } else {
      throw UsageError("verify: unknown suite '" + suite + "'");
    }
  }

  json parameters{{"suites", suites},
                  {"identity_limit", config.identity_limit}};
  if (config.n_max > 0) parameters["n_max"] = config.n_max;
  if (config.mutate)
    parameters["mutate"] = "c_" + std::to_string(config.mutate->first) + ":=" +
                           std::to_string(config.mutate->second);
  json meta = detail::metadata(config, "all", std::move(parameters));
  if (rows.empty()) meta["note"] = "no checks run";
  json doc{{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
  doc["pass"] = all_pass;
  return doc;
}

inline json run_command(const RunConfig& config) {
  detail::check_common(config);
  set_decimal_precision(config.precision);
  if (config.command == "coeffs") return run_coeffs(config);
  if (config.command == "profile") return run_profile(config);
  if (config.command == "canonical") return run_canonical(config);
  if (config.command == "diverge") return run_diverge(config);
  if (config.command == "verify") return run_verify(config);
  throw UsageError("unknown command '" + config.command + "'");
}

namespace detail {

inline std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    for (char& ch : s)
      if (ch == ',' || ch == '\n') ch = ';';
    return s;
  }
  return v.dump();
}

inline std::string csv_table(const std::vector<std::string>& columns, const json& rows,
                             const std::function<json(const json&, const std::string&)>& cell) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const json& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out += (i ? "," : "") + csv_cell(cell(row, columns[i]));
    out += "\n";
  }
  return out;
}

}  // namespace detail

/// Fixed CSV columns per command; nested diverge fields are flattened with
/// delta_ / I_ prefixes. Documented in the README.
inline std::string render_csv(const RunConfig& config, const json& doc) {
  const json& rows = doc.at("rows");
  auto direct = [](const json& row, const std::string& col) -> json {
    return row.contains(col) ? row.at(col) : json(nullptr);
  };
  if (config.command == "coeffs") {
    std::vector<std::string> cols{"k", "c_recurrence", "c_recurrence_decimal"};
    if (config.family == SeedFamily::First) {
      cols.insert(cols.end(), {"c_closed", "c_closed_decimal", "match"});
    }
    return detail::csv_table(cols, rows, direct);
  }
  if (config.command == "profile")
    return detail::csv_table({"m", "v_m", "v_m_decimal"}, rows, direct);
  if (config.command == "canonical")
    return detail::csv_table(
        {"denominator", "coefficient", "coefficient_decimal", "mobius_match_flag"}, rows,
        direct);
  if (config.command == "diverge") {
    std::vector<std::string> cols{
        "n",           "c_n",
        "c_n_decimal", "delta_truncated",
        "delta_decimal", "delta_x",
        "delta_tail_bound", "delta_tail_bound_decimal",
        "I_closed_form", "I_log2_factor",
        "I_truncated", "I_decimal",
        "I_x",         "I_tail_bound",
        "I_tail_bound_decimal"};
    auto cell = [](const json& row, const std::string& col) -> json {
      if (col.rfind("delta_", 0) == 0) {
        const json& d = row.at("delta_l1");
        if (d.is_null()) return nullptr;
        std::string key = col.substr(6);
        return d.contains(key) ? d.at(key) : json(nullptr);
      }
      if (col.rfind("I_", 0) == 0 && col != "I_n") {
        const json& d = row.at("I_n");
        std::string key = col.substr(2);
        return d.contains(key) ? d.at(key) : json(nullptr);
      }
      return row.contains(col) ? row.at(col) : json(nullptr);
    };
    return detail::csv_table(cols, rows, cell);
  }
  if (config.command == "verify")
    return detail::csv_table({"suite", "scope", "limit", "pass", "detail"}, rows, direct);
  throw UsageError("unknown command '" + config.command + "'");
}

/// Final rendered output for a run: JSON (pretty, trailing newline) or CSV.
inline std::string render_output(const RunConfig& config, const json& doc) {
  if (config.format == "csv") return render_csv(config, doc);
  return doc.dump(2) + "\n";
}

}  // namespace vascorr::cli
