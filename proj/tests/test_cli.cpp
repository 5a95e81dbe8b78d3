#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "vascorr/cli.hpp"

using namespace vascorr;
using cli::RunConfig;
using cli::json;

namespace {

RunConfig base(const std::string& command) {
  RunConfig config;
  config.command = command;
  config.precision = 30;
  return config;
}

}  // namespace

TEST_CASE("coeffs: first family rows carry the closed form and match") {
  RunConfig config = base("coeffs");
  config.n_max = 4;
  json doc = cli::run_command(config);
  REQUIRE(doc.at("rows").size() == 4);
  const char* recurrence[] = {"1", "1", "-1", "2"};
  for (std::size_t i = 0; i < 4; ++i) {
    const json& row = doc["rows"][i];
    CHECK(row.at("k") == static_cast<long long>(i + 1));
    CHECK(row.at("c_recurrence") == recurrence[i]);
    CHECK(row.at("c_closed") == recurrence[i]);
    CHECK(row.at("match") == true);
  }
  CHECK(doc["metadata"]["command"] == "coeffs");
  CHECK(doc["metadata"]["family"] == "first");
  CHECK(doc["metadata"]["precision"] == 30);

  config.n_max = 1;
  json single = cli::run_command(config);
  REQUIRE(single["rows"].size() == 1);
  CHECK(single["rows"][0].at("c_recurrence") == "1");
  CHECK(single["rows"][0].at("c_closed") == "1");
  CHECK(single["rows"][0].at("match") == true);
}

TEST_CASE("coeffs: non-first family omits the closed column with a note") {
  RunConfig config = base("coeffs");
  config.family = SeedFamily::Second;
  config.n_max = 3;
  json doc = cli::run_command(config);
  REQUIRE(doc["rows"].size() == 3);
  for (const json& row : doc["rows"]) {
    CHECK_FALSE(row.contains("c_closed"));
    CHECK_FALSE(row.contains("match"));
  }
  CHECK(doc["metadata"].contains("note"));
  std::string csv = cli::render_csv(config, doc);
  CHECK(csv.rfind("k,c_recurrence,c_recurrence_decimal\n", 0) == 0);
}

TEST_CASE("profile: frozen f_1 values and empty horizon") {
  RunConfig config = base("profile");
  config.n = 1;
  config.horizon = 4;
  json doc = cli::run_command(config);
  REQUIRE(doc["rows"].size() == 4);
  const char* values[] = {"0", "1", "0", "1"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(doc["rows"][i].at("m") == static_cast<long long>(i));
    CHECK(doc["rows"][i].at("v_m") == values[i]);
  }

  config.horizon = 0;
  json empty = cli::run_command(config);
  CHECK(empty["rows"].empty());
}

TEST_CASE("profile: default horizon is 4n and the plateau shows") {
  RunConfig config = base("profile");
  config.n = 2;
  json doc = cli::run_command(config);
  REQUIRE(doc["rows"].size() == 8);
  CHECK(doc["rows"][0].at("v_m") == "0");
  CHECK(doc["rows"][1].at("v_m") == "1");
  CHECK(doc["rows"][2].at("v_m") == "1");
}

TEST_CASE("canonical: rows and mobius flags") {
  RunConfig config = base("canonical");
  config.n = 2;
  json doc = cli::run_command(config);
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0].at("denominator") == 1);
  CHECK(doc["rows"][0].at("coefficient") == "1");
  CHECK(doc["rows"][0].at("mobius_match_flag") == true);
  CHECK(doc["rows"][1].at("denominator") == 2);
  CHECK(doc["rows"][1].at("coefficient") == "-1");
  CHECK(doc["rows"][1].at("mobius_match_flag") == true);
  CHECK(doc["rows"][2].at("denominator") == 4);
  CHECK(doc["rows"][2].at("coefficient") == "-2");
  CHECK(doc["rows"][2].at("mobius_match_flag").is_null());

  config.n = 1;
  json doc1 = cli::run_command(config);
  REQUIRE(doc1["rows"].size() == 2);
  CHECK(doc1["rows"][0].at("mobius_match_flag") == true);
  CHECK(doc1["rows"][1].at("coefficient") == "-2");
  CHECK(doc1["rows"][1].at("mobius_match_flag").is_null());

  config.family = SeedFamily::Second;
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);
}

TEST_CASE("diverge: flag, null delta at n=1, and usage limits") {
  RunConfig config = base("diverge");
  config.n_max = 16;
  json doc = cli::run_command(config);
  REQUIRE(doc["rows"].size() == 16);
  CHECK(doc["rows"][0].at("delta_l1").is_null());
  CHECK_FALSE(doc["rows"][1].at("delta_l1").is_null());
  CHECK(doc.at("non_cauchy") == true);
  CHECK(doc["rows"][1]["I_n"]["log2_factor"] == "3/2");
  CHECK(doc["rows"][8].at("n") == 9);
  CHECK(doc["rows"][8]["delta_l1"].at("truncated") == "0");

  config.n_max = 1;
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);
  config.n_max = 8;
  config.x_override = 4;
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);
}

TEST_CASE("diverge: second family has no flag and no closed forms") {
  RunConfig config = base("diverge");
  config.family = SeedFamily::Second;
  config.n_max = 4;
  json doc = cli::run_command(config);
  CHECK_FALSE(doc.contains("non_cauchy"));
  CHECK(doc["rows"][2]["I_n"]["closed_form"].is_null());
}

TEST_CASE("verify: quick suites pass, mutation fails, none runs nothing") {
  RunConfig config = base("verify");
  config.n_max = 8;
  config.identity_limit = 256;
  json doc = cli::run_command(config);
  CHECK(doc.at("pass") == true);
  CHECK(doc["rows"].size() >= 4);

  config.mutate = {{2, 2}};
  json mutated = cli::run_command(config);
  CHECK(mutated.at("pass") == false);

  RunConfig none = base("verify");
  none.suites = {"none"};
  json empty = cli::run_command(none);
  CHECK(empty.at("pass") == true);
  CHECK(empty["rows"].empty());
  CHECK(empty["metadata"].at("note") == "no checks run");

  RunConfig bad = base("verify");
  bad.suites = {"bogus"};
  CHECK_THROWS_AS(cli::run_command(bad), cli::UsageError);
}

TEST_CASE("determinism: identical configs give byte-identical output") {
  RunConfig config = base("diverge");
  config.n_max = 4;
  json a = cli::run_command(config);
  json b = cli::run_command(config);
  CHECK(cli::render_output(config, a) == cli::render_output(config, b));
  config.format = "csv";
  CHECK(cli::render_output(config, a) == cli::render_output(config, b));
}

TEST_CASE("round trip: JSON rationals parse back to the same values") {
  RunConfig config = base("diverge");
  config.n_max = 6;
  json doc = cli::run_command(config);
  json reparsed = json::parse(cli::render_output(config, doc));
  for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
    const json& row = reparsed["rows"][i];
    CHECK(rational_from_string(row["c_n"].get<std::string>()) ==
          rational_from_string(doc["rows"][i]["c_n"].get<std::string>()));
    if (!row["delta_l1"].is_null()) {
      Rational trunc =
          rational_from_string(row["delta_l1"]["truncated"].get<std::string>());
      Rational orig = rational_from_string(
          doc["rows"][i]["delta_l1"]["truncated"].get<std::string>());
      CHECK(trunc == orig);
    }
  }
}

TEST_CASE("render_csv: diverge flattens the nested estimates") {
  RunConfig config = base("diverge");
  config.n_max = 2;
  config.format = "csv";
  json doc = cli::run_command(config);
  std::string csv = cli::render_csv(config, doc);
  auto header_end = csv.find('\n');
  std::string header = csv.substr(0, header_end);
  CHECK(header ==
        "n,c_n,c_n_decimal,delta_truncated,delta_decimal,delta_x,delta_tail_bound,"
        "delta_tail_bound_decimal,I_closed_form,I_log2_factor,I_truncated,I_decimal,"
        "I_x,I_tail_bound,I_tail_bound_decimal");
  // row n=1 has empty delta cells
  std::string row1 = csv.substr(header_end + 1, csv.find('\n', header_end + 1) - header_end - 1);
  CHECK(row1.rfind("1,1,1,,,,,,", 0) == 0);
}

TEST_CASE("usage validation") {
  RunConfig config = base("coeffs");
  config.n_max = 4;
  config.precision = 10;
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);

  config.precision = 30;
  config.format = "xml";
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);

  config.format = "json";
  config.n_max = (1LL << 16) + 1;
  CHECK_THROWS_AS(cli::run_command(config), cli::UsageError);

  RunConfig unknown = base("explode");
  CHECK_THROWS_AS(cli::run_command(unknown), cli::UsageError);
}

TEST_CASE("rational string round trip helpers") {
  CHECK(rational_to_string(Rational(-7) / 3) == "-7/3");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK(rational_from_string("-7/3") == Rational(-7) / 3);
  CHECK(rational_from_string("42") == 42);
  CHECK(rational_from_string("6/4") == Rational(3) / 2);
  CHECK_THROWS_AS(rational_from_string("x/2"), std::domain_error);
  CHECK_THROWS_AS(rational_from_string("1/0"), std::domain_error);
  CHECK_THROWS_AS(rational_from_string(""), std::domain_error);
}
