#include <catch_amalgamated.hpp>

#include <sstream>

#include "casimir/io/csv.hpp"
#include "casimir/io/manifest.hpp"

using namespace casimir;

namespace {
io::RunManifest sample_manifest() {
  io::RunManifest man;
  man.command = "gamma1";
  man.params.n_alpha_s = 0.004;
  man.params.n_lambda3 = 2.5;
  man.params.z_over_lambda = 0.125;
  man.quad.dim = 7;
  man.quad.budget = 1u << 18;
  man.quad.replications = 12;
  man.quad.seed = 987654321;
  man.quad.target_rel_error = 0.015;
  man.bracket_reading = "extra-sin";
  man.double_factor2 = "apply2";
  man.zmin = 0.01;
  man.zmax = 100.0;
  man.points = 33;
  man.order = 1;
  return man;
}
}  // namespace

TEST_CASE("manifest json round trip reconstructs the run parameters") {
  const io::RunManifest man = sample_manifest();
  const io::RunManifest back = io::RunManifest::from_json(man.to_json());
  CHECK(back.command == man.command);
  CHECK(back.params.n_alpha_s == man.params.n_alpha_s);
  CHECK(back.params.n_lambda3 == man.params.n_lambda3);
  CHECK(back.params.z_over_lambda == man.params.z_over_lambda);
  CHECK(back.quad.budget == man.quad.budget);
  CHECK(back.quad.replications == man.quad.replications);
  CHECK(back.quad.seed == man.quad.seed);
  CHECK(back.quad.target_rel_error == man.quad.target_rel_error);
  CHECK(back.bracket_reading == man.bracket_reading);
  CHECK(back.double_factor2 == man.double_factor2);
  CHECK(back.zmin == man.zmin);
  CHECK(back.zmax == man.zmax);
  CHECK(back.points == man.points);
  CHECK(back.order == man.order);
}

TEST_CASE("config hash is stable and content-sensitive") {
  const io::RunManifest a = sample_manifest();
  io::RunManifest b = sample_manifest();
  CHECK(a.config_hash() == b.config_hash());
  b.quad.seed += 1;
  CHECK(a.config_hash() != b.config_hash());
  CHECK(a.config_hash().size() == 16);
}

TEST_CASE("csv serialization round trip") {
  io::CsvDocument doc;
  doc.manifest = sample_manifest();
  doc.columns = {"z_over_lambda", "scaled_value", "std_error"};
  doc.add_row({io::fmt12(0.125), io::fmt12(0.7031250014), io::fmt12(1e-4)});
  doc.add_row({io::fmt12(12.5), io::fmt12(0.49), io::fmt12(2e-4)});
  const std::string text = doc.serialize();

  std::istringstream in(text);
  const io::CsvDocument back = io::CsvDocument::parse(in);
  CHECK(back.columns == doc.columns);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[1][1] == "0.49");
  CHECK(back.manifest.quad.seed == doc.manifest.quad.seed);
  CHECK(back.manifest.params.n_alpha_s == doc.manifest.params.n_alpha_s);

  const auto z = back.column_as_double("z_over_lambda");
  CHECK(z[0] == 0.125);
  CHECK(z[1] == 12.5);
  CHECK_THROWS(back.column_index("no_such_column"));
}

TEST_CASE("serialization is deterministic") {
  io::CsvDocument doc;
  doc.manifest = sample_manifest();
  doc.columns = {"a"};
  doc.add_row({"1"});
  CHECK(doc.serialize() == doc.serialize());
}

TEST_CASE("12 significant digit formatting") {
  CHECK(io::fmt12(0.38333333333333336) == "0.383333333333");
  CHECK(io::fmt12(1e-300) == "1e-300");
  CHECK(io::fmt12(-2.0) == "-2");
}

TEST_CASE("parse rejects malformed input") {
  std::istringstream no_manifest("a,b\n1,2\n");
  CHECK_THROWS(io::CsvDocument::parse(no_manifest));
  std::istringstream ragged(
      "# manifest: {\"tool\":\"x\"}\na,b\n1,2\n3\n");
  CHECK_THROWS(io::CsvDocument::parse(ragged));
}
