#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "lamcert/io.hpp"

using namespace lamcert;

namespace {

Json fixture(const char* name) { return read_json_file(std::string(LAMCERT_FIXTURES "/") + name); }

std::string error_of(const Json& doc) {
  try {
    parse_manifold(doc);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("reals") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(3.0) == "3");
}

TEST_CASE("slope lists") {
  const auto s = parse_slope_list("1,-5;2,3");
  CHECK(s == CompleteSlope{Slope(1, -5), Slope(2, 3)});
  CHECK(format_slope_list(s) == "1,-5;2,3");
  CHECK_THROWS_AS(parse_slope_list("1;2"), InputError);
  CHECK_THROWS_AS(parse_slope_list("2,4"), InputError);
  CHECK_THROWS_AS(parse_slope_list("a,b"), InputError);
  CHECK_THROWS_AS(parse_slope_list(""), InputError);
  CHECK(parse_int_list("3,-1, 0", "class") == std::vector<std::int64_t>{3, -1, 0});
  CHECK_THROWS_AS(parse_int_list("3,x", "class"), InputError);
}

TEST_CASE("manifold round trip") {
  const auto b = parse_manifold(fixture("bd_manifold.json"));
  CHECK(b.cusps.size() == 2);
  CHECK(b.tube_mode == TubeMode::derive_from_nz);
  CHECK(b.constants.mu3 == 0.104);
  const Json again = to_json(b);
  CHECK(to_json(parse_manifold(again)) == again);
  const auto sq = parse_manifold(fixture("square.json"));
  CHECK(to_json(parse_manifold(to_json(sq))) == to_json(sq));
}

TEST_CASE("given tubes, explicit and from a boundary torus") {
  Json doc = fixture("square.json");
  doc["tubes"] = Json::array({{{"core_length", "0.01"}, {"twist", 1.0}, {"radius", 4}}});
  auto b = parse_manifold(doc);
  REQUIRE(b.tubes.size() == 1);
  CHECK(b.tubes[0].core_length == 0.01);
  doc["tubes"] = Json::array({{{"boundary", {{"shape", {0, 1}}, {"area", 0.001}}}, {"meridian", {40, 1}}}});
  b = parse_manifold(doc);
  CHECK(b.tube_mode == TubeMode::given);
  CHECK(b.tubes[0].radius > 0.0);
  CHECK(to_json(parse_manifold(to_json(b))) == to_json(b));
}

TEST_CASE("errors name the field") {
  Json doc = fixture("bd_manifold.json");
  doc["cusps"][0]["area"] = -1;
  CHECK(error_of(doc).find("cusps[0].area") != std::string::npos);
  doc = fixture("bd_manifold.json");
  doc["inclusion"][1] = Json::array({{1, 0}});
  CHECK(error_of(doc).find("inclusion") != std::string::npos);
  doc = fixture("bd_manifold.json");
  doc["constants"]["mu"] = "zero";
  CHECK(error_of(doc).find("constants.mu") != std::string::npos);
  doc = fixture("bd_manifold.json");
  doc["schema"] = "other";
  CHECK(error_of(doc).find("schema") != std::string::npos);
  doc = fixture("bd_manifold.json");
  doc.erase("cusps");
  CHECK(error_of(doc).find("cusps") != std::string::npos);
  Json fam = fixture("bd_family.json");
  fam["n_range"] = {5, 1};
  CHECK_THROWS_AS(parse_family(fam), InputError);
}

TEST_CASE("certify documents are deterministic and recompute") {
  const auto b = parse_manifold(fixture("bd_manifold.json"));
  const auto doc = certify_document(b, {40, 1}, parse_slope_list("1,-40;1,-40"), b.constants);
  CHECK(doc["schema"] == kSchema);
  CHECK(doc["kind"] == "certify-report");
  CHECK(doc.dump() == certify_document(b, {40, 1}, parse_slope_list("1,-40;1,-40"), b.constants).dump());
  CHECK(recompute_document(doc) == doc);

  const auto path = std::filesystem::temp_directory_path() / "lamcert_io_test.json";
  write_json_file(path, doc);
  CHECK(read_json_file(path) == doc);
  std::filesystem::remove(path);
}

TEST_CASE("family documents recompute") {
  const auto b = parse_manifold(fixture("bd_manifold.json"));
  const auto s = parse_family(fixture("bd_family.json"));
  const auto doc = family_document(s, b, b.constants, 1);
  CHECK(doc["kind"] == "family-report");
  CHECK(doc["table"]["threshold"]["N"].is_number_integer());
  CHECK(recompute_document(doc, 2) == doc);
  CHECK(to_json(parse_family(to_json(s))) == to_json(s));
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), InputError);
}
