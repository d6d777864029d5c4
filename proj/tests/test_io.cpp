#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "qstoch/errors.hpp"
#include "qstoch/io.hpp"

using namespace qstoch;
using io::json;

namespace {

// Serialize, parse back, serialize again: both the text and the values must match.
template <class T, class Parse>
void check_round_trip(const T& value, Parse parse) {
  const std::string text = io::dump(io::to_json(value));
  const T back = parse(json::parse(text), "$");
  CHECK(io::dump(io::to_json(back)) == text);
}

std::string schema_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("round trips are exact", "[io]") {
  const State rho = random_state(3, 1);
  check_round_trip(rho, io::state_from_json);
  CHECK(io::state_from_json(io::to_json(rho)).matrix() == rho.matrix());

  const Channel c = random_channel(2, 3, 2, 2);
  check_round_trip(c, io::channel_from_json);
  const Channel c2 = io::channel_from_json(io::to_json(c));
  for (std::size_t k = 0; k < c.kraus().size(); ++k) CHECK(c2.kraus()[k] == c.kraus()[k]);

  check_round_trip(random_measurement(2, 3, 3), io::measurement_from_json);

  const QuasiPovm p = random_minimal_ic(3, 4);
  check_round_trip(p, io::povm_from_json);
  CHECK(io::povm_from_json(io::to_json(p)).id() == p.id());

  const QRep r = represent_channel(tetrahedron_povm(), p, random_channel(2, 3, 2, 5));
  check_round_trip(r, io::qrep_from_json);
  const QRep r2 = io::qrep_from_json(io::to_json(r));
  CHECK(r2.matrix() == r.matrix());
  CHECK(r2.in_povm_id() == r.in_povm_id());
  CHECK(r2.kind() == RepKind::kChannel);

  const QRep left = to_qstoch(r, TransitionMatrix(p), Side::kLeft);
  CHECK(io::qrep_from_json(io::to_json(left)).frame() == Frame::kLeft);
}

TEST_CASE("awkward doubles survive", "[io]") {
  const std::vector<cplx> vals{{0.1, -0.0}, {1.0 / 3.0, 5e-324}, {1e308, -2.5e-17}, {-1.0, 0.0}};
  const ComplexMatrix m(2, 2, vals);
  const ComplexMatrix back = io::complex_matrix_from_json(json::parse(io::dump(io::to_json(m))));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.data()[i].real() == vals[i].real());
    CHECK(back.data()[i].imag() == vals[i].imag());
  }
}

TEST_CASE("schema errors name the failing node", "[io]") {
  json c = io::to_json(random_channel(2, 2, 2, 1));
  c["kraus"][1]["data"][3] = {1.0};
  CHECK(schema_path([&] { io::channel_from_json(c); }) == "$.kraus[1].data[3]");

  c = io::to_json(random_channel(2, 2, 2, 1));
  c["kraus"][0]["data"][2][1] = "x";
  CHECK(schema_path([&] { io::channel_from_json(c); }) == "$.kraus[0].data[2][1]");

  c.erase("dim_in");
  CHECK(schema_path([&] { io::channel_from_json(c); }) == "$");

  json s = io::to_json(random_state(2, 1));
  s["type"] = "channel";
  CHECK(schema_path([&] { io::state_from_json(s); }) == "$.type");
  s["type"] = "state";
  s["dim"] = 3;
  CHECK(schema_path([&] { io::state_from_json(s); }) == "$.matrix");
  s["dim"] = -1;
  CHECK(schema_path([&] { io::state_from_json(s); }) == "$.dim");

  json q = io::to_json(represent_state_morphism(tetrahedron_povm(), random_state(2, 0)));
  q["matrix"][2] = json::array({1.0, 2.0});
  CHECK(schema_path([&] { io::qrep_from_json(q); }) == "$.matrix[2]");
  CHECK_THROWS_AS(io::document_type(json::object()), SchemaError);
}

TEST_CASE("semantic validation of parsed documents", "[io]") {
  json s = io::to_json(random_state(2, 1));
  s["matrix"]["data"][0][0] = 2.0;
  CHECK_THROWS_AS(io::state_from_json(s), ValidationError);

  json p = io::to_json(tetrahedron_povm());
  p["flags"]["positive"] = false;
  CHECK_THROWS_AS(io::povm_from_json(p), ValidationError);
  p = io::to_json(tetrahedron_povm());
  p["id"] = "povm-0000000000000000";
  CHECK_THROWS_AS(io::povm_from_json(p), ValidationError);
  p = io::to_json(tetrahedron_povm());
  p.erase("flags");
  p.erase("id");
  CHECK(io::povm_from_json(p).id() == tetrahedron_povm().id());

  json q = io::to_json(represent_state_morphism(tetrahedron_povm(), random_state(2, 0)));
  q["matrix"][0][0] = 5.0;
  CHECK_THROWS_AS(io::qrep_from_json(q), ValidationError);
  q = io::to_json(represent_state_morphism(tetrahedron_povm(), random_state(2, 0)));
  q["kind"] = "banana";
  CHECK(schema_path([&] { io::qrep_from_json(q); }) == "$.kind");
}

TEST_CASE("files", "[io]") {
  const auto dir = std::filesystem::temp_directory_path() / "qstoch_io_test";
  std::filesystem::create_directories(dir);
  const std::string f = (dir / "povm.json").string();
  io::write_file(f, io::to_json(tetrahedron_povm()));
  CHECK(io::povm_from_json(io::read_file(f)).id() == tetrahedron_povm().id());
  CHECK_THROWS_AS(io::read_file((dir / "missing.json").string()), SchemaError);
  {
    std::FILE* h = std::fopen((dir / "broken.json").string().c_str(), "w");
    std::fputs("{\"type\": ", h);
    std::fclose(h);
  }
  CHECK_THROWS_AS(io::read_file((dir / "broken.json").string()), SchemaError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("law report JSON", "[io]") {
  LawReport r;
  r.law = "dagger";
  r.trials = 2;
  r.residuals = {1e-16, 2e-16};
  r.max_residual = 2e-16;
  r.tolerance = 1e-9;
  r.passed = true;
  r.notes["sic_form"] = "present";
  const json j = io::to_json(r);
  CHECK(j["law"] == "dagger");
  CHECK(j["passed"] == true);
  CHECK(j["residuals"].size() == 2);
  CHECK(j["notes"]["sic_form"] == "present");
}
