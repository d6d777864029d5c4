#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qstoch/cli.hpp"
#include "qstoch/io.hpp"

using namespace qstoch;
using io::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "qstoch_cli_test") {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("catalog, represent, compose", "[cli]") {
  TempDir tmp;
  const auto tetra = tmp / "tetra.json", had = tmp / "had.json";
  REQUIRE(run({"catalog", "--kind", "sic", "--dim", "2", "-o", tetra}).code == 0);
  CHECK(io::povm_from_json(io::read_file(tetra)).id() == tetrahedron_povm().id());
  REQUIRE(run({"catalog", "--kind", "channel-hadamard", "-o", had}).code == 0);

  const Result rep = run({"represent", "channel", "--in", tetra, "--out", tetra, "--channel", had});
  REQUIRE(rep.code == 0);
  const QRep q = io::qrep_from_json(json::parse(rep.out));
  CHECK(q.rows() == 4);
  CHECK(q.cols() == 4);
  for (double s : column_sums(q.matrix())) CHECK(std::abs(s - 1.0) < 1e-10);

  // H o H = id, whose image is T.
  const auto qh = tmp / "qh.json", qhh = tmp / "qhh.json";
  io::write_file(qh, json::parse(rep.out));
  REQUIRE(run({"compose", "--first", qh, "--second", qh, "--povm", tetra, "-o", qhh}).code == 0);
  CHECK(max_abs_diff(io::qrep_from_json(io::read_file(qhh)).matrix(),
                     TransitionMatrix(tetrahedron_povm()).matrix()) < 1e-12);
  // Star frame composition needs the intermediate family.
  CHECK(run({"compose", "--first", qh, "--second", qh}).code == 2);

  const Result right = run({"represent", "channel", "--in", tetra, "--channel", had, "--frame", "right"});
  REQUIRE(right.code == 0);
  CHECK(io::qrep_from_json(json::parse(right.out)).frame() == Frame::kRight);
}

TEST_CASE("verify exit codes follow the report", "[cli]") {
  TempDir tmp;
  const auto tetra = tmp / "tetra.json", ic = tmp / "ic.json";
  REQUIRE(run({"catalog", "--kind", "sic", "--dim", "2", "-o", tetra}).code == 0);
  REQUIRE(run({"catalog", "--kind", "random-ic", "--dim", "2", "--seed", "3", "-o", ic}).code == 0);

  const Result pass = run({"verify", "dagger", "--povm", tetra, "--trials", "50", "--seed", "7",
                           "--tol", "1e-9", "--json"});
  CHECK(pass.code == 0);
  const json report = json::parse(pass.out);
  CHECK(report["passed"] == true);
  CHECK(report["trials"] == 50);
  CHECK(report["seed"] == 7);

  const Result fail = run({"verify", "dagger", "--povm", ic, "--trials", "20", "--json"});
  CHECK(fail.code == 1);
  CHECK(json::parse(fail.out)["passed"] == false);

  CHECK(run({"verify", "functoriality", "--povm", tetra, "--dims", "2,3,2", "--trials", "5"}).code == 0);
  CHECK(run({"verify", "monoidal", "--povm", tetra, "--trials", "3"}).code == 0);
  CHECK(run({"verify", "naturality", "--povm", tetra, "--povm-b", ic, "--trials", "5"}).code == 0);
  CHECK(run({"verify", "orbit-rank", "--dim", "2", "--eigenvalues", "1,-1", "--samples", "50"}).code == 0);
  CHECK(run({"verify", "orbit-rank", "--dim", "2", "--samples", "50"}).code == 1);
  CHECK(run({"verify", "dichotomy", "--povm", tetra}).code == 0);
  // An absurd tolerance turns a passing law into a failure.
  CHECK(run({"verify", "functoriality", "--povm", tetra, "--trials", "3", "--tol", "0"}).code == 1);
}

TEST_CASE("QSTOCH_SEED provides the default seed", "[cli]") {
  TempDir tmp;
  const auto ic = tmp / "ic.json";
  REQUIRE(run({"catalog", "--kind", "random-ic", "--dim", "2", "-o", ic}).code == 0);
  const Result explicit_seed = run({"verify", "dagger", "--povm", ic, "--trials", "4", "--seed", "11", "--json"});
  ::setenv("QSTOCH_SEED", "11", 1);
  const Result env_seed = run({"verify", "dagger", "--povm", ic, "--trials", "4", "--json"});
  ::setenv("QSTOCH_SEED", "eleven", 1);
  const Result bad = run({"verify", "dagger", "--povm", ic, "--trials", "4"});
  ::unsetenv("QSTOCH_SEED");
  CHECK(explicit_seed.out == env_seed.out);
  CHECK(bad.code == 2);
}

TEST_CASE("measure, negativity, extract, tensor", "[cli]") {
  TempDir tmp;
  const auto tetra = tmp / "tetra.json", rho = tmp / "rho.json", meas = tmp / "m.json";
  REQUIRE(run({"catalog", "--kind", "tetrahedron", "-o", tetra}).code == 0);
  REQUIRE(run({"catalog", "--kind", "state-random", "--seed", "4", "-o", rho}).code == 0);
  REQUIRE(run({"catalog", "--kind", "measurement-random", "--outcomes", "3", "-o", meas}).code == 0);

  const Result m = run({"measure", "--state", rho, "--measurement", meas, "--povm", tetra, "--json"});
  REQUIRE(m.code == 0);
  CHECK(json::parse(m.out)["max_deviation"].get<double>() < 1e-10);

  const Result n = run({"negativity", "--povm", tetra, "--json"});
  REQUIRE(n.code == 0);
  CHECK(std::abs(json::parse(n.out)["transition_inverse_negativity"].get<double>() - 6.0) < 1e-9);

  const auto hb = tmp / "hb.json";
  REQUIRE(run({"catalog", "--kind", "hermitian-basis", "--dim", "3", "-o", hb}).code == 0);
  const Result x = run({"extract", "--povm", hb});
  REQUIRE(x.code == 0);
  const QuasiPovm got = io::povm_from_json(json::parse(x.out));
  const QuasiPovm want = hermitian_basis_quasi_povm(3);
  for (std::size_t i = 0; i < 9; ++i) CHECK(max_abs_diff(got.effect(i), want.effect(i)) < 1e-12);

  const Result t = run({"tensor", "states", "--a", rho, "--b", rho});
  REQUIRE(t.code == 0);
  CHECK(io::state_from_json(json::parse(t.out)).dim() == 4);
}

TEST_CASE("usage and schema errors exit with 2", "[cli]") {
  TempDir tmp;
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"catalog"}).code == 2);
  CHECK(run({"catalog", "--kind", "nonsense"}).code == 2);
  CHECK(run({"verify", "gravity"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const auto broken = tmp / "broken.json";
  json c = io::to_json(random_channel(2, 2, 2, 1));
  c["kraus"][1]["data"][3] = "oops";
  io::write_file(broken, c);
  const auto tetra = tmp / "tetra.json";
  REQUIRE(run({"catalog", "--kind", "tetrahedron", "-o", tetra}).code == 0);
  const Result r = run({"represent", "channel", "--in", tetra, "--channel", broken});
  CHECK(r.code == 2);
  CHECK(r.err.find("$.kraus[1].data[3]") != std::string::npos);
  CHECK(run({"represent", "channel", "--in", tetra, "--channel", tmp / "nope.json"}).code == 2);
}

TEST_CASE("emitted files re-parse to equal values", "[cli]") {
  TempDir tmp;
  for (const std::string kind : {"sic", "random-ic", "hermitian-basis", "state-random", "channel-random",
                                 "channel-unital", "measurement-random"}) {
    const auto f = tmp / (kind + ".json");
    REQUIRE(run({"catalog", "--kind", kind, "--dim", "3", "--seed", "5", "-o", f}).code == 0);
    const json j = io::read_file(f);
    const std::string type = io::document_type(j);
    json again;
    if (type == "povm") again = io::to_json(io::povm_from_json(j));
    if (type == "state") again = io::to_json(io::state_from_json(j));
    if (type == "channel") again = io::to_json(io::channel_from_json(j));
    if (type == "measurement") again = io::to_json(io::measurement_from_json(j));
    CHECK(io::dump(again) == io::dump(j));
  }
}
