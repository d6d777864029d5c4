#include <catch_amalgamated.hpp>

#include "qstoch/errors.hpp"
#include "qstoch/povm.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/representation.hpp"
#include "qstoch/verify.hpp"

using namespace qstoch;

namespace {

FamilyMap families(std::initializer_list<std::pair<std::size_t, QuasiPovm>> list) {
  FamilyMap m;
  for (const auto& [d, p] : list) m.emplace(d, p);
  return m;
}

SweepOptions sweep(std::size_t trials, std::uint64_t seed, double tol = 1e-9) {
  SweepOptions o;
  o.trials = trials;
  o.seed = seed;
  o.tolerance = tol;
  return o;
}

}  // namespace

TEST_CASE("functoriality sweeps", "[verify]") {
  const auto f = families({{2, tetrahedron_povm()}, {3, wh_sic(3, shipped_fiducial(3))}});
  const LawReport r = check_functoriality(f, 2, 3, 2, sweep(20, 1));
  CHECK(r.passed);
  CHECK(r.trials == 20);
  CHECK(r.residuals.size() == 20);
  CHECK(r.max_residual < 1e-9);
  CHECK(r.law == "functoriality");

  const auto bad = families({{2, classical_povm(2)}});
  CHECK_THROWS_AS(check_functoriality(bad, 2, 2, 2, sweep(1, 0)), ValidationError);
  CHECK_THROWS_AS(check_functoriality(f, 2, 4, 2, sweep(1, 0)), ValidationError);
  CHECK_THROWS_AS(check_functoriality(f, 2, 2, 2, sweep(0, 0)), ValidationError);
}

TEST_CASE("functoriality holds trivially for the trivial family", "[verify]") {
  const std::vector<double> w{0.5, 0.3, 0.2};
  const QuasiPovm t = trivial_quasi_povm(2, w);
  const LawReport r = check_functoriality(families({{2, t}}), 2, 2, 2, sweep(10, 4));
  CHECK(r.passed);
  const QuasiProbVector first = represent_state(t, random_state(2, 0));
  for (std::uint64_t s = 1; s < 10; ++s) {
    const QuasiProbVector p = represent_state(t, random_state(2, s));
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(p[i] - first[i]) < 1e-12);
  }
}

TEST_CASE("reports are reproducible and thread-count independent", "[verify]") {
  const auto f = complete_families(families({{2, tetrahedron_povm()}}), {2, 3}, 9);
  SweepOptions serial = sweep(12, 5);
  SweepOptions parallel = serial;
  parallel.threads = 4;
  const LawReport a = check_functoriality(f, 2, 3, 2, serial);
  const LawReport b = check_functoriality(f, 2, 3, 2, serial);
  const LawReport c = check_functoriality(f, 2, 3, 2, parallel);
  CHECK(a.residuals == b.residuals);
  CHECK(a.residuals == c.residuals);
  const LawReport other = check_functoriality(f, 2, 3, 2, sweep(12, 6));
  CHECK(other.residuals != a.residuals);
}

TEST_CASE("complete_families keeps supplied families", "[verify]") {
  const auto f = complete_families(families({{2, tetrahedron_povm()}}), {2, 3, 4}, 1);
  CHECK(f.at(2).id() == tetrahedron_povm().id());
  CHECK(f.at(3).flags().minimal);
  CHECK(f.at(4).flags().minimal);
  CHECK(f.at(3).id() == complete_families({}, {3}, 1).at(3).id());
}

TEST_CASE("monoidal structure", "[verify][monoidal]") {
  SECTION("pair") {
    const auto f = complete_families(families({{2, tetrahedron_povm()}}), {2, 4}, 3);
    const LawReport r = check_monoidal(f, {2, 2}, sweep(10, 2));
    CHECK(r.passed);
    CHECK(r.notes.count("state_law_max"));
    CHECK(r.notes.count("naturality_max"));
  }
  SECTION("mixed dimensions") {
    const auto f = complete_families(families({{2, tetrahedron_povm()}}), {2, 3, 6}, 3);
    CHECK(check_monoidal(f, {2, 3}, sweep(5, 2)).passed);
  }
  SECTION("triple") {
    const auto f = complete_families(families({{2, tetrahedron_povm()}}), {2, 4, 8}, 3);
    const LawReport r = check_monoidal(f, {2, 2, 2}, sweep(3, 2, 1e-8));
    CHECK(r.passed);
    CHECK(r.notes.count("coherence"));
  }
  SECTION("missing product family") {
    const auto f = families({{2, tetrahedron_povm()}});
    CHECK_THROWS_AS(check_monoidal(f, {2, 2}, sweep(1, 0)), ValidationError);
    CHECK_THROWS_AS(check_monoidal(f, {2}, sweep(1, 0)), DimensionError);
  }
}

TEST_CASE("naturality", "[verify][naturality]") {
  const auto a = families({{2, tetrahedron_povm()}, {3, wh_sic(3, shipped_fiducial(3))}});
  SECTION("same family on both sides") {
    const LawReport r = check_naturality(a, a, 2, 3, sweep(10, 1));
    CHECK(r.max_residual < 1e-12);
  }
  SECTION("different families") {
    const auto b = complete_families({}, {2, 3}, 77);
    const LawReport r = check_naturality(a, b, 2, 3, sweep(10, 1));
    CHECK(r.passed);
    CHECK(r.notes.count("eta_inverse_defect"));
  }
}

TEST_CASE("dagger", "[verify][dagger]") {
  SECTION("SIC families preserve the dagger") {
    for (const QuasiPovm& p : {tetrahedron_povm(), wh_sic(3, shipped_fiducial(3))}) {
      const LawReport r = check_dagger(p, sweep(10, 3));
      CHECK(r.passed);
      CHECK(r.notes.at("sic_form") == "present");
    }
  }
  SECTION("a random minimal IC does not") {
    const LawReport r = check_dagger(random_minimal_ic(2, 5), sweep(10, 3));
    CHECK_FALSE(r.passed);
    CHECK(r.max_residual > 1e-3);
    CHECK(r.notes.at("sic_form") == "absent");
  }
  SECTION("identity channel: Q(id) = T, so the transpose test is the symmetry of T") {
    for (const QuasiPovm& p : {tetrahedron_povm(), random_minimal_ic(2, 5)}) {
      const TransitionMatrix t(p);
      const RealMatrix q = represent_channel(p, p, Channel::identity(2)).matrix();
      CHECK((max_abs_diff(q, q.transpose()) < 1e-12) == t.symmetric());
    }
  }
  SECTION("non-minimal families are rejected") {
    CHECK_THROWS_AS(check_dagger(classical_povm(2), sweep(1, 0)), ValidationError);
  }
}

TEST_CASE("orbit span rank", "[verify][orbit]") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const ComplexMatrix z{{1, 0}, {0, -1}};
  CHECK(orbit_span_rank(2, {i2}, 50, 1) == 1);
  CHECK(orbit_span_rank(2, {i2, z}, 200, 1) == 4);
  CHECK(orbit_span_rank(2, {i2, ComplexMatrix(i2 * cplx(3.0))}, 50, 1) == 1);
  const ComplexMatrix p{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
  CHECK(orbit_span_rank(3, {ComplexMatrix::identity(3), p}, 300, 2) == 9);

  std::size_t last = 0;
  for (std::size_t n : {1, 2, 3, 4, 6, 10}) {
    const std::size_t r = orbit_span_rank(3, {ComplexMatrix::identity(3), p}, n, 8);
    CHECK(r >= last);
    last = r;
  }
  CHECK_THROWS_AS(orbit_span_rank(3, {i2}, 5, 0), DimensionError);
}

TEST_CASE("dichotomy", "[verify]") {
  const auto trivial = dichotomy_report(trivial_quasi_povm(2, std::vector<double>{0.25, 0.75}));
  CHECK(trivial.verdict == Dichotomy::kTrivial);
  CHECK(trivial.gram_rank == 1);

  CHECK(dichotomy_report(tetrahedron_povm()).verdict == Dichotomy::kFaithful);
  CHECK(dichotomy_report(hermitian_basis_quasi_povm(3)).verdict == Dichotomy::kFaithful);

  // Six-outcome Pauli family: informationally complete, not minimal.
  const ComplexMatrix id = ComplexMatrix::identity(2);
  std::vector<ComplexMatrix> pauli6;
  for (const ComplexMatrix& s : {ComplexMatrix{{0, 1}, {1, 0}},
                                 ComplexMatrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}},
                                 ComplexMatrix{{1, 0}, {0, -1}}}) {
    pauli6.push_back((id + s) / cplx(6.0));
    pauli6.push_back((id - s) / cplx(6.0));
  }
  const QuasiPovm p6(2, pauli6);
  CHECK_FALSE(p6.flags().minimal);
  CHECK(dichotomy_report(p6).verdict == Dichotomy::kFaithful);

  const ComplexMatrix z{{1, 0}, {0, -1}};
  const auto diag = dichotomy_report(QuasiPovm(2, {(id + z) / cplx(2.0), (id - z) / cplx(2.0)}));
  CHECK(diag.verdict == Dichotomy::kDiagnostic);
  CHECK(diag.gram_rank == 2);
  CHECK(diag.detail.find("violates dichotomy premises") != std::string::npos);
}
