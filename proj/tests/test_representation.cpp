#include <catch_amalgamated.hpp>

#include <cmath>

#include "qstoch/errors.hpp"
#include "qstoch/linalg.hpp"
#include "qstoch/povm.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/representation.hpp"

using namespace qstoch;

namespace {

const double kS = 1.0 / std::sqrt(3.0);
// z components of the tetrahedron Bloch vectors, in catalog order
const double kBlochZ[4] = {kS, -kS, -kS, kS};

State ket0() { return State(ComplexMatrix{{1, 0}, {0, 0}}); }

RealMatrix tetra_t_oracle() {
  return RealMatrix::identity(4) * (1.0 / 3.0) + RealMatrix::constant(4, 4, 1.0 / 6.0);
}

RealMatrix tetra_t_inverse_oracle() {
  return RealMatrix::identity(4) * 3.0 - RealMatrix::constant(4, 4, 0.5);
}

}  // namespace

TEST_CASE("tetrahedron transition matrix and inverse", "[representation]") {
  // The oracle inverse really is the inverse of the oracle T.
  REQUIRE(max_abs_diff(RealMatrix(tetra_t_oracle() * tetra_t_inverse_oracle()),
                       RealMatrix::identity(4)) < 1e-15);
  const TransitionMatrix t(tetrahedron_povm());
  CHECK(max_abs_diff(t.matrix(), tetra_t_oracle()) < 1e-12);
  CHECK(max_abs_diff(t.inverse(), tetra_t_inverse_oracle()) < 1e-10);
  CHECK(negativity(t.inverse()) == Catch::Approx(6.0).margin(1e-9));
  CHECK(t.invertible());
  CHECK(t.stochastic());
  CHECK(t.doubly_stochastic());
  CHECK(t.symmetric());
  REQUIRE(t.sic_form());
  CHECK(t.sic_form()->alpha == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(t.sic_form()->beta == Catch::Approx(1.0 / 6.0).margin(1e-12));
}

TEST_CASE("transition matrix structure across the catalog", "[representation]") {
  SECTION("classical family gives the identity") {
    const TransitionMatrix t(classical_povm(3));
    CHECK(max_abs_diff(t.matrix(), RealMatrix::identity(3)) < 1e-15);
    CHECK(t.invertible());
  }
  SECTION("trivial family: every column equals the weights") {
    const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    const TransitionMatrix t(trivial_quasi_povm(2, w));
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(t.matrix()(i, j) - w[i]) < 1e-15);
    CHECK_FALSE(t.invertible());
    CHECK(t.stochastic());
    CHECK_FALSE(t.doubly_stochastic());
  }
  SECTION("positive families: doubly stochastic iff equal traces") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const QuasiPovm p = random_minimal_ic(3, seed);
      const TransitionMatrix t(p);
      CHECK(t.stochastic());
      CHECK(t.doubly_stochastic() == p.flags().equal_trace);
      CHECK(t.symmetric() == p.flags().equal_trace);
      for (double s : column_sums(t.matrix())) CHECK(std::abs(s - 1.0) < 1e-10);
    }
    const TransitionMatrix sic(wh_sic(3, shipped_fiducial(3)));
    CHECK(sic.doubly_stochastic());
    CHECK(sic.symmetric());
  }
  SECTION("quasi-POVM: columns still sum to one, entries may be negative") {
    const TransitionMatrix t(hermitian_basis_quasi_povm(3));
    for (double s : column_sums(t.matrix())) CHECK(std::abs(s - 1.0) < 1e-10);
    CHECK_FALSE(t.stochastic());
    CHECK(t.invertible());
  }
  SECTION("zero-trace effects are rejected") {
    const ComplexMatrix z{{1, 0}, {0, -1}};
    CHECK_THROWS_AS(TransitionMatrix(QuasiPovm(2, {z, ComplexMatrix::identity(2) - z})),
                    ValidationError);
  }
}

TEST_CASE("state representation of |0> under the tetrahedron", "[representation]") {
  const QuasiPovm t = tetrahedron_povm();
  const QuasiProbVector p = represent_state(t, ket0());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(p[i] - (1.0 + kBlochZ[i]) / 4.0) < 1e-15);

  // alpha = T^{-1} p = 3p - 1/2 because the entries of p sum to one.
  const auto alpha = expansion_coefficients(TransitionMatrix(t), p);
  double neg = 0;
  for (int i = 0; i < 4; ++i) {
    const double expect = 3.0 * (1.0 + kBlochZ[i]) / 4.0 - 0.5;
    CHECK(std::abs(alpha[i] - expect) < 1e-14);
    if (expect < 0) neg -= expect;
  }
  CHECK(negativity(alpha) == Catch::Approx(neg).margin(1e-14));
  CHECK(negativity(alpha) == Catch::Approx(std::sqrt(3.0) / 2.0 - 0.5).margin(1e-14));

  CHECK_THROWS_AS(represent_state(t, random_state(3, 0)), DimensionError);
  CHECK_THROWS_AS(QuasiProbVector({0.5, 0.6}), ValidationError);
}

TEST_CASE("measurement representation", "[representation]") {
  const QRep q = represent_measurement(tetrahedron_povm(), Measurement::computational(2));
  CHECK(q.kind() == RepKind::kMeasurement);
  CHECK(q.out_povm_id() == classical_povm(2).id());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(q.matrix()(0, i) - (1.0 + kBlochZ[i]) / 2.0) < 1e-15);
    CHECK(std::abs(q.matrix()(1, i) - (1.0 - kBlochZ[i]) / 2.0) < 1e-15);
  }
}

TEST_CASE("identity channel maps to T and is the star unit", "[representation]") {
  for (const QuasiPovm& p : {tetrahedron_povm(), random_minimal_ic(3, 2), hermitian_basis_quasi_povm(2)}) {
    const TransitionMatrix t(p);
    const QRep id = represent_channel(p, p, Channel::identity(p.dim()));
    CHECK(max_abs_diff(id.matrix(), t.matrix()) < 1e-13);
    const QRep phi = represent_channel(p, p, random_channel(p.dim(), p.dim(), 2, 3));
    CHECK(max_abs_diff(star_compose(id, phi, t).matrix(), phi.matrix()) < 1e-12);
    CHECK(max_abs_diff(star_compose(phi, id, t).matrix(), phi.matrix()) < 1e-12);
  }
}

TEST_CASE("star composition equals the representation of the composite", "[representation]") {
  const QuasiPovm a = tetrahedron_povm();
  const QuasiPovm b = wh_sic(3, shipped_fiducial(3));
  const Channel phi = random_channel(2, 3, 2, 10);
  const Channel psi = random_channel(3, 2, 3, 11);
  const QRep r = represent_channel(a, b, phi);
  const QRep s = represent_channel(b, a, psi);
  const QRep direct = represent_channel(a, a, compose_channels(psi, phi));
  CHECK(max_abs_diff(star_compose(s, r, TransitionMatrix(b)).matrix(), direct.matrix()) < 1e-12);

  // Born rule through the pipeline
  const State rho = random_state(2, 12);
  const Measurement m = random_measurement(2, 3, 13);
  const QRep born = star_compose(represent_measurement(a, m), represent_state_morphism(a, rho),
                                 TransitionMatrix(a));
  CHECK(born.kind() == RepKind::kState);
  const auto direct_p = m.probabilities(rho);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(born.matrix()(k, 0) - direct_p[k]) < 1e-12);
}

TEST_CASE("composition guards", "[representation]") {
  const QuasiPovm a = tetrahedron_povm();
  const QuasiPovm b = random_minimal_ic(2, 1);
  const QRep r = represent_channel(a, a, Channel::identity(2));
  const QRep s = represent_channel(b, b, Channel::identity(2));
  CHECK_THROWS_AS(star_compose(s, r, TransitionMatrix(a)), CompositionError);
  CHECK_THROWS_AS(star_compose(r, r, TransitionMatrix(b)), CompositionError);
  const QRep rr = to_qstoch(r, TransitionMatrix(a), Side::kRight);
  CHECK_THROWS_AS(star_compose(rr, r, TransitionMatrix(a)), CompositionError);
  CHECK_THROWS_AS(qstoch_compose(r, r), CompositionError);
  const QRep rl = to_qstoch(r, TransitionMatrix(a), Side::kLeft);
  CHECK_THROWS_AS(qstoch_compose(rr, rl), CompositionError);
  CHECK_THROWS_AS(to_qstoch(r, TransitionMatrix(b), Side::kRight), CompositionError);
  CHECK_THROWS_AS(QRep(RealMatrix{{0.5}, {0.6}}, "x", "y", RepKind::kState), ValidationError);
  CHECK_THROWS_AS(QRep(RealMatrix::identity(2), "x", "y", RepKind::kState), DimensionError);
}

TEST_CASE("the F_T functors turn star composition into matrix products", "[representation]") {
  const QuasiPovm a = tetrahedron_povm();
  const QuasiPovm b = random_minimal_ic(3, 4);
  const TransitionMatrix ta(a), tb(b);
  const QRep r = represent_channel(a, b, random_channel(2, 3, 2, 20));
  const QRep s = represent_channel(b, a, random_channel(3, 2, 2, 21));
  const QRep star = star_compose(s, r, tb);
  for (Side side : {Side::kRight, Side::kLeft}) {
    const TransitionMatrix& t_r = side == Side::kRight ? ta : tb;
    const TransitionMatrix& t_s = side == Side::kRight ? tb : ta;
    const TransitionMatrix& t_star = ta;
    const QRep lhs = to_qstoch(star, t_star, side);
    const QRep rhs = qstoch_compose(to_qstoch(s, t_s, side), to_qstoch(r, t_r, side));
    CHECK(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-12);
  }
  // The identity goes to the identity.
  const QRep id = represent_channel(a, a, Channel::identity(2));
  CHECK(max_abs_diff(to_qstoch(id, ta, Side::kRight).matrix(), RealMatrix::identity(4)) < 1e-13);
  CHECK(max_abs_diff(to_qstoch(id, ta, Side::kLeft).matrix(), RealMatrix::identity(4)) < 1e-13);
}

TEST_CASE("positivity depends on the side", "[representation]") {
  const QuasiPovm a = tetrahedron_povm();
  const QRep st = represent_state_morphism(a, ket0());
  const QRep right = to_qstoch(st, TransitionMatrix(unit_povm()), Side::kRight);
  for (double v : right.matrix().data()) CHECK(v >= -1e-12);
  const QRep left = to_qstoch(st, TransitionMatrix(a), Side::kLeft);
  CHECK(*std::min_element(left.matrix().data().begin(), left.matrix().data().end()) < -0.1);
}

TEST_CASE("state reconstruction", "[representation]") {
  for (const QuasiPovm& p : {tetrahedron_povm(), wh_sic(3, shipped_fiducial(3)), hermitian_basis_quasi_povm(3)}) {
    const State rho = random_state(p.dim(), 77);
    const State back = reconstruct_state(p, represent_state(p, rho));
    CHECK(max_abs_diff(back.matrix(), rho.matrix()) < 1e-10);
  }
  const std::vector<double> w{0.25, 0.25, 0.5};
  const QuasiPovm trivial = trivial_quasi_povm(2, w);
  const QuasiProbVector p = represent_state(trivial, ket0());
  CHECK_THROWS_AS(reconstruct_state(trivial, p), AmbiguityError);
  // Generalized inverse of a trivial family returns the maximally mixed state.
  const State mixed = reconstruct_state(trivial, p, Reconstruction::kGeneralizedInverse);
  CHECK(max_abs_diff(mixed.matrix(), State::maximally_mixed(2).matrix()) < 1e-12);
}

TEST_CASE("state preparation channels are states", "[representation]") {
  const QuasiPovm a = tetrahedron_povm();
  const State rho = random_state(2, 30);
  const QRep viaChannel = represent_channel(unit_povm(), a, Channel::from_state(rho));
  CHECK(viaChannel.kind() == RepKind::kState);
  CHECK(max_abs_diff(viaChannel.matrix(), represent_state_morphism(a, rho).matrix()) < 1e-14);
}

TEST_CASE("coherence matrix of a product family is T1 (x) T2", "[representation][monoidal]") {
  const QuasiPovm a = tetrahedron_povm();
  const QuasiPovm b = wh_sic(3, shipped_fiducial(3));
  const CoherenceMatrix s = tensor_coherence(a, b, product_povm(a, b));
  const RealMatrix oracle = kron(TransitionMatrix(a).matrix(), TransitionMatrix(b).matrix());
  CHECK(max_abs_diff(s.matrix, oracle) < 1e-13);
  CHECK(s.condition >= 1.0);
  CHECK_THROWS_AS(tensor_coherence(a, b, random_minimal_ic(5, 0)), DimensionError);
  CHECK_THROWS_AS(tensor_coherence(a, a, trivial_quasi_povm(4, std::vector<double>{1.0})),
                  ValidationError);

  // With the product family as composite, (x)' is the plain Kronecker product.
  const QuasiPovm ab = product_povm(a, a);
  const RealMatrix qa = represent_channel(a, a, random_channel(2, 2, 2, 1)).matrix();
  const RealMatrix qb = represent_channel(a, a, random_channel(2, 2, 2, 2)).matrix();
  const TransitionMatrix ta(a), tab(ab);
  CHECK(max_abs_diff(tensor_prime(qa, qb, ta, ta, tab), kron(qa, qb)) < 1e-12);
}

TEST_CASE("natural isomorphism", "[representation][naturality]") {
  const QuasiPovm a = tetrahedron_povm();
  const NaturalIso same = natural_iso(a, a);
  CHECK(max_abs_diff(same.eta, RealMatrix::identity(4)) < 1e-13);

  const QuasiPovm b = random_minimal_ic(2, 9);
  const NaturalIso iso = natural_iso(a, b);
  CHECK(max_abs_diff(RealMatrix(iso.eta * iso.inverse), RealMatrix::identity(4)) < 1e-10);
  // eta maps a-probabilities to b-probabilities of the same state.
  const State rho = random_state(2, 5);
  const RealMatrix pa = represent_state(a, rho).as_column();
  const RealMatrix pb = represent_state(b, rho).as_column();
  CHECK(max_abs_diff(RealMatrix(iso.eta * pa), pb) < 1e-12);
  CHECK_THROWS_AS(natural_iso(a, random_minimal_ic(3, 0)), DimensionError);
}

TEST_CASE("dagger form of T", "[representation][dagger]") {
  CHECK(check_dagger_form(TransitionMatrix(tetrahedron_povm())));
  const auto sic3 = check_dagger_form(TransitionMatrix(wh_sic(3, shipped_fiducial(3))));
  REQUIRE(sic3);
  // T = 1/(d+1) I + 1/(d(d+1)) J for a SIC: alpha + d^2 beta = 1.
  CHECK(sic3->alpha == Catch::Approx(1.0 / 4.0).margin(1e-12));
  CHECK(sic3->beta == Catch::Approx(1.0 / 12.0).margin(1e-12));
  CHECK_FALSE(check_dagger_form(TransitionMatrix(random_minimal_ic(2, 3))));
  // alpha I + beta J with the wrong normalization is not a transition matrix form.
  CHECK_FALSE(check_dagger_form(RealMatrix(RealMatrix::identity(3) + RealMatrix::constant(3, 3, 1.0))));
}

TEST_CASE("negativity", "[representation]") {
  const std::vector<double> v{0.5, -0.25, 1.0, -0.5};
  CHECK(negativity(v) == 0.75);
  CHECK(negativity(std::vector<double>{0.0, 1.0}) == 0.0);
}

TEST_CASE("extraction probes", "[representation][extraction]") {
  for (std::size_t d : {1, 2, 3}) {
    const auto probes = extraction_probes(d);
    CHECK(probes.size() == d * d);
    // The probes span the Hermitian matrices.
    ComplexMatrix stacked(probes.size(), d * d);
    for (std::size_t r = 0; r < probes.size(); ++r)
      for (std::size_t k = 0; k < d * d; ++k) stacked(r, k) = probes[r].matrix().data()[k];
    CHECK(numerical_rank(stacked, 1e-10) == d * d);
  }
}

TEST_CASE("quasi-POVM extraction", "[representation][extraction]") {
  auto round_trip = [](const QuasiPovm& p) {
    const StateMap map = [&p](const State& rho) { return represent_state(p, rho).entries(); };
    const QuasiPovm q = extract_quasi_povm(p.dim(), map, p.size(), 3);
    REQUIRE(q.size() == p.size());
    double worst = 0;
    for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, max_abs_diff(q.effect(i), p.effect(i)));
    return worst;
  };
  CHECK(round_trip(tetrahedron_povm()) < 1e-12);
  CHECK(round_trip(hermitian_basis_quasi_povm(3)) < 1e-12);
  CHECK(round_trip(trivial_quasi_povm(2, std::vector<double>{0.3, 0.7})) < 1e-12);
  CHECK(round_trip(random_minimal_ic(3, 8)) < 1e-12);

  SECTION("measurement after a channel gives the Heisenberg-picture effects") {
    const Channel c = random_channel(2, 3, 2, 40);
    const Measurement m = random_measurement(3, 4, 41);
    const StateMap map = [&](const State& rho) { return m.probabilities(apply_channel(c, rho)); };
    const QuasiPovm q = extract_quasi_povm(2, map, 4);
    for (std::size_t k = 0; k < 4; ++k) {
      ComplexMatrix dual(2, 2);
      for (const auto& kr : c.kraus()) dual += kr.adjoint() * m.effects()[k] * kr;
      CHECK(max_abs_diff(q.effect(k), dual) < 1e-12);
    }
  }
  SECTION("non-affine maps are rejected") {
    const StateMap purity = [](const State& rho) {
      const double p = trace_product(rho.matrix(), rho.matrix()).real();
      return std::vector<double>{p, 1.0 - p};
    };
    CHECK_THROWS_AS(extract_quasi_povm(2, purity, 2), ExtractionError);
  }
  SECTION("maps that are affine but not normalized are rejected") {
    const StateMap doubled = [](const State& rho) {
      return std::vector<double>{2.0 * rho.matrix()(0, 0).real(), rho.matrix()(1, 1).real()};
    };
    CHECK_THROWS_AS(extract_quasi_povm(2, doubled, 2), ExtractionError);
  }
  SECTION("length mismatch") {
    const StateMap short_map = [](const State&) { return std::vector<double>{1.0}; };
    CHECK_THROWS_AS(extract_quasi_povm(2, short_map, 2), ExtractionError);
  }
}

TEST_CASE("Hermitian-basis family: the negativity sits in T, not in T^-1", "[representation]") {
  // Oracle: T assembled from traces directly, inverse checked by multiplication.
  const QuasiPovm p = hermitian_basis_quasi_povm(3);
  const std::size_t n = p.size();
  RealMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      t(i, j) = (trace_product(p.effect(j), p.effect(i)) / p.effect(j).trace()).real();
  const TransitionMatrix tm(p);
  CHECK(max_abs_diff(tm.matrix(), t) < 1e-13);
  CHECK(max_abs_diff(t * tm.inverse(), RealMatrix::identity(n)) < 1e-10);
  double min_t = 1.0, min_inv = 1.0;
  for (double v : t.data()) min_t = std::min(min_t, v);
  for (double v : tm.inverse().data()) min_inv = std::min(min_inv, v);
  CHECK(min_t < -1.0);
  CHECK(min_inv > 0.0);
}
