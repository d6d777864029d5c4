#include "qstoch/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "qstoch/errors.hpp"
#include "qstoch/linalg.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/tolerances.hpp"

namespace qstoch {

namespace {

// Counter offsets keep the seed streams of the two channels in a trial apart.
constexpr std::uint64_t kSecondChannel = 1ULL << 32;
constexpr std::uint64_t kThirdInput = 2ULL << 32;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

const QuasiPovm& family_at(const FamilyMap& families, std::size_t dim) {
  auto it = families.find(dim);
  if (it == families.end()) {
    throw ValidationError("no quasi-POVM family supplied for dimension " + std::to_string(dim));
  }
  return it->second;
}

const QuasiPovm& minimal_family_at(const FamilyMap& families, std::size_t dim) {
  const QuasiPovm& f = family_at(families, dim);
  if (!f.flags().minimal) {
    throw ValidationError("family for dimension " + std::to_string(dim) + " is not minimal");
  }
  return f;
}

// Families whose effects are all multiples of I are not minimal, yet the
// pseudo-inverse star product is exact for them (every image equals T).
const QuasiPovm& functorial_family_at(const FamilyMap& families, std::size_t dim) {
  const QuasiPovm& f = family_at(families, dim);
  if (!f.flags().minimal && dichotomy_report(f).verdict != Dichotomy::kTrivial) {
    throw ValidationError("family for dimension " + std::to_string(dim) +
                          " is neither minimal nor trivial");
  }
  return f;
}

void run_trials(std::size_t trials, unsigned threads,
                const std::function<double(std::size_t)>& trial, std::vector<double>& out) {
  if (trials == 0) throw ValidationError("a law sweep needs at least one trial");
  out.assign(trials, 0.0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = trial(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < trials; i = next++) {
        try {
          out[i] = trial(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

LawReport finish(std::string law, const SweepOptions& opt, std::vector<double> residuals) {
  LawReport r;
  r.law = std::move(law);
  r.seed = opt.seed;
  r.trials = residuals.size();
  r.tolerance = opt.tolerance;
  double sum = 0.0;
  for (double v : residuals) {
    // NaN must fail the sweep, so fold it in as +inf.
    const double x = std::isnan(v) ? INFINITY : v;
    r.max_residual = std::max(r.max_residual, x);
    sum += x;
  }
  r.mean_residual = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  r.passed = r.max_residual < opt.tolerance;
  r.residuals = std::move(residuals);
  return r;
}

Channel trial_channel(std::size_t n, std::size_t m, std::uint64_t seed) {
  return random_channel(n, m, n, seed);
}

// F Q on the right: Q(Phi) T_in^{-1}.
RealMatrix fq(const QuasiPovm& in, const QuasiPovm& out, const TransitionMatrix& t_in,
              const Channel& phi) {
  return represent_channel(in, out, phi).matrix() * t_in.inverse();
}

}  // namespace

FamilyMap complete_families(FamilyMap families, const std::vector<std::size_t>& dims,
                            std::uint64_t seed) {
  for (std::size_t d : dims) {
    if (!families.count(d)) families.emplace(d, random_minimal_ic(d, derive_seed(seed, d)));
  }
  return families;
}

LawReport check_functoriality(const FamilyMap& families, std::size_t n, std::size_t m,
                              std::size_t k, const SweepOptions& opt) {
  const QuasiPovm& fn = functorial_family_at(families, n);
  const QuasiPovm& fm = functorial_family_at(families, m);
  const QuasiPovm& fk = functorial_family_at(families, k);
  const TransitionMatrix tm(fm);

  std::vector<double> residuals;
  run_trials(opt.trials, opt.threads, [&](std::size_t i) {
    const Channel phi = trial_channel(n, m, derive_seed(opt.seed, i));
    const Channel psi = trial_channel(m, k, derive_seed(opt.seed, i + kSecondChannel));
    const QRep direct = represent_channel(fn, fk, compose_channels(psi, phi));
    const QRep star = star_compose(represent_channel(fm, fk, psi), represent_channel(fn, fm, phi), tm);
    return max_abs_diff(direct.matrix(), star.matrix());
  }, residuals);

  auto report = finish("functoriality", opt, std::move(residuals));
  report.notes["dims"] = std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(k);
  return report;
}

LawReport check_monoidal(const FamilyMap& families, const std::vector<std::size_t>& dims,
                         const SweepOptions& opt) {
  if (dims.size() != 2 && dims.size() != 3) {
    throw DimensionError("check_monoidal expects two or three dimensions");
  }
  const std::size_t n1 = dims[0], n2 = dims[1];
  const QuasiPovm& f1 = minimal_family_at(families, n1);
  const QuasiPovm& f2 = minimal_family_at(families, n2);
  const QuasiPovm& f12 = minimal_family_at(families, n1 * n2);
  const TransitionMatrix t1(f1), t2(f2), t12(f12);
  const RealMatrix s12 = tensor_coherence(f1, f2, f12).matrix;
  const RealMatrix inv1x2 = kron(t1.inverse(), t2.inverse());

  // Q(rho1 (x) rho2) = S (T1^{-1} (x) T2^{-1}) (Q(rho1) (x) Q(rho2))
  auto state_law = [](const QuasiPovm& a, const QuasiPovm& b, const QuasiPovm& ab,
                      const RealMatrix& s, const RealMatrix& inv, const State& ra,
                      const State& rb) {
    const RealMatrix lhs = represent_state(ab, tensor_states(ra, rb)).as_column();
    const RealMatrix rhs =
        s * inv * kron(represent_state(a, ra).as_column(), represent_state(b, rb).as_column());
    return max_abs_diff(lhs, rhs);
  };

  std::vector<double> residuals;
  LawReport report;
  if (dims.size() == 2) {
    std::vector<double> state_res(opt.trials), channel_res(opt.trials);
    run_trials(opt.trials, opt.threads, [&](std::size_t i) {
      const std::uint64_t s = derive_seed(opt.seed, i);
      const State r1 = random_state(n1, derive_seed(s, 0));
      const State r2 = random_state(n2, derive_seed(s, 1));
      state_res[i] = state_law(f1, f2, f12, s12, inv1x2, r1, r2);

      // S_m T_m12^{-1} (Q1 (x)' Q2) = Q(Phi1 (x) Phi2) T_n12^{-1} S_n with endomorphisms.
      const Channel phi1 = trial_channel(n1, n1, derive_seed(s, 2));
      const Channel phi2 = trial_channel(n2, n2, derive_seed(s, 3));
      const RealMatrix prime = tensor_prime(represent_channel(f1, f1, phi1).matrix(),
                                            represent_channel(f2, f2, phi2).matrix(), t1, t2, t12);
      const RealMatrix lhs = s12 * t12.inverse() * prime;
      const RealMatrix rhs =
          represent_channel(f12, f12, tensor_channels(phi1, phi2)).matrix() * t12.inverse() * s12;
      channel_res[i] = max_abs_diff(lhs, rhs);
      return std::max(state_res[i], channel_res[i]);
    }, residuals);
    report = finish("monoidal", opt, std::move(residuals));
    report.notes["state_law_max"] = fmt(*std::max_element(state_res.begin(), state_res.end()));
    report.notes["naturality_max"] =
        fmt(*std::max_element(channel_res.begin(), channel_res.end()));
  } else {
    const std::size_t n3 = dims[2];
    const QuasiPovm& f3 = minimal_family_at(families, n3);
    const QuasiPovm& f23 = minimal_family_at(families, n2 * n3);
    const QuasiPovm& f123 = minimal_family_at(families, n1 * n2 * n3);
    const TransitionMatrix t3(f3), t23(f23);
    const RealMatrix s23 = tensor_coherence(f2, f3, f23).matrix;
    const RealMatrix s12_3 = tensor_coherence(f12, f3, f123).matrix;
    const RealMatrix s1_23 = tensor_coherence(f1, f23, f123).matrix;

    // S_{12,3} (T12^{-1} S12 (x) I) = S_{1,23} (I (x) T23^{-1} S23)
    const RealMatrix lhs =
        s12_3 * kron(RealMatrix(t12.inverse() * s12), RealMatrix::identity(f3.size()));
    const RealMatrix rhs =
        s1_23 * kron(RealMatrix::identity(f1.size()), RealMatrix(t23.inverse() * s23));
    const double coherence = max_abs_diff(lhs, rhs);

    const RealMatrix inv12_3 = kron(t12.inverse(), t3.inverse());
    const RealMatrix inv1_23 = kron(t1.inverse(), t23.inverse());
    const RealMatrix inv2x3 = kron(t2.inverse(), t3.inverse());
    std::vector<double> state_res(opt.trials);
    run_trials(opt.trials, opt.threads, [&](std::size_t i) {
      const std::uint64_t s = derive_seed(opt.seed, i);
      const State r1 = random_state(n1, derive_seed(s, 0));
      const State r2 = random_state(n2, derive_seed(s, 1));
      const State r3 = random_state(n3, derive_seed(s, kThirdInput));
      const State r12 = tensor_states(r1, r2);
      const State r23 = tensor_states(r2, r3);
      state_res[i] = std::max({state_law(f1, f2, f12, s12, inv1x2, r1, r2),
                               state_law(f2, f3, f23, s23, inv2x3, r2, r3),
                               state_law(f12, f3, f123, s12_3, inv12_3, r12, r3),
                               state_law(f1, f23, f123, s1_23, inv1_23, r1, r23)});
      return std::max(state_res[i], coherence);
    }, residuals);
    report = finish("monoidal", opt, std::move(residuals));
    report.notes["coherence"] = fmt(coherence);
    report.notes["state_law_max"] = fmt(*std::max_element(state_res.begin(), state_res.end()));
  }
  std::string d;
  for (std::size_t x : dims) d += (d.empty() ? "" : ",") + std::to_string(x);
  report.notes["dims"] = d;
  return report;
}

LawReport check_naturality(const FamilyMap& family_a, const FamilyMap& family_b, std::size_t n,
                           std::size_t m, const SweepOptions& opt) {
  const QuasiPovm& an = minimal_family_at(family_a, n);
  const QuasiPovm& am = minimal_family_at(family_a, m);
  const QuasiPovm& bn = minimal_family_at(family_b, n);
  const QuasiPovm& bm = minimal_family_at(family_b, m);
  const TransitionMatrix tan(an), tbn(bn);
  const NaturalIso eta_n = natural_iso(an, bn);
  const NaturalIso eta_m = natural_iso(am, bm);

  std::vector<double> residuals;
  run_trials(opt.trials, opt.threads, [&](std::size_t i) {
    const Channel phi = trial_channel(n, m, derive_seed(opt.seed, i));
    const RealMatrix lhs = eta_m.eta * fq(an, am, tan, phi);
    const RealMatrix rhs = fq(bn, bm, tbn, phi) * eta_n.eta;
    return max_abs_diff(lhs, rhs);
  }, residuals);

  auto report = finish("naturality", opt, std::move(residuals));
  report.notes["dims"] = std::to_string(n) + "," + std::to_string(m);
  report.notes["eta_inverse_defect"] =
      fmt(max_abs_diff(RealMatrix(eta_n.eta * eta_n.inverse), RealMatrix::identity(an.size())));
  return report;
}

LawReport check_dagger(const QuasiPovm& family, const SweepOptions& opt) {
  if (!family.flags().minimal) throw ValidationError("check_dagger: family is not minimal");
  const TransitionMatrix t(family);
  const std::size_t d = family.dim();

  std::vector<double> residuals;
  run_trials(opt.trials, opt.threads, [&](std::size_t i) {
    const Channel phi = random_unital_channel(d, derive_seed(opt.seed, i));
    const RealMatrix forward = fq(family, family, t, phi);
    const RealMatrix backward = fq(family, family, t, adjoint_channel(phi));
    return max_abs_diff(backward, forward.transpose());
  }, residuals);

  auto report = finish("dagger", opt, std::move(residuals));
  report.notes["dim"] = std::to_string(d);
  if (const auto& sic = t.sic_form()) {
    report.notes["sic_form"] = "present";
    report.notes["alpha"] = fmt(sic->alpha);
    report.notes["beta"] = fmt(sic->beta);
  } else {
    report.notes["sic_form"] = "absent";
  }
  return report;
}

std::size_t orbit_span_rank(std::size_t dim, const std::vector<ComplexMatrix>& seeds,
                            std::size_t unitary_samples, std::uint64_t seed) {
  for (const auto& l : seeds) {
    if (l.rows() != dim || l.cols() != dim) {
      throw DimensionError("orbit_span_rank: seed matrix " + l.shape_string() +
                           " does not act on dimension " + std::to_string(dim));
    }
  }
  if (seeds.empty() || unitary_samples == 0) return 0;
  ComplexMatrix stacked(unitary_samples * seeds.size(), dim * dim);
  Rng rng(seed);
  std::size_t row = 0;
  for (std::size_t s = 0; s < unitary_samples; ++s) {
    const ComplexMatrix u = haar_unitary(dim, rng);
    const ComplexMatrix ud = u.adjoint();
    for (const auto& l : seeds) {
      const ComplexMatrix image = u * l * ud;
      std::copy(image.data().begin(), image.data().end(), stacked.data().begin() + row * dim * dim);
      ++row;
    }
  }
  return numerical_rank(stacked, tol::kOrbitRank);
}

std::string_view to_string(Dichotomy d) noexcept {
  switch (d) {
    case Dichotomy::kTrivial:
      return "trivial";
    case Dichotomy::kFaithful:
      return "faithful";
    case Dichotomy::kDiagnostic:
      return "diagnostic";
  }
  return "?";
}

DichotomyVerdict dichotomy_report(const QuasiPovm& family) {
  DichotomyVerdict v;
  const std::size_t d = family.dim();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const ComplexMatrix scalar = id * cplx(family.traces()[i] / static_cast<double>(d));
    v.trivial_deviation = std::max(v.trivial_deviation, max_abs_diff(family.effect(i), scalar));
  }
  v.gram_rank = numerical_rank(family.gram(), tol::kGramRank);
  if (v.trivial_deviation <= tol::kTrivialEffect) {
    v.verdict = Dichotomy::kTrivial;
    v.detail = "every effect is a multiple of the identity; all states share one image";
  } else if (family.flags().informationally_complete) {
    v.verdict = Dichotomy::kFaithful;
    v.detail = "effects span the Hermitian operators; distinct states have distinct images";
  } else {
    v.verdict = Dichotomy::kDiagnostic;
    v.detail = "violates dichotomy premises: effects span a " + std::to_string(v.gram_rank) +
               "-dimensional subspace of " + std::to_string(d * d) +
               ", so no functorial representation extends this family";
  }
  return v;
}

}  // namespace qstoch
