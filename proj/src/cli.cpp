#include "qstoch/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qstoch/errors.hpp"
#include "qstoch/io.hpp"
#include "qstoch/linalg.hpp"
#include "qstoch/povm.hpp"
#include "qstoch/quantum.hpp"
#include "qstoch/representation.hpp"
#include "qstoch/verify.hpp"

namespace qstoch::cli {

namespace {

using io::json;

// Thrown for well-formed flags with unusable values; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  // shared
  std::string output;
  bool as_json = false;
  std::uint64_t seed = 0;

  // catalog
  std::string kind;
  std::size_t dim = 2;
  std::optional<std::size_t> dim_out;
  std::optional<std::size_t> outcomes;
  std::optional<std::size_t> kraus;
  double param = 0.5;
  std::vector<double> weights;

  // object files
  std::string what;
  std::string povm, in_povm, out_povm, state, channel, measurement, qrep;
  std::string first, second, a, b;
  std::string frame = "star";

  // verify
  std::string law;
  std::vector<std::string> povms, povms_b;
  std::vector<std::size_t> dims;
  std::size_t trials = 50;
  std::optional<double> tolerance;
  unsigned threads = 1;
  std::size_t samples = 200;
  std::vector<double> eigenvalues;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed << v;
  return os.str();
}

std::string vector_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fixed(v[i]);
  return s + "]";
}

std::string matrix_text(const RealMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    s += "  " + vector_text(std::vector<double>(r.begin(), r.end())) + "\n";
  }
  return s;
}

QuasiPovm load_povm(const std::string& f) { return io::povm_from_json(io::read_file(f)); }
State load_state(const std::string& f) { return io::state_from_json(io::read_file(f)); }
Channel load_channel(const std::string& f) { return io::channel_from_json(io::read_file(f)); }
Measurement load_measurement(const std::string& f) {
  return io::measurement_from_json(io::read_file(f));
}
QRep load_qrep(const std::string& f) { return io::qrep_from_json(io::read_file(f)); }

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required flag ") + flag);
}

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  // Producers print JSON to stdout unless -o is given.
  void object(const json& j, const std::string& summary) {
    if (!opt_.output.empty()) {
      io::write_file(opt_.output, j);
      if (opt_.as_json) {
        out_ << io::dump(j);
      } else {
        out_ << summary << " -> " << opt_.output << "\n";
      }
    } else {
      out_ << io::dump(j);
    }
  }

  // Reports print text unless --json is given; -o always receives JSON.
  void report(const json& j, const std::string& text) {
    if (!opt_.output.empty()) io::write_file(opt_.output, j);
    if (opt_.as_json) {
      out_ << io::dump(j);
    } else {
      out_ << text;
    }
  }

 private:
  const Options& opt_;
  std::ostream& out_;
};

std::string povm_summary(const QuasiPovm& p) {
  const auto& f = p.flags();
  std::string s = p.id() + " (dim " + std::to_string(p.dim()) + ", " + std::to_string(p.size()) +
                  " effects";
  if (f.positive) s += ", positive";
  if (f.minimal) s += ", minimal";
  else if (f.informationally_complete) s += ", IC";
  if (f.generalized_sic) s += ", generalized SIC";
  return s + ")";
}

QRep apply_frame(const QRep& r, const std::string& frame, const QuasiPovm& in,
                 const QuasiPovm& out) {
  if (frame == "star") return r;
  if (frame == "right") return to_qstoch(r, TransitionMatrix(in), Side::kRight);
  return to_qstoch(r, TransitionMatrix(out), Side::kLeft);
}

// catalog ----------------------------------------------------------------------

int cmd_catalog(const Options& o, Emitter& em) {
  const std::size_t d = o.dim;
  const std::size_t dout = o.dim_out.value_or(d);
  const std::string& k = o.kind;

  auto emit_povm = [&](const QuasiPovm& p) {
    em.object(io::to_json(p), povm_summary(p));
    return kOk;
  };
  auto emit_state = [&](const State& s) {
    em.object(io::to_json(s), "state (dim " + std::to_string(s.dim()) + ")");
    return kOk;
  };
  auto emit_channel = [&](const Channel& c) {
    em.object(io::to_json(c), "channel " + std::to_string(c.dim_in()) + " -> " +
                                  std::to_string(c.dim_out()) + " (" +
                                  std::to_string(c.kraus().size()) + " Kraus operators)");
    return kOk;
  };
  auto emit_measurement = [&](const Measurement& m) {
    em.object(io::to_json(m), "measurement (dim " + std::to_string(m.dim()) + ", " +
                                  std::to_string(m.outcomes()) + " outcomes)");
    return kOk;
  };

  if (k == "sic") {
    if (d == 2) return emit_povm(tetrahedron_povm());
    if (d == 3) return emit_povm(wh_sic(3, shipped_fiducial(3)));
    throw UsageError("sic: fiducials are shipped for dim 2 and 3 only");
  }
  if (k == "tetrahedron") return emit_povm(tetrahedron_povm());
  if (k == "random-ic") return emit_povm(random_minimal_ic(d, o.seed));
  if (k == "hermitian-basis") return emit_povm(hermitian_basis_quasi_povm(d));
  if (k == "classical") return emit_povm(classical_povm(o.outcomes.value_or(d)));
  if (k == "trivial") {
    std::vector<double> w = o.weights;
    if (w.empty()) w.assign(d * d, 1.0 / static_cast<double>(d * d));
    return emit_povm(trivial_quasi_povm(d, w));
  }
  if (k == "state-random") return emit_state(random_state(d, o.seed));
  if (k == "state-mixed") return emit_state(State::maximally_mixed(d));
  if (k == "state-zero") {
    std::vector<cplx> v(d);
    v[0] = 1.0;
    return emit_state(State::pure(v));
  }
  if (k == "channel-identity") return emit_channel(Channel::identity(d));
  if (k == "channel-hadamard") {
    if (d != 2) throw UsageError("channel-hadamard needs --dim 2");
    const double r = 1.0 / std::sqrt(2.0);
    return emit_channel(Channel::unitary(ComplexMatrix{{r, r}, {r, -r}}));
  }
  if (k == "channel-random") return emit_channel(random_channel(d, dout, o.kraus.value_or(d), o.seed));
  if (k == "channel-unital") return emit_channel(random_unital_channel(d, o.seed));
  if (k == "channel-depolarizing") return emit_channel(Channel::depolarizing(d, o.param));
  if (k == "channel-amplitude-damping") return emit_channel(Channel::amplitude_damping(o.param));
  if (k == "measurement-computational") return emit_measurement(Measurement::computational(d));
  if (k == "measurement-random") {
    return emit_measurement(random_measurement(d, o.outcomes.value_or(d), o.seed));
  }
  throw UsageError("unknown catalog kind: " + k);
}

// represent / compose / tensor -------------------------------------------------------

std::string qrep_summary(const QRep& r) {
  return std::string(to_string(r.kind())) + " representation " + std::to_string(r.rows()) + "x" +
         std::to_string(r.cols()) + " (" + std::string(to_string(r.frame())) + " frame)";
}

int cmd_represent(const Options& o, Emitter& em) {
  if (o.what == "state") {
    require(o.povm, "--povm");
    require(o.state, "--state");
    const QuasiPovm p = load_povm(o.povm);
    const QRep r = represent_state_morphism(p, load_state(o.state));
    const QRep f = apply_frame(r, o.frame, unit_povm(), p);
    em.object(io::to_json(f), qrep_summary(f));
  } else if (o.what == "channel") {
    require(o.in_povm, "--in");
    require(o.channel, "--channel");
    const QuasiPovm in = load_povm(o.in_povm);
    const QuasiPovm out = o.out_povm.empty() ? in : load_povm(o.out_povm);
    const QRep r = represent_channel(in, out, load_channel(o.channel));
    const QRep f = apply_frame(r, o.frame, in, out);
    em.object(io::to_json(f), qrep_summary(f));
  } else {
    require(o.povm, "--povm");
    require(o.measurement, "--measurement");
    const QuasiPovm p = load_povm(o.povm);
    const Measurement m = load_measurement(o.measurement);
    const QRep r = represent_measurement(p, m);
    const QRep f = apply_frame(r, o.frame, p, classical_povm(m.outcomes()));
    em.object(io::to_json(f), qrep_summary(f));
  }
  return kOk;
}

int cmd_compose(const Options& o, Emitter& em) {
  require(o.first, "--first");
  require(o.second, "--second");
  const QRep r = load_qrep(o.first);
  const QRep s = load_qrep(o.second);
  QRep result = [&] {
    if (r.frame() != Frame::kStar || s.frame() != Frame::kStar) return qstoch_compose(s, r);
    require(o.povm, "--povm (family on the intermediate system)");
    return star_compose(s, r, TransitionMatrix(load_povm(o.povm)));
  }();
  em.object(io::to_json(result), qrep_summary(result));
  return kOk;
}

int cmd_tensor(const Options& o, Emitter& em) {
  require(o.a, "--a");
  require(o.b, "--b");
  if (o.what == "states") {
    const State s = tensor_states(load_state(o.a), load_state(o.b));
    em.object(io::to_json(s), "state (dim " + std::to_string(s.dim()) + ")");
  } else {
    const Channel c = tensor_channels(load_channel(o.a), load_channel(o.b));
    em.object(io::to_json(c), "channel " + std::to_string(c.dim_in()) + " -> " +
                                  std::to_string(c.dim_out()));
  }
  return kOk;
}

// measure / negativity ---------------------------------------------------------------

int cmd_measure(const Options& o, Emitter& em) {
  require(o.state, "--state");
  require(o.measurement, "--measurement");
  const State rho = load_state(o.state);
  const Measurement m = load_measurement(o.measurement);
  const auto direct = m.probabilities(rho);
  json j = {{"type", "probabilities"}, {"direct", direct}};
  std::string text = "direct   " + vector_text(direct) + "\n";
  if (!o.povm.empty()) {
    const QuasiPovm p = load_povm(o.povm);
    const QRep pipeline = star_compose(represent_measurement(p, m), represent_state_morphism(p, rho),
                                       TransitionMatrix(p));
    const auto col = pipeline.matrix().data();
    const std::vector<double> via(col.begin(), col.end());
    double dev = 0.0;
    for (std::size_t k = 0; k < via.size(); ++k) dev = std::max(dev, std::abs(via[k] - direct[k]));
    j["pipeline"] = via;
    j["max_deviation"] = dev;
    text += "pipeline " + vector_text(via) + "\nmax deviation " + sci(dev) + "\n";
  }
  em.report(j, text);
  return kOk;
}

int cmd_negativity(const Options& o, Emitter& em) {
  if (!o.qrep.empty()) {
    const QRep r = load_qrep(o.qrep);
    const double n = negativity(r.matrix());
    em.report({{"type", "negativity"}, {"source", "qrep"}, {"negativity", n}},
              "negativity " + fixed(n) + "\n");
    return kOk;
  }
  require(o.povm, "--povm");
  const QuasiPovm p = load_povm(o.povm);
  const TransitionMatrix t(p);
  const RealMatrix& inv = t.inverse();
  const double min_entry = *std::min_element(inv.data().begin(), inv.data().end());
  json j = {{"type", "negativity"},
            {"povm", p.id()},
            {"transition_inverse_negativity", negativity(inv)},
            {"transition_inverse_min_entry", min_entry},
            {"transition_inverse", io::to_json(inv)}};
  std::string text = povm_summary(p) + "\nT^-1 =\n" + matrix_text(inv) +
                     "negativity(T^-1) " + fixed(negativity(inv)) + "\nmin entry " +
                     fixed(min_entry) + "\n";
  if (!o.state.empty()) {
    const QuasiProbVector pv = represent_state(p, load_state(o.state));
    const auto alpha = expansion_coefficients(t, pv);
    j["probabilities"] = pv.entries();
    j["coefficients"] = alpha;
    j["coefficient_negativity"] = negativity(alpha);
    text += "p     " + vector_text(pv.entries()) + "\nalpha " + vector_text(alpha) +
            "\nnegativity(alpha) " + fixed(negativity(alpha)) + "\n";
  }
  em.report(j, text);
  return kOk;
}

// extract ----------------------------------------------------------------------------

int cmd_extract(const Options& o, Emitter& em) {
  std::size_t dim = 0, len = 0;
  StateMap map;
  if (!o.povm.empty()) {
    auto p = std::make_shared<QuasiPovm>(load_povm(o.povm));
    dim = p->dim();
    len = p->size();
    map = [p](const State& rho) { return represent_state(*p, rho).entries(); };
  } else {
    require(o.measurement, "--povm or --measurement");
    auto m = std::make_shared<Measurement>(load_measurement(o.measurement));
    len = m->outcomes();
    if (o.channel.empty()) {
      dim = m->dim();
      map = [m](const State& rho) { return m->probabilities(rho); };
    } else {
      auto c = std::make_shared<Channel>(load_channel(o.channel));
      if (c->dim_out() != m->dim()) throw DimensionError("channel output does not match measurement");
      dim = c->dim_in();
      map = [m, c](const State& rho) { return m->probabilities(apply_channel(*c, rho)); };
    }
  }
  const QuasiPovm p = extract_quasi_povm(dim, map, len, o.seed);
  em.object(io::to_json(p), povm_summary(p));
  return kOk;
}

// verify -----------------------------------------------------------------------------

constexpr std::uint64_t kFamilyBStream = 1ULL << 40;

FamilyMap load_families(const std::vector<std::string>& files) {
  FamilyMap m;
  for (const auto& f : files) {
    QuasiPovm p = load_povm(f);
    const std::size_t d = p.dim();
    if (!m.emplace(d, std::move(p)).second) {
      throw UsageError("two families supplied for dimension " + std::to_string(d));
    }
  }
  return m;
}

std::string report_text(const LawReport& r) {
  std::string s = "law " + r.law + ": " + (r.passed ? "PASS" : "FAIL") + "  max " +
                  sci(r.max_residual) + "  mean " + sci(r.mean_residual) + "  tol " +
                  sci(r.tolerance) + "  trials " + std::to_string(r.trials) + "  seed " +
                  std::to_string(r.seed) + "\n";
  for (const auto& [k, v] : r.notes) s += "  " + k + ": " + v + "\n";
  return s;
}

int cmd_verify(const Options& o, Emitter& em) {
  SweepOptions sweep;
  sweep.trials = o.trials;
  sweep.seed = o.seed;
  sweep.threads = o.threads;
  sweep.tolerance = o.tolerance.value_or(1e-9);

  auto dims_or = [&](std::vector<std::size_t> fallback, std::size_t expected) {
    auto d = o.dims.empty() ? std::move(fallback) : o.dims;
    if (expected && d.size() != expected) {
      throw UsageError("--dims needs " + std::to_string(expected) + " entries");
    }
    return d;
  };

  std::optional<LawReport> report;
  if (o.law == "functoriality") {
    const auto d = dims_or({2, 2, 2}, 3);
    const FamilyMap f = complete_families(load_families(o.povms), d, o.seed);
    report = check_functoriality(f, d[0], d[1], d[2], sweep);
  } else if (o.law == "monoidal") {
    const auto d = dims_or({2, 2}, 0);
    if (d.size() != 2 && d.size() != 3) throw UsageError("--dims needs 2 or 3 entries");
    std::vector<std::size_t> needed = d;
    needed.push_back(d[0] * d[1]);
    if (d.size() == 3) {
      needed.push_back(d[1] * d[2]);
      needed.push_back(d[0] * d[1] * d[2]);
      if (!o.tolerance) sweep.tolerance = 1e-8;
    }
    const FamilyMap f = complete_families(load_families(o.povms), needed, o.seed);
    report = check_monoidal(f, d, sweep);
  } else if (o.law == "naturality") {
    const auto d = dims_or({2, 2}, 2);
    const FamilyMap fa = complete_families(load_families(o.povms), d, o.seed);
    const FamilyMap fb =
        complete_families(load_families(o.povms_b), d, derive_seed(o.seed, kFamilyBStream));
    report = check_naturality(fa, fb, d[0], d[1], sweep);
  } else if (o.law == "dagger") {
    const QuasiPovm p = o.povm.empty() ? random_minimal_ic(o.dim, o.seed) : load_povm(o.povm);
    report = check_dagger(p, sweep);
  } else if (o.law == "orbit-rank") {
    std::vector<ComplexMatrix> seeds{ComplexMatrix::identity(o.dim)};
    if (!o.eigenvalues.empty()) {
      if (o.eigenvalues.size() != o.dim) throw UsageError("--eigenvalues needs --dim entries");
      std::vector<cplx> diag(o.eigenvalues.begin(), o.eigenvalues.end());
      seeds.push_back(ComplexMatrix::diagonal(diag));
    }
    const std::size_t rank = orbit_span_rank(o.dim, seeds, o.samples, o.seed);
    const bool full = rank == o.dim * o.dim;
    em.report({{"type", "orbit_rank"},
               {"dim", o.dim},
               {"samples", o.samples},
               {"seed", o.seed},
               {"rank", rank},
               {"full", full}},
              "orbit span rank " + std::to_string(rank) + " of " + std::to_string(o.dim * o.dim) +
                  (full ? " (spans M_n)\n" : "\n"));
    return full ? kOk : kLawFailed;
  } else {
    require(o.povm, "--povm");
    const DichotomyVerdict v = dichotomy_report(load_povm(o.povm));
    em.report(io::to_json(v), std::string(to_string(v.verdict)) + ": " + v.detail + "\n");
    return v.verdict == Dichotomy::kDiagnostic ? kLawFailed : kOk;
  }
  em.report(io::to_json(*report), report_text(*report));
  return report->passed ? kOk : kLawFailed;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("QSTOCH_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("QSTOCH_SEED is not an unsigned integer: ") + env);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Quasi-stochastic representations of quantum channels", "qstoch"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("-o,--output", o.output, "Write the JSON result to this file");
    s->add_flag("--json", o.as_json, "Print machine-readable JSON");
    s->add_option("--seed", o.seed, "Random seed (default: $QSTOCH_SEED or 0)");
  };

  auto* catalog = app.add_subcommand("catalog", "Generate POVMs, states, channels and measurements");
  common(catalog);
  catalog->add_option("--kind", o.kind, "sic | tetrahedron | random-ic | trivial | hermitian-basis | "
                                        "classical | state-random | state-mixed | state-zero | "
                                        "channel-identity | channel-hadamard | channel-random | "
                                        "channel-unital | channel-depolarizing | "
                                        "channel-amplitude-damping | measurement-computational | "
                                        "measurement-random")->required();
  catalog->add_option("--dim", o.dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
  catalog->add_option("--dim-out", o.dim_out, "Output dimension for random channels")
      ->check(CLI::PositiveNumber);
  catalog->add_option("--outcomes", o.outcomes, "Outcome count")->check(CLI::PositiveNumber);
  catalog->add_option("--kraus", o.kraus, "Kraus operator count")->check(CLI::PositiveNumber);
  catalog->add_option("--param", o.param, "Depolarizing lambda or damping gamma");
  catalog->add_option("--weights", o.weights, "Trivial family weights")->delimiter(',');

  auto* represent = app.add_subcommand("represent", "Quasi-stochastic image of a state, channel or measurement");
  common(represent);
  represent->add_option("what", o.what, "state | channel | measurement")
      ->required()
      ->check(CLI::IsMember({"state", "channel", "measurement"}));
  represent->add_option("--povm", o.povm, "Family (state, measurement)");
  represent->add_option("--in", o.in_povm, "Input family (channel)");
  represent->add_option("--out", o.out_povm, "Output family (channel; default: --in)");
  represent->add_option("--state", o.state, "State file");
  represent->add_option("--channel", o.channel, "Channel file");
  represent->add_option("--measurement", o.measurement, "Measurement file");
  represent->add_option("--frame", o.frame, "star | right | left")
      ->check(CLI::IsMember({"star", "right", "left"}));

  auto* compose = app.add_subcommand("compose", "Compose two representations (second after first)");
  common(compose);
  compose->add_option("--first", o.first, "Representation applied first");
  compose->add_option("--second", o.second, "Representation applied second");
  compose->add_option("--povm", o.povm, "Family on the intermediate system (star frame)");

  auto* tensor = app.add_subcommand("tensor", "Tensor product of two channels or two states");
  common(tensor);
  tensor->add_option("what", o.what, "channels | states")
      ->required()
      ->check(CLI::IsMember({"channels", "states"}));
  tensor->add_option("--a", o.a, "First factor");
  tensor->add_option("--b", o.b, "Second factor");

  auto* measure = app.add_subcommand("measure", "Born probabilities, directly and through the representation");
  common(measure);
  measure->add_option("--state", o.state, "State file");
  measure->add_option("--measurement", o.measurement, "Measurement file");
  measure->add_option("--povm", o.povm, "Family for the star-composed pipeline");

  auto* verify = app.add_subcommand("verify", "Randomized law checks");
  common(verify);
  verify->add_option("law", o.law, "functoriality | monoidal | naturality | dagger | orbit-rank | dichotomy")
      ->required()
      ->check(CLI::IsMember(
          {"functoriality", "monoidal", "naturality", "dagger", "orbit-rank", "dichotomy"}));
  verify->add_option("--povm", o.povms, "Family file; repeat for several dimensions");
  verify->add_option("--povm-b", o.povms_b, "Second family set (naturality)");
  verify->add_option("--dims", o.dims, "Dimensions, e.g. 2,3,2")->delimiter(',');
  verify->add_option("--trials", o.trials, "Trial count")->check(CLI::PositiveNumber);
  verify->add_option("--tol", o.tolerance, "Pass threshold on the max residual");
  verify->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  verify->add_option("--dim", o.dim, "Dimension (dagger without --povm, orbit-rank)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--samples", o.samples, "Haar unitaries (orbit-rank)");
  verify->add_option("--eigenvalues", o.eigenvalues, "Diagonal seed matrix (orbit-rank)")
      ->delimiter(',');

  auto* neg = app.add_subcommand("negativity", "Negativity of T^-1, expansion coefficients or a representation");
  common(neg);
  neg->add_option("--povm", o.povm, "Family file");
  neg->add_option("--state", o.state, "State whose expansion coefficients to report");
  neg->add_option("--qrep", o.qrep, "Representation file");

  auto* extract = app.add_subcommand("extract", "Recover the quasi-POVM behind an affine state map");
  common(extract);
  extract->add_option("--povm", o.povm, "Map rho -> tr(rho E_i) of this family");
  extract->add_option("--measurement", o.measurement, "Map rho -> Born probabilities");
  extract->add_option("--channel", o.channel, "Channel applied before the measurement");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // Verify reads --povm as a list; the single-file commands share that flag.
  if (verify->parsed() && o.law == "dagger" && o.povms.size() > 1) {
    err << "error: dagger takes one --povm\n";
    return kUsage;
  }
  if (verify->parsed() && !o.povms.empty() && (o.law == "dagger" || o.law == "dichotomy")) {
    o.povm = o.povms.front();
  }

  Emitter em(o, out);
  try {
    if (catalog->parsed()) return cmd_catalog(o, em);
    if (represent->parsed()) return cmd_represent(o, em);
    if (compose->parsed()) return cmd_compose(o, em);
    if (tensor->parsed()) return cmd_tensor(o, em);
    if (measure->parsed()) return cmd_measure(o, em);
    if (verify->parsed()) return cmd_verify(o, em);
    if (neg->parsed()) return cmd_negativity(o, em);
    return cmd_extract(o, em);
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace qstoch::cli
