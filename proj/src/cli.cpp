#include "opobs/cli.hpp"

#include "opobs/io.hpp"
#include "opobs/optics.hpp"
#include "opobs/sampler.hpp"
#include "opobs/spin.hpp"
#include "opobs/verify.hpp"
#include "opobs/wigner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace opobs::cli {

namespace {
constexpr double kPi = std::numbers::pi;

struct Config {
  std::string out = "-";
  std::string format = "csv";
  std::string kind;
  int n = 1;
  int k = 1;
  int axis = 3;
  double s = 0.0;
  double phi = 0.0;
  int n_max = 32;
  int buffer = 16;
  std::string state;
  int n_theta = 72;
  int n_phi = 72;
  int n_intensity = 60;
  double i_max = 8.0;
  int preset = 1;
  std::string route = "kernel";
  std::string system = "spin";
  std::string moment = "phasor";
  std::vector<int> orders{1, 2};
  int count = 10000;
  std::uint64_t seed = 1;
  std::string moments_out = "-";
  double max_spin = 5.0;
  int trials = 100;
  std::vector<int> criteria;
  bool skip_invariants = false;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

std::string render(const io::CsvTable& t) {
  std::ostringstream s;
  io::write_csv(s, t);
  return s.str();
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const std::string& what) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput(what + ": bad number '" + item + "'");
    }
    if (used != item.size()) throw InvalidInput(what + ": bad number '" + item + "'");
    v.push_back(x);
  }
  if (v.size() != expected) {
    throw InvalidInput(what + ": expected " + std::to_string(expected) + " comma-separated values");
  }
  return v;
}

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

// basis:K (K = m + s), coherent:THETA,PHI, mixed
QuantumState spin_state(const std::string& spec, spin::SpinQuantumNumber s) {
  const auto [name, args] = split_spec(spec.empty() ? "basis:0" : spec);
  if (name == "basis") {
    const int k = static_cast<int>(parse_numbers(args, 1, "basis")[0]);
    if (k < 0 || k >= s.dim()) throw InvalidInput("basis index must lie in 0..2s");
    return QuantumState::basis(s.dim(), k);
  }
  if (name == "coherent") {
    const auto v = parse_numbers(args, 2, "coherent");
    return spin::coherent_state(s, spin::SolidAngle(v[0], v[1]));
  }
  if (name == "mixed") return QuantumState::maximally_mixed(s.dim());
  throw InvalidInput("unknown spin state '" + spec + "' (basis:K, coherent:THETA,PHI, mixed)");
}

// vacuum, fock:K, coherent:ABS,ARG, squeezed:ABS,ARG,S,PHI
QuantumState optical_state(const std::string& spec, const optics::FockSpace& space) {
  const auto [name, args] = split_spec(spec.empty() ? "vacuum" : spec);
  if (name == "vacuum") return QuantumState::basis(space.n_max(), 0);
  if (name == "fock") {
    const int k = static_cast<int>(parse_numbers(args, 1, "fock")[0]);
    if (k < 0 || k >= space.n_max()) throw InvalidInput("fock level must lie below n_max");
    return QuantumState::basis(space.n_max(), k);
  }
  if (name == "coherent") {
    const auto v = parse_numbers(args, 2, "coherent");
    return optics::squeezed_coherent_state(std::polar(v[0], v[1]), optics::SqueezeParams(), space)
        .state;
  }
  if (name == "squeezed") {
    const auto v = parse_numbers(args, 4, "squeezed");
    return optics::squeezed_coherent_state(std::polar(v[0], v[1]),
                                           optics::SqueezeParams(v[2], v[3]), space)
        .state;
  }
  throw InvalidInput("unknown optical state '" + spec +
                     "' (vacuum, fock:K, coherent:ABS,ARG, squeezed:ABS,ARG,S,PHI)");
}

io::Json optics_metadata(const Config& c) {
  return {{"s", c.s}, {"phi", c.phi}, {"n_max", c.n_max}, {"buffer", c.buffer}};
}

std::string matrix_output(const ComplexMatrix& m, io::Json meta, const std::string& format) {
  if (format == "json") return io::matrix_json(m, std::move(meta)).dump(1) + "\n";
  return render(io::matrix_table(m, std::move(meta)));
}

int cmd_spin_op(const Config& c, std::ostream& out, std::ostream& err) {
  const auto s = spin::SpinQuantumNumber::from_double(c.s);
  spin::OperationalSpinOperator oracle{spin::SpinKind::PolarPhasor, 0, 0, s, {},
                                       spin::Provenance::Quadrature};
  std::optional<spin::OperationalSpinOperator> closed;
  if (c.kind == "theta") {
    closed = spin::azimuthal_cosine_op(s, c.n);
    oracle = spin::quadrature_oracle(spin::SpinKind::AzimuthalCosine, s, c.n);
  } else if (c.kind == "phasor") {
    closed = spin::polar_phasor_op(s, c.n);
    oracle = spin::quadrature_oracle(spin::SpinKind::PolarPhasor, s, c.n);
  } else if (c.kind == "sigma") {
    oracle = spin::direction_op(s, c.axis, c.n);
    if (c.n <= 2) closed = spin::direction_closed_form(s, c.axis, c.n);
  } else {
    throw InvalidInput("spin-op --kind must be theta, phasor or sigma");
  }
  const auto& shown = closed ? *closed : oracle;
  io::Json meta = {{"kind", c.kind},
                   {"order", c.n},
                   {"axis", shown.axis},
                   {"s", s.value()},
                   {"provenance", spin::to_string(shown.provenance)}};
  double discrepancy = 0.0;
  if (closed) {
    discrepancy = frobenius_distance(closed->matrix, oracle.matrix);
    meta["oracle_discrepancy"] = discrepancy;
  }
  emit(matrix_output(shown.matrix, meta, c.format), c.out, out);
  if (discrepancy > 1e-9) {
    err << io::error_record("invariant", "closed form and quadrature oracle differ by " +
                                             io::format_double(discrepancy),
                            kInvariant)
               .dump()
        << "\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_spin_propensity(const Config& c, std::ostream& out) {
  const auto s = spin::SpinQuantumNumber::from_double(c.s);
  const auto state = spin_state(c.state, s);
  if (c.n_theta < 1 || c.n_phi < 1) throw InvalidInput("--ntheta and --nphi must be >= 1");
  const double total = spin::propensity_moment(
      state, s, [](const spin::SolidAngle&) { return 1.0; }, s.twice(), s.twice());
  io::CsvTable t;
  t.metadata = {{"s", s.value()}, {"state", c.state.empty() ? "basis:0" : c.state},
                {"normalization", total}};
  t.columns = {"theta", "phi", "pr"};
  for (int j = 0; j < c.n_theta; ++j) {
    const double theta = kPi * (j + 0.5) / c.n_theta;
    for (int k = 0; k < c.n_phi; ++k) {
      const double phi = 2.0 * kPi * k / c.n_phi;
      t.rows.push_back({theta, phi, spin::propensity(state, s, spin::SolidAngle(theta, phi))});
    }
  }
  if (c.format == "json") {
    io::Json j = t.metadata;
    j["schema"] = io::kSchemaVersion;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    emit(j.dump(1) + "\n", c.out, out);
  } else {
    emit(render(t), c.out, out);
  }
  return kOk;
}

int cmd_phasor(const Config& c, std::ostream& out) {
  const optics::FockSpace space(c.n_max, c.buffer);
  const auto e = optics::phasor_op(c.n, optics::SqueezeParams(c.s, c.phi), space);
  io::Json meta = optics_metadata(c);
  meta["kind"] = "phasor";
  meta["order"] = c.n;
  meta["radial_nodes"] = e.radial_nodes;
  meta["angular_nodes"] = e.angular_nodes;
  meta["r_max"] = e.r_max;
  meta["convergence_delta"] = e.convergence_delta;
  emit(matrix_output(e.matrix, meta, c.format), c.out, out);
  return kOk;
}

optics::TrigKind trig_kind(const std::string& kind) {
  if (kind == "cos" || kind == "cosine") return optics::TrigKind::Cosine;
  if (kind == "sin" || kind == "sine") return optics::TrigKind::Sine;
  throw InvalidInput("trig kind must be cos or sin");
}

int cmd_trig_op(const Config& c, std::ostream& out) {
  const optics::FockSpace space(c.n_max, c.buffer);
  const auto kind = trig_kind(c.kind);
  const ComplexMatrix m = optics::trig_op(kind, c.k, optics::SqueezeParams(c.s, c.phi), space);
  io::Json meta = optics_metadata(c);
  meta["kind"] = kind == optics::TrigKind::Cosine ? "cos" : "sin";
  meta["k"] = c.k;
  meta["hermiticity_deviation"] = hermiticity_check(m).max_deviation;
  emit(matrix_output(m, meta, c.format), c.out, out);
  return kOk;
}

int cmd_propensity(const Config& c, std::ostream& out) {
  const optics::FockSpace space(c.n_max, c.buffer);
  const auto state = optical_state(c.state, space);
  const auto table =
      optics::phase_propensity(state, optics::SqueezeParams(c.s, c.phi), space, c.n_phi);
  io::Json meta = optics_metadata(c);
  meta["state"] = c.state.empty() ? "vacuum" : c.state;
  const auto t = io::propensity_table(table, meta);
  if (c.format == "json") {
    io::Json j = t.metadata;
    j["phi"] = table.angles;
    j["pr"] = table.densities;
    emit(j.dump(1) + "\n", c.out, out);
  } else {
    emit(render(t), c.out, out);
  }
  if (std::abs(table.normalization - 1.0) > 1e-6) return kInvariant;
  return kOk;
}

optics::FourierCoefficients wigner_coefficients(const std::string& kind, int n) {
  if (kind == "C1") return optics::trig_coefficients(optics::TrigKind::Cosine, 1);
  if (kind == "C2") return optics::trig_coefficients(optics::TrigKind::Cosine, 2);
  if (kind == "S1") return optics::trig_coefficients(optics::TrigKind::Sine, 1);
  if (kind == "S2") return optics::trig_coefficients(optics::TrigKind::Sine, 2);
  if (kind == "E") {
    if (n == 0 || std::abs(n) > 8) throw InvalidInput("phasor order must satisfy 0 < |n| <= 8");
    return {{n, 1.0}};
  }
  throw InvalidInput("wigner --kind must be C1, C2, S1, S2 or E");
}

int cmd_wigner(Config c, const CLI::App& sub, std::ostream& out) {
  const auto preset = optics::wigner_preset(c.preset);
  if (sub.count("--s") == 0) c.s = preset.params.s();
  if (sub.count("--phi") == 0) c.phi = preset.params.phi();
  const optics::SqueezeParams params(c.s, c.phi);
  const auto coeffs = wigner_coefficients(c.kind, c.n);
  optics::PhaseGridSpec spec;
  spec.i_max = c.i_max;
  spec.n_intensity = c.n_intensity;
  spec.n_theta = c.n_theta;
  const bool hermitian = c.kind != "E";
  optics::PhaseGrid grid;
  if (c.route == "kernel") {
    grid = optics::operational_wigner(coeffs, params, spec, hermitian);
  } else if (c.route == "parity") {
    const optics::FockSpace space(c.n_max, c.buffer);
    const ComplexMatrix a = optics::periodic_function_op(coeffs, params, space, {}, hermitian);
    grid = optics::wigner_of_operator(a, space, spec);
  } else {
    throw InvalidInput("wigner --route must be kernel or parity");
  }
  io::Json meta = {{"kind", c.kind}, {"s", c.s}, {"phi", c.phi}, {"preset", c.preset}};
  if (c.kind == "E") meta["order"] = c.n;
  if (c.route == "parity") meta["buffer"] = c.buffer;
  const auto t = io::grid_table(grid, meta);
  if (c.format == "json") {
    io::Json j = t.metadata;
    j["I"] = grid.intensities;
    j["theta"] = grid.thetas;
    io::Json re = io::Json::array();
    io::Json im = io::Json::array();
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
      std::vector<double> rr, ii;
      for (Eigen::Index q = 0; q < grid.values.cols(); ++q) {
        rr.push_back(grid.values(r, q).real());
        ii.push_back(grid.values(r, q).imag());
      }
      re.push_back(rr);
      if (!grid.real_valued) im.push_back(ii);
    }
    j["re"] = re;
    if (!grid.real_valued) j["im"] = im;
    emit(j.dump() + "\n", c.out, out);
  } else {
    emit(render(t), c.out, out);
  }
  return kOk;
}

sampler::MomentKind moment_kind(const std::string& name) {
  if (name == "phasor") return sampler::MomentKind::Phasor;
  if (name == "cosine") return sampler::MomentKind::AzimuthalCosine;
  if (name == "direction") return sampler::MomentKind::Direction;
  throw InvalidInput("--moment must be phasor, cosine or direction");
}

int cmd_sample(const Config& c, std::ostream& out) {
  sampler::SampleBatch batch;
  io::Json meta;
  if (c.system == "spin") {
    const auto s = spin::SpinQuantumNumber::from_double(c.s);
    batch = sampler::sample_spin(spin_state(c.state, s), s, c.count, c.seed);
    meta = {{"system", "spin"}, {"s", s.value()}, {"state", c.state.empty() ? "basis:0" : c.state}};
  } else if (c.system == "phase") {
    const optics::FockSpace space(c.n_max, c.buffer);
    batch = sampler::sample_phase(optical_state(c.state, space), optics::SqueezeParams(c.s, c.phi),
                                  space, c.count, c.seed);
    meta = optics_metadata(c);
    meta["system"] = "phase";
    meta["state"] = c.state.empty() ? "vacuum" : c.state;
  } else {
    throw InvalidInput("--system must be spin or phase");
  }
  const auto estimates = sampler::empirical_moments(batch, c.orders, moment_kind(c.moment), c.axis);
  if (c.out != "-") io::write_file(c.out, render(io::batch_table(batch, meta)));
  meta["source"] = batch.source;
  emit(io::moments_json(estimates, meta).dump(1) + "\n", c.moments_out, out);
  return kOk;
}

int cmd_verify(const Config& c, std::ostream& out) {
  verify::VerifyOptions opt;
  opt.max_spin = c.max_spin;
  opt.trials = c.trials;
  opt.sample_count = c.count;
  opt.n_max = c.n_max;
  opt.seed = c.seed;
  std::vector<verify::CheckResult> results;
  if (c.criteria.empty()) {
    results = verify::run_acceptance(opt);
  } else {
    for (int id : c.criteria) results.push_back(verify::run_criterion(id, opt));
  }
  if (!c.skip_invariants) {
    for (auto& r : verify::run_invariants(opt)) results.push_back(std::move(r));
  }
  bool all = true;
  io::Json report = {{"schema", io::kSchemaVersion}, {"checks", io::Json::array()}};
  for (const auto& r : results) {
    all = all && r.passed;
    out << verify::format_line(r) << "\n";
    report["checks"].push_back({{"id", r.id},
                                {"name", r.name},
                                {"passed", r.passed},
                                {"deviation", r.deviation},
                                {"tolerance", r.tolerance},
                                {"seconds", r.seconds},
                                {"detail", r.detail}});
  }
  report["passed"] = all;
  if (c.format == "json" || c.out != "-") emit(report.dump(1) + "\n", c.out, out);
  return all ? kOk : kInvariant;
}

void add_output(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out, "output path, - for stdout");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_squeeze(CLI::App* sub, Config& c) {
  sub->add_option("--s", c.s, "squeeze amplitude s >= 0");
  sub->add_option("--phi", c.phi, "squeeze phase (radians)");
}

void add_fock(CLI::App* sub, Config& c) {
  sub->add_option("--nmax", c.n_max, "Fock truncation n_max");
  sub->add_option("--buffer", c.buffer, "extra Fock levels during exponentiation");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Operational spin and phase observables"};
  app.name("opobs");
  app.require_subcommand(1);

  auto* spin_op = app.add_subcommand("spin-op", "closed-form spin operator and its quadrature oracle");
  spin_op->add_option("--kind", c.kind, "theta, phasor or sigma")->required();
  spin_op->add_option("--n", c.n, "order");
  spin_op->add_option("--s", c.s, "spin quantum number")->required();
  spin_op->add_option("--axis", c.axis, "direction axis 1..3 (sigma)");
  add_output(spin_op, c);

  auto* spin_prop = app.add_subcommand("spin-propensity", "spin propensity on a (theta, phi) grid");
  spin_prop->add_option("--s", c.s, "spin quantum number")->required();
  spin_prop->add_option("--state", c.state, "basis:K | coherent:THETA,PHI | mixed");
  spin_prop->add_option("--ntheta", c.n_theta, "polar angle nodes");
  spin_prop->add_option("--nphi", c.n_phi, "azimuth nodes");
  add_output(spin_prop, c);

  auto* phasor = app.add_subcommand("phasor", "optical phasor operator E^(n)(s, phi)");
  phasor->add_option("--n", c.n, "order, 0 < |n| <= 8");
  add_squeeze(phasor, c);
  add_fock(phasor, c);
  add_output(phasor, c);

  auto* trig = app.add_subcommand("trig-op", "optical cosine or sine operator");
  trig->add_option("--kind", c.kind, "cos or sin")->required();
  trig->add_option("--k", c.k, "1 or 2");
  add_squeeze(trig, c);
  add_fock(trig, c);
  add_output(trig, c);

  auto* prop = app.add_subcommand("propensity", "optical phase propensity");
  prop->add_option("--state", c.state, "vacuum | fock:K | coherent:ABS,ARG | squeezed:ABS,ARG,S,PHI");
  prop->add_option("--nphi", c.n_phi, "phase nodes");
  add_squeeze(prop, c);
  add_fock(prop, c);
  add_output(prop, c);

  auto* wig = app.add_subcommand("wigner", "Wigner function of an operational operator on an (I, theta) grid");
  c.kind = "C2";
  wig->add_option("--kind", c.kind, "C1, C2, S1, S2 or E (phasor, with --n)");
  wig->add_option("--n", c.n, "phasor order for --kind E");
  wig->add_option("--preset", c.preset, "1: s=0.5, phi=pi/2; 2: s=1.5, phi=0")
      ->check(CLI::IsMember({1, 2}));
  add_squeeze(wig, c);
  wig->add_option("--Imax", c.i_max, "largest intensity");
  wig->add_option("--nI", c.n_intensity, "intensity nodes");
  wig->add_option("--ntheta", c.n_theta, "angle nodes");
  wig->add_option("--route", c.route, "kernel (exact) or parity (truncated matrix)");
  add_fock(wig, c);
  add_output(wig, c);

  auto* sample = app.add_subcommand("sample", "draw outcomes and estimate operational moments");
  sample->add_option("--system", c.system, "spin or phase");
  sample->add_option("--state", c.state, "state spec (see spin-propensity / propensity)");
  add_squeeze(sample, c);
  add_fock(sample, c);
  sample->add_option("--count", c.count, "number of outcomes");
  sample->add_option("--seed", c.seed, "64-bit seed");
  sample->add_option("--orders", c.orders, "moment orders")->delimiter(',');
  sample->add_option("--moment", c.moment, "phasor, cosine or direction");
  sample->add_option("--axis", c.axis, "direction axis 1..3");
  sample->add_option("--out", c.out, "batch CSV path");
  sample->add_option("--moments-out", c.moments_out, "moment JSON path, - for stdout");

  auto* ver = app.add_subcommand("verify", "run the acceptance criteria and invariants");
  ver->add_option("--max-spin", c.max_spin, "largest spin checked");
  ver->add_option("--trials", c.trials, "sampler trials");
  ver->add_option("--count", c.count, "outcomes per sampler trial");
  ver->add_option("--nmax", c.n_max, "Fock truncation for the plane checks");
  ver->add_option("--seed", c.seed, "base seed");
  ver->add_option("--criteria", c.criteria, "subset of criteria 1..10")->delimiter(',');
  ver->add_flag("--skip-invariants", c.skip_invariants, "acceptance criteria only");
  add_output(ver, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw InvalidInput(e.what());
    }
    if (ver->parsed()) {
      if (ver->count("--nmax") == 0) c.n_max = 48;
      if (ver->count("--count") == 0) c.count = 100000;
      if (ver->count("--seed") == 0) c.seed = verify::VerifyOptions{}.seed;
    }
    if (spin_op->parsed()) return cmd_spin_op(c, out, err);
    if (spin_prop->parsed()) return cmd_spin_propensity(c, out);
    if (phasor->parsed()) return cmd_phasor(c, out);
    if (trig->parsed()) return cmd_trig_op(c, out);
    if (prop->parsed()) return cmd_propensity(c, out);
    if (wig->parsed()) return cmd_wigner(c, *wig, out);
    if (sample->parsed()) return cmd_sample(c, out);
    if (ver->parsed()) return cmd_verify(c, out);
    throw InvalidInput("no subcommand");
  } catch (const InvalidInput& e) {
    err << io::error_record("invalid_input", e.what(), kValidation).dump() << "\n";
    return kValidation;
  } catch (const NonConvergence& e) {
    err << io::error_record("non_convergence", e.what(), kNumerical).dump() << "\n";
    return kNumerical;
  } catch (const TruncationError& e) {
    err << io::error_record("truncation", e.what(), kNumerical).dump() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << io::error_record("invalid_input", e.what(), kValidation).dump() << "\n";
    return kValidation;
  }
}

}  // namespace opobs::cli
