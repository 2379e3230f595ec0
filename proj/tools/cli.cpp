#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "evshape/continuous.hpp"
#include "evshape/eprocess.hpp"
#include "evshape/error.hpp"
#include "evshape/evalue.hpp"
#include "evshape/harness.hpp"
#include "evshape/io.hpp"
#include "evshape/mode_inference.hpp"
#include "evshape/numeraire.hpp"

namespace evshape::cli {
namespace {

using io::Json;

constexpr int kRan = 0;
constexpr int kError = 1;
constexpr int kRejected = 2;

// Inline JSON if the argument starts with '{' or '[', else a file path ("-" is stdin).
std::string load(const std::string& arg, std::istream& in) {
  if (arg.empty() || arg == "-") return io::read_all(in);
  if (arg.front() == '{' || arg.front() == '[') return arg;
  return io::read_file(arg);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Json interval_json(const RealInterval& r) {
  Json j;
  switch (r.kind) {
    case RealInterval::Kind::Empty: j["kind"] = "empty"; break;
    case RealInterval::Kind::AllReals: j["kind"] = "all"; break;
    case RealInterval::Kind::Singleton:
      j["kind"] = "singleton";
      j["lo"] = r.lo;
      j["hi"] = r.hi;
      break;
    case RealInterval::Kind::Open:
      j["kind"] = "open";
      j["lo"] = r.lo;
      j["hi"] = r.hi;
      break;
  }
  return j;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, "alpha must lie in (0, 1)");
}

// Feeds integer stream records to step(x) -> bool (true once rejected).
template <class Step>
bool drive(std::istream& in, Step&& step) {
  std::string line;
  while (std::getline(in, line)) {
    const auto x = io::parse_stream_int(line);
    if (!x) continue;
    if (step(*x)) return true;
  }
  return false;
}

struct Opts {
  double alpha = 0.05;
  std::optional<std::int64_t> theta;
  std::optional<std::int64_t> phi;
  bool finite = false;
  bool summary = false;
  std::optional<std::int64_t> x_int;
  double x = 0.0;
  double a = 0.0;
  std::string file;
  std::string config;
  std::optional<std::uint64_t> seed;
  bool csv = false;
  unsigned workers = 0;
};

int run_monotone(const Opts& o, std::istream& in, std::ostream& out) {
  check_alpha(o.alpha);
  const double thr = std::log(1.0 / o.alpha);
  MonotoneTracker t;
  const bool rejected = drive(in, [&](std::int64_t x) {
    t.update(x);
    const double v = t.mixture_value();
    const bool hit = v >= thr;
    if (!o.summary) out << Json{{"n", t.n()}, {"x", x}, {"log_e", v}, {"reject", hit}}.dump() << "\n";
    return hit;
  });
  out << Json{{"n", t.n()}, {"log_e", t.mixture_value()}, {"rejected", rejected}}.dump() << "\n";
  return rejected ? kRejected : kRan;
}

int run_unimodal(const Opts& o, std::istream& in, std::ostream& out) {
  check_alpha(o.alpha);
  const double thr = std::log(1.0 / o.alpha);
  UnimodalTracker t(*o.theta);
  const bool rejected = drive(in, [&](std::int64_t x) {
    t.update(x);
    const double v = t.value();
    const bool hit = v >= thr;
    if (!o.summary) out << Json{{"n", t.n()}, {"x", x}, {"log_e", v}, {"reject", hit}}.dump() << "\n";
    return hit;
  });
  out << Json{{"theta", t.theta()}, {"n", t.n()}, {"log_e", t.value()}, {"rejected", rejected}}.dump()
      << "\n";
  return rejected ? kRejected : kRan;
}

int run_free(const Opts& o, std::istream& in, std::ostream& out) {
  check_alpha(o.alpha);
  UnrestrictedModeTest test(o.alpha, *o.phi);
  const bool rejected = drive(in, [&](std::int64_t x) {
    const bool hit = test.step(x) == Decision::Reject;
    if (!o.summary)
      out << Json{{"n", test.n()},
                  {"x", x},
                  {"candidates", io::to_json(test.candidates())},
                  {"log_e", test.log_value()},
                  {"reject", hit}}
                 .dump()
          << "\n";
    return hit;
  });
  Json s{{"n", test.n()}, {"rejected", rejected}};
  if (test.n() > 0) s["candidates"] = io::to_json(test.candidates());
  out << s.dump() << "\n";
  return rejected ? kRejected : kRan;
}

int run_mode_ci(const Opts& o, std::istream& in, std::ostream& out) {
  check_alpha(o.alpha);
  std::optional<std::int64_t> x = o.x_int;
  if (!x) {
    std::string line;
    while (!x && std::getline(in, line)) x = io::parse_stream_int(line);
  }
  if (!x) throw Error(ErrorCode::EmptyObservations, "mode-ci needs one observation");
  const auto ci = o.finite ? one_obs_ci_finite(*x, o.alpha, o.phi.value_or(1))
                           : one_obs_ci(*x, o.alpha, o.phi.value_or(1));
  out << Json{{"x", *x}, {"ci", io::to_json(ci)}}.dump() << "\n";
  return kRan;
}

int run_mode_track(const Opts& o, std::istream& in, std::ostream& out) {
  check_alpha(o.alpha);
  UnimodalFamily fam;
  drive(in, [&](std::int64_t x) {
    fam.update(x);
    const auto cs = confidence_set(fam, o.alpha);
    const auto weak = cs.weak();
    out << Json{{"n", fam.n()},
                {"x", x},
                {"rejected", io::to_json(cs.rejected)},
                {"confidence_set", io::to_json(weak)},
                {"strong_hull", io::to_json(strong_hull(weak))},
                {"estimate", io::to_json(mode_estimate(fam))}}
               .dump()
        << "\n";
    return false;
  });
  return kRan;
}

int run_check_evalue(const Opts& o, std::istream& in, std::ostream& out) {
  auto j = parse_json(load(o.file, in));
  // A bare array is a table starting at 0.
  if (j.is_array()) j = Json{{"lo", 0}, {"values", j}};
  const auto e = io::evalfn_from_json(j);
  Json r{{"polar_M", is_in_polar_M(e)}, {"polar_D_0", is_in_polar_D(e, 0)}};
  if (o.theta) r["polar_D_" + std::to_string(*o.theta)] = is_in_polar_D(e, *o.theta);
  out << r.dump() << "\n";
  return kRan;
}

int run_numeraire(const Opts& o, std::istream& in, std::ostream& out) {
  const auto q = io::parse_pmf_text(load(o.file, in));
  const auto l = lcm(q);
  out << Json{{"pmf", io::to_json(q)},
              {"contacts", l.contacts},
              {"segment_slopes", l.slopes},
              {"slopes", l.masses()},
              {"numeraire", io::to_json(numeraire_evalue(q))},
              {"ripr", io::to_json(ripr(q))},
              {"epower", max_epower(q)}}
             .dump()
      << "\n";
  return kRan;
}

int run_cont_ci(const Opts& o, std::ostream& out) {
  check_alpha(o.alpha);
  const double phi = static_cast<double>(o.phi.value_or(0));
  out << Json{{"x", o.x},
              {"ci", interval_json(cont_mode_ci(o.x, o.alpha, phi))},
              {"edelman_ci", interval_json(edelman_ci(o.x, o.alpha, phi))}}
             .dump()
      << "\n";
  return kRan;
}

int run_cont_numeraire(const Opts& o, std::istream& in, std::ostream& out) {
  const auto q = io::density_from_json(parse_json(load(o.file, in)));
  const auto e = numeraire_cont(q);
  out << Json{{"lcm", io::to_json(lcm_cont(q))}, {"numeraire", io::to_json(e)}, {"epower", epower(e, q)}}
             .dump()
      << "\n";
  return kRan;
}

int run_simulate(const Opts& o, std::istream& in, std::ostream& out) {
  auto cfg = parse_config(parse_json(load(o.config, in)));
  if (o.seed) cfg.seed = *o.seed;
  const auto report = run_experiment(cfg, o.workers);
  out << (o.csv ? report.aggregate_csv() : report.dump());
  return kRan;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Shape-constrained e-values and e-processes", "evshape"};
  app.require_subcommand(1);
  Opts o;

  auto alpha = [&](CLI::App* s) { s->add_option("--alpha", o.alpha, "Level")->capture_default_str(); };
  auto summary = [&](CLI::App* s) { s->add_flag("--summary", o.summary, "Print only the final line"); };

  auto* mono = app.add_subcommand("test-monotone", "Sequential test of a non-increasing pmf on stdin");
  alpha(mono);
  summary(mono);

  auto* uni = app.add_subcommand("test-unimodal", "Sequential test of unimodality at a known mode");
  alpha(uni);
  summary(uni);
  uni->add_option("--theta", o.theta, "Hypothesized mode");
  uni->add_option("--phi", o.phi, "Without --theta: run the unknown-mode test with this offset");

  auto* fr = app.add_subcommand("test-unimodal-free", "Sequential test of unimodality, mode unknown");
  alpha(fr);
  summary(fr);
  fr->add_option("--phi", o.phi, "Nonzero offset for the first-observation interval")->required();

  auto* ci = app.add_subcommand("mode-ci", "Mode confidence interval from one observation");
  alpha(ci);
  ci->add_option("--phi", o.phi, "Nonzero offset (default 1)");
  ci->add_option("--x", o.x_int, "Observation (default: first stdin record)");
  ci->add_flag("--finite", o.finite, "Finite variant");

  auto* track = app.add_subcommand("mode-track", "Running mode confidence sets and estimate");
  alpha(track);

  auto* chk = app.add_subcommand("check-evalue", "Polar membership of an e-value table");
  chk->add_option("file", o.file, "JSON file, inline JSON or - for stdin");
  chk->add_option("--theta", o.theta, "Also check the unimodal polar at this mode");

  auto* num = app.add_subcommand("numeraire", "Log-optimal e-value against the monotone class");
  num->add_option("--pmf,file", o.file, "Pmf: JSON, 'index mass' lines, or inline JSON");

  auto* cci = app.add_subcommand("cont-ci", "Continuous mode confidence interval");
  alpha(cci);
  cci->add_option("--x", o.x, "Observation")->required();
  cci->add_option("--phi", o.phi, "Offset (default 0)");

  auto* cpv = app.add_subcommand("cont-pvalue", "Continuous monotone-density p-value");
  cpv->add_option("--x", o.x, "Observation")->required();
  cpv->add_option("--a", o.a, "Threshold")->required();

  auto* cnum = app.add_subcommand("cont-numeraire", "Numeraire for a step density");
  cnum->add_option("--density,file", o.file, "StepDensity JSON, inline or file");

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  sim->add_option("--config", o.config, "Config JSON file, inline JSON or -")->required();
  sim->add_option("--seed", o.seed, "Override the config seed");
  sim->add_flag("--csv", o.csv, "Print aggregates as CSV");
  sim->add_option("--workers", o.workers, "Worker threads (default: EVSHAPE_WORKERS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kRan : kError;
  }

  try {
    if (mono->parsed()) return run_monotone(o, in, out);
    if (uni->parsed()) {
      if (o.theta) return run_unimodal(o, in, out);
      if (o.phi) return run_free(o, in, out);
      err << "test-unimodal: needs --theta (or --phi for the unknown-mode test)\n";
      return kError;
    }
    if (fr->parsed()) return run_free(o, in, out);
    if (ci->parsed()) return run_mode_ci(o, in, out);
    if (track->parsed()) return run_mode_track(o, in, out);
    if (chk->parsed()) return run_check_evalue(o, in, out);
    if (num->parsed()) return run_numeraire(o, in, out);
    if (cci->parsed()) return run_cont_ci(o, out);
    if (cpv->parsed()) {
      out << Json{{"x", o.x}, {"a", o.a}, {"pvalue", edelman_pvalue(o.x, o.a)}}.dump() << "\n";
      return kRan;
    }
    if (cnum->parsed()) return run_cont_numeraire(o, in, out);
    if (sim->parsed()) return run_simulate(o, in, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

int cli_main(int argc, const char* const* argv) {
  return cli_main(argc, argv, std::cin, std::cout, std::cerr);
}

}  // namespace evshape::cli
