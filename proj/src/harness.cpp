#include "evshape/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "evshape/eprocess.hpp"
#include "evshape/error.hpp"
#include "evshape/evalue.hpp"
#include "evshape/mode_inference.hpp"
#include "evshape/numeraire.hpp"

namespace evshape {
namespace {

using io::Json;

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + why);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error(key, e.what());
  }
}

// Runs f(rep) for every replication across worker threads; results keep
// replication order.
template <class Rec, class F>
std::vector<Rec> for_each_rep(std::uint64_t reps, unsigned workers, F&& f) {
  std::vector<Rec> out(reps);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= reps) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(reps);
        return;
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(reps)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < w; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::mt19937_64 rep_rng(const ScenarioConfig& c, std::uint64_t rep) {
  return std::mt19937_64(mix_seed(c.seed, rep));
}

double binomial_sd(double p, std::uint64_t reps) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

Json optional_u64(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

struct Type1Rec {
  std::optional<std::uint64_t> crossed_at;
  double max_log = 0.0;
  double final_log = 0.0;
};

RunReport run_type1(const ScenarioConfig& c, unsigned workers) {
  const Sampler draw(*c.distribution);
  const double thr = std::log(1.0 / c.alpha);
  auto recs = for_each_rep<Type1Rec>(c.reps, workers, [&](std::uint64_t rep) {
    auto rng = rep_rng(c, rep);
    Type1Rec r;
    MonotoneTracker mono;
    UnimodalTracker uni(c.theta.value_or(0));
    for (std::uint64_t k = 1; k <= c.n; ++k) {
      const auto x = draw(rng);
      double v;
      if (c.theta) {
        uni.update(x);
        v = uni.value();
      } else {
        mono.update(x);
        v = mono.mixture_value();
      }
      r.max_log = std::max(r.max_log, v);
      r.final_log = v;
      if (v >= thr) {
        r.crossed_at = k;
        break;
      }
    }
    return r;
  });
  RunReport rep;
  Json records = Json::array();
  std::uint64_t crossed = 0;
  for (const auto& r : recs) {
    crossed += r.crossed_at.has_value();
    records.push_back({{"crossed_at", optional_u64(r.crossed_at)},
                       {"max_log_value", r.max_log},
                       {"final_log_value", r.final_log}});
  }
  const double rate = static_cast<double>(crossed) / static_cast<double>(c.reps);
  const double nominal_sd = binomial_sd(c.alpha, c.reps);
  const double limit = c.alpha + 3.0 * nominal_sd;
  rep.pass = rate <= limit;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"threshold", 1.0 / c.alpha},
                          {"crossings", crossed},
                          {"crossing_rate", rate},
                          {"se", binomial_sd(rate, c.reps)},
                          {"nominal_sd", nominal_sd},
                          {"limit", limit}};
  return rep;
}

RunReport run_growth(const ScenarioConfig& c, unsigned workers) {
  const auto& q = *c.distribution;
  const Sampler draw(q);
  auto rates = for_each_rep<double>(c.reps, workers, [&](std::uint64_t rep) {
    auto rng = rep_rng(c, rep);
    MonotoneTracker t;
    for (std::uint64_t k = 0; k < c.n; ++k) t.update(draw(rng));
    return t.mixture_value() / static_cast<double>(c.n);
  });
  double floor = 0.0, asymptote = 0.0;
  for (std::int64_t m = std::max<std::int64_t>(0, q.lo() - 1); m < q.hi(); ++m) {
    if (!(q.at(m + 1) > q.at(m))) continue;
    floor = std::max(floor, epower_lower_bound(q, m));
    asymptote = std::max(asymptote, epower(wavelet_evalue(q, m), q));
  }
  RunReport rep;
  Json records = Json::array();
  bool ok = true;
  double lo = rates.empty() ? 0.0 : rates.front(), hi = lo, sum = 0.0;
  for (double r : rates) {
    records.push_back({{"log_growth_per_step", r}});
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
    if (c.band_lo && r < *c.band_lo) ok = false;
    if (c.band_hi && r > *c.band_hi) ok = false;
    if (r <= floor) ok = false;
  }
  rep.pass = ok;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"min_rate", lo},
                          {"max_rate", hi},
                          {"mean_rate", sum / static_cast<double>(rates.size())},
                          {"wavelet_asymptote", asymptote},
                          {"certified_floor", floor}};
  return rep;
}

RunReport run_ci_coverage(const ScenarioConfig& c) {
  const auto& p = *c.distribution;
  const auto modes = mode_set(p);
  if (!modes.is_range()) config_error("distribution", "must be unimodal with a finite mode set");
  RunReport rep;
  Json records = Json::array();
  for (std::int64_t t = modes.lo; t <= modes.hi; ++t) {
    double hit = 0.0;
    for (std::int64_t x = p.lo(); x <= p.hi(); ++x)
      if (one_obs_ci(x, c.alpha, c.phi).contains(t)) hit += p.at(x);
    records.push_back({{"theta", t}, {"coverage", hit}});
  }
  const auto cov = one_obs_coverage(p, c.alpha, c.phi);
  rep.pass = cov.weak >= 1.0 - c.alpha - 1e-12;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"weak_coverage", cov.weak},
                          {"strong_coverage", cov.strong},
                          {"nominal", 1.0 - c.alpha}};
  return rep;
}

struct SettleRec {
  IntSet final_estimate;
  std::uint64_t last_change = 0;
  bool settled = false;
};

RunReport run_settlement(const ScenarioConfig& c, unsigned workers) {
  const auto& p = *c.distribution;
  const Sampler draw(p);
  const auto clip = ModeInterval::range(c.clip_lo, c.clip_hi);
  const auto target = IntSet::from(mode_set(p)).intersect(clip);
  auto recs = for_each_rep<SettleRec>(c.reps, workers, [&](std::uint64_t rep) {
    auto rng = rep_rng(c, rep);
    UnimodalFamily fam;
    SettleRec r;
    IntSet prev = IntSet::from(clip);
    for (std::uint64_t k = 1; k <= c.n; ++k) {
      fam.update(draw(rng));
      auto est = mode_estimate(fam).intersect(clip);
      if (!(est == prev)) r.last_change = k;
      prev = std::move(est);
    }
    r.final_estimate = prev;
    r.settled = prev == target && c.n - r.last_change >= c.settle_window;
    return r;
  });
  RunReport rep;
  Json records = Json::array();
  std::uint64_t settled = 0;
  for (const auto& r : recs) {
    settled += r.settled;
    records.push_back({{"final_estimate", io::to_json(r.final_estimate)},
                       {"last_change", r.last_change},
                       {"settled", r.settled}});
  }
  rep.pass = settled == c.reps;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"target", io::to_json(target)},
                          {"settled", settled},
                          {"settled_fraction", static_cast<double>(settled) / static_cast<double>(c.reps)}};
  return rep;
}

RunReport run_unrestricted(const ScenarioConfig& c, unsigned workers) {
  const auto& p = *c.distribution;
  const Sampler draw(p);
  const bool is_null = !mode_set(p).is_empty();
  auto recs = for_each_rep<std::optional<std::uint64_t>>(c.reps, workers, [&](std::uint64_t rep) {
    auto rng = rep_rng(c, rep);
    UnrestrictedModeTest test(c.alpha, c.phi);
    for (std::uint64_t k = 0; k < c.n; ++k)
      if (test.step(draw(rng)) == Decision::Reject) return test.rejected_at();
    return std::optional<std::uint64_t>{};
  });
  RunReport rep;
  Json records = Json::array();
  std::uint64_t rejected = 0;
  std::uint64_t slowest = 0;
  for (const auto& r : recs) {
    rejected += r.has_value();
    if (r) slowest = std::max(slowest, *r);
    records.push_back({{"rejected_at", optional_u64(r)}});
  }
  const double rate = static_cast<double>(rejected) / static_cast<double>(c.reps);
  const double nominal_sd = binomial_sd(c.alpha, c.reps);
  const double limit = c.alpha + 3.0 * nominal_sd;
  rep.pass = is_null ? rate <= limit : rejected == c.reps;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"null_is_true", is_null},
                          {"rejections", rejected},
                          {"rejection_rate", rate},
                          {"se", binomial_sd(rate, c.reps)},
                          {"nominal_sd", nominal_sd},
                          {"limit", limit},
                          {"slowest_rejection", slowest}};
  return rep;
}

struct CompareRec {
  std::vector<double> q;
  double log_numeraire = 0.0;
  double log_mixture = 0.0;
  double max_epower = 0.0;
};

RunReport run_numeraire_compare(const ScenarioConfig& c, unsigned workers) {
  auto recs = for_each_rep<CompareRec>(c.reps, workers, [&](std::uint64_t rep) {
    auto rng = rep_rng(c, rep);
    Pmf q;
    do {
      std::vector<double> m(c.support);
      double s = 0.0;
      for (auto& v : m) s += v = 0.05 + u01(rng);
      for (auto& v : m) v /= s;
      q = Pmf::make(0, std::move(m), false);
    } while (is_monotone(q));
    const Sampler draw(q);
    std::vector<std::int64_t> obs(c.n);
    for (auto& x : obs) x = draw(rng);
    CompareRec r;
    r.q = q.masses();
    r.log_numeraire = numeraire_eprocess(q, obs);
    r.log_mixture = MonotoneTracker::replay(obs).mixture_value();
    r.max_epower = max_epower(q);
    return r;
  });
  RunReport rep;
  Json records = Json::array();
  double num = 0.0, mix = 0.0;
  for (const auto& r : recs) {
    num += r.log_numeraire;
    mix += r.log_mixture;
    records.push_back({{"q", r.q},
                       {"log_numeraire", r.log_numeraire},
                       {"log_mixture", r.log_mixture},
                       {"max_epower", r.max_epower}});
  }
  const double reps = static_cast<double>(c.reps);
  rep.pass = num >= mix;
  rep.doc["records"] = std::move(records);
  rep.doc["aggregate"] = {{"mean_log_numeraire", num / reps}, {"mean_log_mixture", mix / reps}};
  return rep;
}

}  // namespace

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Type1: return "type1";
    case Scenario::Growth: return "growth";
    case Scenario::CiCoverage: return "ci_coverage";
    case Scenario::ModeSettlement: return "mode_settlement";
    case Scenario::UnrestrictedPower: return "unrestricted_power";
    case Scenario::NumeraireCompare: return "numeraire_compare";
  }
  return "?";
}

ScenarioConfig parse_config(const Json& j) {
  if (!j.is_object()) config_error("<root>", "config must be a JSON object");
  static const char* known[] = {"scenario", "distribution", "n",        "reps",   "alpha",
                                "seed",     "theta",        "phi",      "clip",   "settle_window",
                                "band",     "support"};
  for (const auto& [k, v] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) ==
        std::end(known))
      config_error(k, "unknown field");

  ScenarioConfig c;
  if (!j.contains("scenario")) config_error("scenario", "missing");
  const auto name = get<std::string>(j, "scenario");
  bool found = false;
  for (auto s : {Scenario::Type1, Scenario::Growth, Scenario::CiCoverage, Scenario::ModeSettlement,
                 Scenario::UnrestrictedPower, Scenario::NumeraireCompare})
    if (scenario_name(s) == name) {
      c.scenario = s;
      found = true;
    }
  if (!found) config_error("scenario", "unknown scenario '" + name + "'");

  if (j.contains("distribution")) {
    try {
      c.distribution = io::pmf_from_json(j.at("distribution"));
    } catch (const Error& e) {
      config_error("distribution", e.what());
    }
  }
  if (j.contains("n")) c.n = get<std::uint64_t>(j, "n");
  if (j.contains("reps")) c.reps = get<std::uint64_t>(j, "reps");
  if (j.contains("alpha")) c.alpha = get<double>(j, "alpha");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("theta")) c.theta = get<std::int64_t>(j, "theta");
  if (j.contains("phi")) c.phi = get<std::int64_t>(j, "phi");
  if (j.contains("settle_window")) c.settle_window = get<std::uint64_t>(j, "settle_window");
  if (j.contains("support")) c.support = get<std::uint64_t>(j, "support");
  if (j.contains("clip")) {
    const auto v = get<std::vector<std::int64_t>>(j, "clip");
    if (v.size() != 2 || v[0] > v[1]) config_error("clip", "expected [lo, hi] with lo <= hi");
    c.clip_lo = v[0];
    c.clip_hi = v[1];
  }
  if (j.contains("band")) {
    const auto v = get<std::vector<double>>(j, "band");
    if (v.size() != 2 || v[0] > v[1]) config_error("band", "expected [lo, hi] with lo <= hi");
    c.band_lo = v[0];
    c.band_hi = v[1];
  }

  if (c.n < 1) config_error("n", "must be >= 1");
  if (c.reps < 1) config_error("reps", "must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) config_error("alpha", "must lie in (0, 1)");
  if (c.scenario != Scenario::NumeraireCompare && !c.distribution)
    config_error("distribution", "required for scenario " + name);
  if (c.distribution && c.distribution->is_sub())
    config_error("distribution", "must be a probability");
  const bool needs_nonneg = (c.scenario == Scenario::Type1 && !c.theta) ||
                            c.scenario == Scenario::Growth;
  if (needs_nonneg && c.distribution->lo() < 0)
    config_error("distribution", "must live on nonnegative integers for this scenario");
  if ((c.scenario == Scenario::UnrestrictedPower || c.scenario == Scenario::CiCoverage) && c.phi == 0)
    config_error("phi", "must be nonzero");
  if (c.scenario == Scenario::NumeraireCompare && c.support < 2)
    config_error("support", "must be >= 2");
  return c;
}

Json to_json(const ScenarioConfig& c) {
  Json j;
  j["scenario"] = scenario_name(c.scenario);
  if (c.distribution) j["distribution"] = io::to_json(*c.distribution);
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  if (c.theta) j["theta"] = *c.theta;
  j["phi"] = c.phi;
  j["clip"] = {c.clip_lo, c.clip_hi};
  j["settle_window"] = c.settle_window;
  if (c.band_lo) j["band"] = {*c.band_lo, *c.band_hi};
  j["support"] = c.support;
  return j;
}

std::string RunReport::aggregate_csv() const {
  std::ostringstream head, row;
  bool first = true;
  for (const auto& [k, v] : doc.at("aggregate").items()) {
    if (!v.is_primitive()) continue;
    head << (first ? "" : ",") << k;
    row << (first ? "" : ",") << v.dump();
    first = false;
  }
  head << ",pass";
  row << "," << (pass ? "true" : "false");
  return head.str() + "\n" + row.str() + "\n";
}

unsigned default_workers() {
  if (const char* env = std::getenv("EVSHAPE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunReport run_experiment(const ScenarioConfig& c, unsigned workers) {
  if (workers == 0) workers = default_workers();
  RunReport body;
  switch (c.scenario) {
    case Scenario::Type1: body = run_type1(c, workers); break;
    case Scenario::Growth: body = run_growth(c, workers); break;
    case Scenario::CiCoverage: body = run_ci_coverage(c); break;
    case Scenario::ModeSettlement: body = run_settlement(c, workers); break;
    case Scenario::UnrestrictedPower: body = run_unrestricted(c, workers); break;
    case Scenario::NumeraireCompare: body = run_numeraire_compare(c, workers); break;
  }
  RunReport out;
  out.pass = body.pass;
  out.doc["version"] = EVSHAPE_VERSION;
  out.doc["scenario"] = scenario_name(c.scenario);
  out.doc["seed"] = c.seed;
  out.doc["config"] = to_json(c);
  out.doc["aggregate"] = std::move(body.doc["aggregate"]);
  out.doc["pass"] = body.pass;
  out.doc["records"] = std::move(body.doc["records"]);
  return out;
}

}  // namespace evshape
