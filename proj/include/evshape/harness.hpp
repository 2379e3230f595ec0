#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "evshape/io.hpp"
#include "evshape/pmf.hpp"

namespace evshape {

enum class Scenario { Type1, Growth, CiCoverage, ModeSettlement, UnrestrictedPower, NumeraireCompare };

std::string_view scenario_name(Scenario s);

struct ScenarioConfig {
  Scenario scenario = Scenario::Type1;
  std::optional<Pmf> distribution;
  std::uint64_t n = 1;
  std::uint64_t reps = 1;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  // type1 with theta runs the theta-unimodal process instead of the monotone one.
  std::optional<std::int64_t> theta;
  std::int64_t phi = 1;
  std::int64_t clip_lo = -20;
  std::int64_t clip_hi = 20;
  // mode_settlement: the estimate must be constant over this many final steps.
  std::uint64_t settle_window = 1000;
  // growth: optional pass band for log M_n / n.
  std::optional<double> band_lo;
  std::optional<double> band_hi;
  // numeraire_compare: support size of the random alternatives.
  std::uint64_t support = 6;
};

// Throws ConfigError naming the offending field.
ScenarioConfig parse_config(const io::Json& j);
io::Json to_json(const ScenarioConfig& c);

struct RunReport {
  io::Json doc;
  bool pass = false;

  std::string dump() const { return doc.dump(2) + "\n"; }
  // Aggregates as two-line CSV (header, values).
  std::string aggregate_csv() const;
};

// Worker threads: EVSHAPE_WORKERS if set, else the hardware concurrency. The
// report does not depend on the worker count.
unsigned default_workers();

RunReport run_experiment(const ScenarioConfig& c, unsigned workers = 0);

}  // namespace evshape
