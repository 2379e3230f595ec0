#include "evshape/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "evshape/error.hpp"

namespace evshape::io {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key);
}

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Json counts_json(std::int64_t lo, const std::vector<std::uint64_t>& counts) {
  Json out = Json::object();
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] != 0) out[std::to_string(lo + static_cast<std::int64_t>(i))] = counts[i];
  return out;
}

std::map<std::int64_t, std::uint64_t> counts_from(const Json& j) {
  std::map<std::int64_t, std::uint64_t> out;
  if (!j.is_object()) bad("counts must be an object");
  for (const auto& [k, v] : j.items()) {
    try {
      out[std::stoll(k)] = v.get<std::uint64_t>();
    } catch (const std::exception&) {
      bad("bad counts entry '" + k + "'");
    }
  }
  return out;
}

// Sparse {"m": value} map to a dense vector; missing entries are 0.
std::vector<double> factors_from(const Json& j, std::vector<bool>* active) {
  std::vector<double> out;
  if (!j.is_object()) bad("factor map must be an object");
  for (const auto& [k, v] : j.items()) {
    long long m = 0;
    try {
      m = std::stoll(k);
    } catch (const std::exception&) {
      bad("bad factor index '" + k + "'");
    }
    if (m < 0) bad("negative factor index");
    const auto um = static_cast<std::size_t>(m);
    if (out.size() <= um) out.resize(um + 1, 0.0);
    out[um] = v.get<double>();
    if (active) {
      if (active->size() <= um) active->resize(um + 1, false);
      (*active)[um] = true;
    }
  }
  if (active) active->resize(out.size(), false);
  return out;
}

}  // namespace

Pmf pmf_from_json(const Json& j, bool is_sub) {
  return Pmf::make(field<std::int64_t>(j, "lo"), field<std::vector<double>>(j, "masses"),
                   field_or<bool>(j, "is_sub", is_sub));
}

Json to_json(const Pmf& p) {
  Json j;
  j["lo"] = p.lo();
  j["masses"] = p.masses();
  if (p.is_sub()) j["is_sub"] = true;
  return j;
}

Pmf parse_pmf_text(std::string_view text, bool is_sub) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      return pmf_from_json(Json::parse(body), is_sub);
    } catch (const nlohmann::json::exception& e) {
      bad(std::string("pmf json: ") + e.what());
    }
  }
  std::map<std::int64_t, double> pairs;
  std::istringstream in{std::string(body)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    std::istringstream ls{std::string(t)};
    long long idx = 0;
    double mass = 0.0;
    std::string extra;
    if (!(ls >> idx >> mass) || (ls >> extra))
      bad("pmf line " + std::to_string(lineno) + ": expected 'index mass'");
    if (pairs.count(idx)) bad("pmf line " + std::to_string(lineno) + ": duplicate index");
    pairs[idx] = mass;
  }
  if (pairs.empty()) bad("pmf text has no entries");
  const auto lo = pairs.begin()->first;
  std::vector<double> masses(static_cast<std::size_t>(pairs.rbegin()->first - lo + 1), 0.0);
  for (const auto& [k, v] : pairs) masses[static_cast<std::size_t>(k - lo)] = v;
  return Pmf::make(lo, std::move(masses), is_sub);
}

EvalFn evalfn_from_json(const Json& j) {
  EvalFn e;
  e.lo = field_or<std::int64_t>(j, "lo", 0);
  e.values = field_or<std::vector<double>>(j, "values", {});
  e.left_tail = field_or<double>(j, "left_tail", 1.0);
  e.right_tail = field_or<double>(j, "right_tail", 1.0);
  for (double v : e.values)
    if (!(v >= 0.0)) bad("e-value entries must be nonnegative");
  if (!(e.left_tail >= 0.0) || !(e.right_tail >= 0.0)) bad("tails must be nonnegative");
  return e;
}

Json to_json(const EvalFn& e) {
  Json j;
  j["lo"] = e.lo;
  j["values"] = e.values;
  j["left_tail"] = e.left_tail;
  j["right_tail"] = e.right_tail;
  return j;
}

StepDensity density_from_json(const Json& j) {
  StepDensity d;
  d.atom0 = field_or<double>(j, "atom0", 0.0);
  d.density.breakpoints = field<std::vector<double>>(j, "breakpoints");
  d.density.levels = field<std::vector<double>>(j, "levels");
  d.density.tail_level = field_or<double>(j, "tail_level", 0.0);
  d.validate();
  return d;
}

Json to_json(const StepDensity& d) {
  Json j;
  j["atom0"] = d.atom0;
  j["breakpoints"] = d.density.breakpoints;
  j["levels"] = d.density.levels;
  if (d.density.tail_level != 0.0) j["tail_level"] = d.density.tail_level;
  return j;
}

Json to_json(const StepFn& f) {
  Json j;
  j["breakpoints"] = f.breakpoints;
  j["levels"] = f.levels;
  j["value_at_0"] = f.value_at_0;
  j["tail_level"] = f.tail_level;
  return j;
}

Json to_json(const ModeInterval& m) {
  Json j;
  switch (m.kind) {
    case ModeInterval::Kind::Empty: j["kind"] = "empty"; break;
    case ModeInterval::Kind::AllIntegers: j["kind"] = "all"; break;
    case ModeInterval::Kind::Range:
      j["kind"] = "range";
      j["lo"] = m.lo;
      j["hi"] = m.hi;
      break;
  }
  return j;
}

Json to_json(const IntSet& s) {
  Json out = Json::array();
  for (const auto& r : s.runs()) {
    Json run = Json::array();
    run.push_back(r.lo == IntSet::kNegInf ? Json(nullptr) : Json(r.lo));
    run.push_back(r.hi == IntSet::kPosInf ? Json(nullptr) : Json(r.hi));
    out.push_back(run);
  }
  return out;
}

Json snapshot(const MonotoneTracker& t) {
  Json j;
  j["kind"] = "monotone";
  j["n"] = t.n();
  j["counts"] = counts_json(0, t.counts());
  Json f = Json::object();
  for (std::size_t m = 0; m < t.log_factors().size(); ++m)
    if (t.active()[m]) f[std::to_string(m)] = t.log_factors()[m];
  j["log_factors"] = f;
  return j;
}

MonotoneTracker monotone_from_snapshot(const Json& j) {
  if (field<std::string>(j, "kind") != "monotone") bad("not a monotone tracker snapshot");
  std::vector<bool> active;
  auto factors = factors_from(field<Json>(j, "log_factors"), &active);
  std::vector<std::uint64_t> counts;
  for (const auto& [k, v] : counts_from(field<Json>(j, "counts"))) {
    if (k < 0) bad("negative count index in monotone snapshot");
    if (counts.size() <= static_cast<std::size_t>(k) + 1) counts.resize(static_cast<std::size_t>(k) + 2, 0);
    counts[static_cast<std::size_t>(k)] = v;
  }
  return MonotoneTracker::restore(field<std::uint64_t>(j, "n"), std::move(counts),
                                  std::move(factors), std::move(active));
}

Json snapshot(const UnimodalTracker& t) {
  Json j;
  j["kind"] = "unimodal";
  j["theta"] = t.theta();
  j["n"] = t.n();
  j["counts"] = counts_json(t.counts().lo(), t.counts().raw());
  auto side = [](const std::vector<double>& v) {
    Json f = Json::object();
    for (std::size_t m = 0; m < v.size(); ++m) f[std::to_string(m)] = v[m];
    return f;
  };
  j["log_plus"] = side(t.log_plus());
  j["log_minus"] = side(t.log_minus());
  return j;
}

UnimodalTracker unimodal_from_snapshot(const Json& j) {
  if (field<std::string>(j, "kind") != "unimodal") bad("not a unimodal tracker snapshot");
  const auto counts = counts_from(field<Json>(j, "counts"));
  CountTable table;
  if (!counts.empty()) {
    const auto lo = counts.begin()->first;
    std::vector<std::uint64_t> dense(static_cast<std::size_t>(counts.rbegin()->first - lo + 1), 0);
    for (const auto& [k, v] : counts) dense[static_cast<std::size_t>(k - lo)] = v;
    table = CountTable::from(lo, std::move(dense));
  }
  return UnimodalTracker::restore(field<std::int64_t>(j, "theta"), field<std::uint64_t>(j, "n"),
                                  std::move(table), factors_from(field<Json>(j, "log_plus"), nullptr),
                                  factors_from(field<Json>(j, "log_minus"), nullptr));
}

std::optional<double> parse_stream_value(std::string_view line) {
  const auto t = trim(line);
  if (t.empty()) return std::nullopt;
  if (t.front() == '{') {
    Json j;
    try {
      j = Json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      bad(std::string("stream record: ") + e.what());
    }
    return field<double>(j, "x");
  }
  std::string s(t);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad("stream record is not a number: '" + s + "'");
  }
  if (used != s.size()) bad("trailing characters in stream record: '" + s + "'");
  return v;
}

std::optional<std::int64_t> parse_stream_int(std::string_view line) {
  const auto v = parse_stream_value(line);
  if (!v) return std::nullopt;
  if (!std::isfinite(*v) || std::floor(*v) != *v || std::abs(*v) > 9.0e15)
    bad("expected an integer observation, got " + std::string(trim(line)));
  return static_cast<std::int64_t>(*v);
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  return read_all(in);
}

}  // namespace evshape::io
