#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "json.hpp"

#include "evshape/continuous.hpp"
#include "evshape/eprocess.hpp"
#include "evshape/evalue.hpp"
#include "evshape/intset.hpp"
#include "evshape/pmf.hpp"

namespace evshape::io {

using Json = nlohmann::ordered_json;

// {"lo": int, "masses": [..]}
Pmf pmf_from_json(const Json& j, bool is_sub = false);
Json to_json(const Pmf& p);
// Either the JSON form or one "index mass" pair per line; '#' starts a comment.
Pmf parse_pmf_text(std::string_view text, bool is_sub = false);

// {"lo": int, "values": [..], "left_tail": x, "right_tail": y}
EvalFn evalfn_from_json(const Json& j);
Json to_json(const EvalFn& e);

// {"atom0": x, "breakpoints": [..], "levels": [..]}; "tail_level" optional.
StepDensity density_from_json(const Json& j);
Json to_json(const StepDensity& d);
Json to_json(const StepFn& f);

Json to_json(const ModeInterval& m);
// List of [lo, hi] pairs, null for an unbounded end.
Json to_json(const IntSet& s);

Json snapshot(const MonotoneTracker& t);
MonotoneTracker monotone_from_snapshot(const Json& j);
Json snapshot(const UnimodalTracker& t);
UnimodalTracker unimodal_from_snapshot(const Json& j);

// One stream record: a bare number or {"x": v}. Blank lines give nullopt.
std::optional<double> parse_stream_value(std::string_view line);
// Same, but the value must be an integer.
std::optional<std::int64_t> parse_stream_int(std::string_view line);

std::string read_all(std::istream& in);
std::string read_file(const std::string& path);

}  // namespace evshape::io
