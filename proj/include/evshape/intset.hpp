#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace evshape {

// An integer interval: empty, a closed range, or all of Z.
struct ModeInterval {
  enum class Kind { Empty, Range, AllIntegers };

  Kind kind = Kind::Empty;
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static ModeInterval empty() { return {}; }
  static ModeInterval range(std::int64_t lo, std::int64_t hi);
  static ModeInterval all() { return {Kind::AllIntegers, 0, 0}; }

  bool is_empty() const { return kind == Kind::Empty; }
  bool is_range() const { return kind == Kind::Range; }
  bool is_all() const { return kind == Kind::AllIntegers; }
  bool contains(std::int64_t x) const;
  // Number of members; nullopt for AllIntegers.
  std::optional<std::uint64_t> size() const;

  friend bool operator==(const ModeInterval&, const ModeInterval&) = default;
};

ModeInterval intersect(const ModeInterval& a, const ModeInterval& b);
std::string to_string(const ModeInterval& m);

// A set of integers stored as sorted, disjoint, non-adjacent closed runs. The
// first run may start at kNegInf and the last may end at kPosInf, standing for
// unbounded ends.
class IntSet {
 public:
  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

  struct Run {
    std::int64_t lo;
    std::int64_t hi;
    friend bool operator==(const Run&, const Run&) = default;
  };

  IntSet() = default;
  static IntSet all();
  static IntSet from(const ModeInterval& m);
  static IntSet from_runs(std::vector<Run> runs);

  void add(std::int64_t lo, std::int64_t hi);
  void add(std::int64_t x) { add(x, x); }

  bool contains(std::int64_t x) const;
  bool empty() const { return runs_.empty(); }
  bool bounded_below() const { return empty() || runs_.front().lo != kNegInf; }
  bool bounded_above() const { return empty() || runs_.back().hi != kPosInf; }
  bool bounded() const { return bounded_below() && bounded_above(); }

  IntSet complement() const;
  IntSet intersect(const IntSet& other) const;
  IntSet intersect(const ModeInterval& m) const { return intersect(from(m)); }
  // Convex hull: AllIntegers when unbounded on either side, Empty when empty.
  ModeInterval hull() const;

  // Members in increasing order; the set must be bounded.
  std::vector<std::int64_t> elements() const;

  const std::vector<Run>& runs() const { return runs_; }

  friend bool operator==(const IntSet&, const IntSet&) = default;

 private:
  std::vector<Run> runs_;
};

std::string to_string(const IntSet& s);

}  // namespace evshape
