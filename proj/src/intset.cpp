#include "evshape/intset.hpp"

#include <algorithm>

#include "evshape/error.hpp"

namespace evshape {

ModeInterval ModeInterval::range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error(ErrorCode::BadInterval, "range lo > hi");
  return {Kind::Range, lo, hi};
}

bool ModeInterval::contains(std::int64_t x) const {
  switch (kind) {
    case Kind::Empty: return false;
    case Kind::Range: return lo <= x && x <= hi;
    case Kind::AllIntegers: return true;
  }
  return false;
}

std::optional<std::uint64_t> ModeInterval::size() const {
  switch (kind) {
    case Kind::Empty: return 0;
    case Kind::Range: return static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    case Kind::AllIntegers: return std::nullopt;
  }
  return 0;
}

ModeInterval intersect(const ModeInterval& a, const ModeInterval& b) {
  if (a.is_empty() || b.is_empty()) return ModeInterval::empty();
  if (a.is_all()) return b;
  if (b.is_all()) return a;
  const auto lo = std::max(a.lo, b.lo);
  const auto hi = std::min(a.hi, b.hi);
  if (lo > hi) return ModeInterval::empty();
  return ModeInterval::range(lo, hi);
}

std::string to_string(const ModeInterval& m) {
  switch (m.kind) {
    case ModeInterval::Kind::Empty: return "{}";
    case ModeInterval::Kind::AllIntegers: return "Z";
    case ModeInterval::Kind::Range:
      return "[" + std::to_string(m.lo) + ", " + std::to_string(m.hi) + "]";
  }
  return "?";
}

IntSet IntSet::all() {
  IntSet s;
  s.runs_.push_back({kNegInf, kPosInf});
  return s;
}

IntSet IntSet::from(const ModeInterval& m) {
  if (m.is_empty()) return {};
  if (m.is_all()) return all();
  IntSet s;
  s.runs_.push_back({m.lo, m.hi});
  return s;
}

IntSet IntSet::from_runs(std::vector<Run> runs) {
  IntSet s;
  for (const auto& r : runs) s.add(r.lo, r.hi);
  return s;
}

void IntSet::add(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) return;
  // Runs touching or overlapping [lo, hi] get absorbed.
  auto touches = [&](const Run& r) {
    const bool left_of = r.hi != kPosInf && r.hi + 1 < lo;
    const bool right_of = hi != kPosInf && hi + 1 < r.lo;
    return !left_of && !right_of;
  };
  std::vector<Run> out;
  out.reserve(runs_.size() + 1);
  Run merged{lo, hi};
  bool placed = false;
  for (const auto& r : runs_) {
    if (touches(r)) {
      merged.lo = std::min(merged.lo, r.lo);
      merged.hi = std::max(merged.hi, r.hi);
    } else if (r.lo > merged.hi) {
      if (!placed) {
        out.push_back(merged);
        placed = true;
      }
      out.push_back(r);
    } else {
      out.push_back(r);
    }
  }
  if (!placed) out.push_back(merged);
  runs_ = std::move(out);
}

bool IntSet::contains(std::int64_t x) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), x,
                             [](std::int64_t v, const Run& r) { return v < r.lo; });
  if (it == runs_.begin()) return false;
  --it;
  return x <= it->hi;
}

IntSet IntSet::complement() const {
  IntSet out;
  std::int64_t next = kNegInf;
  bool open = true;
  for (const auto& r : runs_) {
    if (r.lo != kNegInf && open && next <= r.lo - 1) out.runs_.push_back({next, r.lo - 1});
    if (r.hi == kPosInf) {
      open = false;
      break;
    }
    next = r.hi + 1;
  }
  if (open) out.runs_.push_back({next, kPosInf});
  return out;
}

IntSet IntSet::intersect(const IntSet& other) const {
  IntSet out;
  std::size_t i = 0, j = 0;
  while (i < runs_.size() && j < other.runs_.size()) {
    const auto& a = runs_[i];
    const auto& b = other.runs_[j];
    const auto lo = std::max(a.lo, b.lo);
    const auto hi = std::min(a.hi, b.hi);
    if (lo <= hi) out.runs_.push_back({lo, hi});
    if (a.hi < b.hi) ++i;
    else ++j;
  }
  return out;
}

ModeInterval IntSet::hull() const {
  if (empty()) return ModeInterval::empty();
  if (!bounded()) return ModeInterval::all();
  return ModeInterval::range(runs_.front().lo, runs_.back().hi);
}

std::vector<std::int64_t> IntSet::elements() const {
  if (!bounded()) throw Error(ErrorCode::InfiniteRange, "elements() of an unbounded set");
  std::vector<std::int64_t> out;
  for (const auto& r : runs_)
    for (auto x = r.lo; x <= r.hi; ++x) out.push_back(x);
  return out;
}

std::string to_string(const IntSet& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const auto& r : s.runs()) {
    if (!out.empty()) out += " u ";
    out += "[";
    out += r.lo == IntSet::kNegInf ? std::string("-inf") : std::to_string(r.lo);
    out += ", ";
    out += r.hi == IntSet::kPosInf ? std::string("+inf") : std::to_string(r.hi);
    out += "]";
  }
  return out;
}

}  // namespace evshape
