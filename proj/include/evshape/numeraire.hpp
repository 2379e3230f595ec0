#pragma once

#include <cstdint>
#include <vector>

#include "evshape/evalue.hpp"
#include "evshape/pmf.hpp"

namespace evshape {

// Least concave majorant of a CDF on Z>=0, anchored at (-1, 0). Segment k runs
// over (contacts[k], contacts[k+1]] with constant slope slopes[k].
struct LcmResult {
  std::vector<std::int64_t> contacts;
  std::vector<double> slopes;

  // f~(n); 0 outside (contacts.front(), contacts.back()].
  double slope_at(std::int64_t n) const;
  // F~(n), the majorant itself.
  double majorant_at(std::int64_t n) const;
  // f~ on [0, contacts.back()].
  std::vector<double> masses() const;
};

LcmResult lcm(const Pmf& q);
EvalFn numeraire_evalue(const Pmf& q);
Pmf ripr(const Pmf& q);
double max_epower(const Pmf& q);

}  // namespace evshape
