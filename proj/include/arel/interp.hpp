#pragma once

#include <map>

#include "arel/syntax.hpp"

namespace arel {

// Runtime array store. Locations are dense ids handed out by alloc.
struct Heap {
  std::map<long long, std::vector<Term>> arrays;
  long long nextLoc = 0;

  long long alloc(long long n, const Term& init);
  const Term& read(long long loc, long long idx) const;
  void update(long long loc, long long idx, const Term& v);
  bool operator==(const Heap& o) const;
};

// Per-construct evaluation costs. All entries nonnegative rationals.
struct CostModel {
  Rat app, fapp, let_ /*monadic bind*/, lt /*pure let*/, ret, read, update, alloc, case_,
      unpack, celim, iapp;

  // The acceptance default: reads and updates cost 1, everything else 0.
  static CostModel defaultModel();
  static CostModel zero();
  static CostModel fromFile(const std::string& path);
  void set(const std::string& key, const Rat& v);
  Rat get(const std::string& key) const;
  void validate() const;  // entries >= 0
};

struct EvalResult {
  Term value;
  Rat cost;
  uint64_t steps = 0;
};

struct ForceResult {
  Term value;
  Rat cost;
  uint64_t steps = 0;
  Heap heap;
};

// Pure evaluation  t |v (v, c, k)  per Fig-2-style rules. `heap` provides
// read-only location context for value embedding; pure evaluation never
// touches it.
EvalResult evalPure(const Term& t, const CostModel& cm, uint64_t fuel);

// Forcing evaluation  (t, H) |f (v, H', c, k): evaluates t purely to a
// monadic value, then forces it against the heap.
ForceResult evalForce(const Term& t, const Heap& h, const CostModel& cm, uint64_t fuel);

// Relative cost of two runs plus the per-location set of indices where the
// output heaps differ.
struct RelCostResult {
  Rat delta;
  ForceResult left, right;
  // loc id (shared between runs by construction order) -> differing indices
  std::map<long long, std::vector<long long>> heapDiff;
};
RelCostResult empiricalRelcost(const Term& t1, const Term& t2, const Heap& h1, const Heap& h2,
                               const CostModel& cm, uint64_t fuel);

bool valueEq(const Term& a, const Term& b);  // first-order structural equality

constexpr uint64_t kDefaultFuel = 10'000'000;

}  // namespace arel
