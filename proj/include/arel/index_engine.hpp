#pragma once

#include "arel/syntax.hpp"

namespace arel {

// ---------------------------------------------------------------------------
// Ground sets: canonical finite unions of disjoint intervals over N, with a
// cofinite flag for N-minus-finite sets.
// ---------------------------------------------------------------------------

struct GroundSet {
  // Disjoint, sorted, non-adjacent closed intervals [lo, hi].
  std::vector<std::pair<long long, long long>> ivals;
  // When true, the set is N \ (union of ivals): ivals then lists the holes.
  bool cofinite = false;

  static GroundSet empty() { return {}; }
  static GroundSet full() { return {{}, true}; }
  static GroundSet single(long long n) { return {{{n, n}}, false}; }
  static GroundSet interval(long long lo, long long hi);  // empty if hi < lo
  static GroundSet fromAbove(long long lo);               // [lo, inf)

  bool isEmpty() const { return !cofinite && ivals.empty(); }
  bool isFull() const { return cofinite && ivals.empty(); }
  bool contains(long long n) const;
  bool finite() const { return !cofinite; }
  long long cardinality() const;  // throws InfiniteSet on cofinite sets
  long long minimum() const;      // throws EmptySet on the empty set
  bool operator==(const GroundSet& o) const { return cofinite == o.cofinite && ivals == o.ivals; }

  GroundSet unite(const GroundSet& o) const;
  GroundSet intersect(const GroundSet& o) const;
  GroundSet diff(const GroundSet& o) const;
  GroundSet complement() const;
  bool subsetOf(const GroundSet& o) const;
  std::string str() const;

  void canonicalize();  // merge/sort/clamp to N
};

// ---------------------------------------------------------------------------
// Sorting and ground evaluation
// ---------------------------------------------------------------------------

Sort sortCheck(const Ctx& cx, const Index& t);
void wfConstraint(const Ctx& cx, const Constraint& c);

// Ground index values: exactly one alternative is populated.
struct IValue {
  enum class K { Num, Boolean, SetV, Inf } k;
  Rat num{};
  bool b = false;
  GroundSet set{};
};

// Evaluates a ground (variable-free) index term. Throws NotGround otherwise.
IValue evalIndex(const Index& t);
// Evaluates a ground P-sorted term to canonical form.
GroundSet normalizeSet(const Index& t);
// Evaluates a ground constraint to a truth value (used by brute-force checks).
bool evalConstraintGround(const Constraint& c);

// ---------------------------------------------------------------------------
// Constraint simplification and existential elimination
// ---------------------------------------------------------------------------

// Logical-equivalence-preserving: folds ground subterms, computes ground set
// measures, drops trivial conjuncts.
Index simplifyIndex(const Index& t);
Constraint simplify(const Constraint& c);

// Validity-preserving in the direction  eliminate(phi) valid => phi valid.
Constraint eliminateExistentials(const Constraint& c);

}  // namespace arel
