#include "arel/index_engine.hpp"

#include <algorithm>
#include <limits>

namespace arel {

// ---------------------------------------------------------------------------
// GroundSet
// ---------------------------------------------------------------------------

static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

void GroundSet::canonicalize() {
  std::vector<std::pair<long long, long long>> v;
  for (auto [lo, hi] : ivals) {
    if (lo < 0) lo = 0;  // subsets of N
    if (hi < lo) continue;
    v.emplace_back(lo, hi);
  }
  std::sort(v.begin(), v.end());
  std::vector<std::pair<long long, long long>> out;
  for (auto iv : v) {
    if (!out.empty() && iv.first <= out.back().second + 1)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  ivals = std::move(out);
}

GroundSet GroundSet::interval(long long lo, long long hi) {
  GroundSet s;
  s.ivals = {{lo, hi}};
  s.canonicalize();
  return s;
}

GroundSet GroundSet::fromAbove(long long lo) {
  // Represented cofinitely: N \ [0, lo-1].
  GroundSet s;
  s.cofinite = true;
  if (lo > 0) s.ivals = {{0, lo - 1}};
  s.canonicalize();
  return s;
}

bool GroundSet::contains(long long n) const {
  if (n < 0) return false;
  bool inIvals = false;
  for (auto [lo, hi] : ivals)
    if (lo <= n && n <= hi) {
      inIvals = true;
      break;
    }
  return cofinite ? !inIvals : inIvals;
}

long long GroundSet::cardinality() const {
  if (cofinite) fail("InfiniteSet", "cardinality of a cofinite set");
  long long c = 0;
  for (auto [lo, hi] : ivals) c += hi - lo + 1;
  return c;
}

long long GroundSet::minimum() const {
  if (isEmpty()) fail("EmptySet", "minimum of the empty set");
  if (!cofinite) return ivals.front().first;
  long long n = 0;
  for (auto [lo, hi] : ivals) {
    if (n < lo) return n;
    n = hi + 1;
  }
  return n;
}

GroundSet GroundSet::complement() const {
  GroundSet s = *this;
  s.cofinite = !s.cofinite;
  return s;
}

GroundSet GroundSet::unite(const GroundSet& o) const {
  if (!cofinite && !o.cofinite) {
    GroundSet s;
    s.ivals = ivals;
    s.ivals.insert(s.ivals.end(), o.ivals.begin(), o.ivals.end());
    s.canonicalize();
    return s;
  }
  // A u B = ~(~A n ~B)
  return complement().intersect(o.complement()).complement();
}

GroundSet GroundSet::intersect(const GroundSet& o) const {
  if (!cofinite && !o.cofinite) {
    GroundSet s;
    for (auto [a, b] : ivals)
      for (auto [c, d] : o.ivals) {
        long long lo = std::max(a, c), hi = std::min(b, d);
        if (lo <= hi) s.ivals.emplace_back(lo, hi);
      }
    s.canonicalize();
    return s;
  }
  if (cofinite && o.cofinite) {
    // ~A n ~B = ~(A u B)
    GroundSet holes;
    holes.ivals = ivals;
    holes.ivals.insert(holes.ivals.end(), o.ivals.begin(), o.ivals.end());
    holes.canonicalize();
    holes.cofinite = true;
    return holes;
  }
  const GroundSet& fin = cofinite ? o : *this;
  const GroundSet& cof = cofinite ? *this : o;
  // fin n ~holes = fin \ holes
  GroundSet holes;
  holes.ivals = cof.ivals;
  return fin.diff(holes);
}

GroundSet GroundSet::diff(const GroundSet& o) const { return intersect(o.complement()); }

bool GroundSet::subsetOf(const GroundSet& o) const { return diff(o).isEmpty(); }

std::string GroundSet::str() const {
  std::string s = cofinite ? "N\\" : "";
  s += "{";
  bool first = true;
  for (auto [lo, hi] : ivals) {
    if (!first) s += ",";
    first = false;
    s += lo == hi ? std::to_string(lo) : "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// Sorting judgment
// ---------------------------------------------------------------------------

static Sort numericJoin(Sort a, Sort b, const char* what) {
  auto num = [&](Sort s) { return s == Sort::Nat || s == Sort::Real; };
  if (!num(a) || !num(b)) fail("SortMismatch", std::string(what) + " expects numeric operands");
  return (a == Sort::Real || b == Sort::Real) ? Sort::Real : Sort::Nat;
}

Sort sortCheck(const Ctx& cx, const Index& t) {
  if (!t) fail("Internal", "null index term");
  switch (t->kind) {
    case IK::Var: {
      auto s = cx.sortOf(t->var);
      if (!s) fail("UnboundIndexVar", "index variable " + symName(t->var) + " not in scope");
      return *s;
    }
    case IK::Nat: return Sort::Nat;
    case IK::RealC: return Sort::Real;
    case IK::BoolC: return Sort::Bool;
    case IK::Infty: return Sort::Real;
    case IK::Add:
    case IK::Mul:
    case IK::Sub:
    case IK::Div:
    case IK::IMax:
    case IK::IMin: {
      Sort a = sortCheck(cx, t->kids[0]);
      // set operators share surface spellings with max/min in tests; keep strict here
      Sort b = sortCheck(cx, t->kids[1]);
      return numericJoin(a, b, "arithmetic");
    }
    case IK::Log2:
    case IK::Floor:
    case IK::Ceil: {
      Sort a = sortCheck(cx, t->kids[0]);
      if (a != Sort::Nat && a != Sort::Real) fail("SortMismatch", "numeric operator on non-numeric");
      return t->kind == IK::Log2 ? Sort::Real : a;
    }
    case IK::SetEnum:
      for (auto& k : t->kids)
        if (sortCheck(cx, k) != Sort::Nat) fail("SortMismatch", "set elements must have sort N");
      return Sort::Set;
    case IK::Union:
    case IK::Inter:
    case IK::SetDiff:
      if (sortCheck(cx, t->kids[0]) != Sort::Set || sortCheck(cx, t->kids[1]) != Sort::Set)
        fail("SortMismatch", "set operator expects P operands");
      return Sort::Set;
    case IK::Interval:
      if (sortCheck(cx, t->kids[0]) != Sort::Nat || sortCheck(cx, t->kids[1]) != Sort::Nat)
        fail("SortMismatch", "interval endpoints must have sort N");
      return Sort::Set;
    case IK::IntervalInf:
      if (sortCheck(cx, t->kids[0]) != Sort::Nat)
        fail("SortMismatch", "interval endpoint must have sort N");
      return Sort::Set;
    case IK::Card:
    case IK::MinSet:
      if (sortCheck(cx, t->kids[0]) != Sort::Set)
        fail("SortMismatch", "set measure expects a P operand");
      return Sort::Nat;
    case IK::FullSet:
    case IK::EmptySet:
      return Sort::Set;
  }
  fail("Internal", "sortCheck: unhandled kind");
}

void wfConstraint(const Ctx& cx, const Constraint& c) {
  switch (c->kind) {
    case CK::True:
    case CK::False:
      return;
    case CK::Eq: {
      Sort a = sortCheck(cx, c->lhs), b = sortCheck(cx, c->rhs);
      bool numeric = (a == Sort::Nat || a == Sort::Real) && (b == Sort::Nat || b == Sort::Real);
      if (!numeric && a != b) fail("SortMismatch", "equality on mismatched sorts");
      return;
    }
    case CK::Lt:
    case CK::Le:
      numericJoin(sortCheck(cx, c->lhs), sortCheck(cx, c->rhs), "comparison");
      return;
    case CK::Mem:
      if (sortCheck(cx, c->lhs) != Sort::Nat) fail("SortMismatch", "membership lhs must be N");
      if (sortCheck(cx, c->rhs) != Sort::Set) fail("SortMismatch", "membership rhs must be P");
      return;
    case CK::SetEq:
    case CK::Subset:
      if (sortCheck(cx, c->lhs) != Sort::Set || sortCheck(cx, c->rhs) != Sort::Set)
        fail("SortMismatch", "set relation expects P operands");
      return;
    case CK::Not:
      wfConstraint(cx, c->a);
      return;
    case CK::And:
    case CK::Implies:
      wfConstraint(cx, c->a);
      wfConstraint(cx, c->b);
      return;
    case CK::Exists:
    case CK::Forall: {
      Ctx cx2 = cx;
      cx2.delta.push(c->var, c->sort);
      wfConstraint(cx2, c->a);
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Ground evaluation
// ---------------------------------------------------------------------------

static IValue numV(const Rat& r) { return IValue{IValue::K::Num, r}; }

IValue evalIndex(const Index& t) {
  switch (t->kind) {
    case IK::Var: fail("NotGround", "free index variable " + symName(t->var));
    case IK::Nat:
    case IK::RealC: return numV(t->num);
    case IK::BoolC: return IValue{IValue::K::Boolean, {}, t->bval};
    case IK::Infty: return IValue{IValue::K::Inf};
    case IK::Add:
    case IK::Sub:
    case IK::Mul:
    case IK::Div:
    case IK::IMax:
    case IK::IMin: {
      IValue a = evalIndex(t->kids[0]), b = evalIndex(t->kids[1]);
      if (a.k == IValue::K::Inf || b.k == IValue::K::Inf) {
        // infinity is a top cost; only max/min/add keep a defined meaning
        if (t->kind == IK::IMin) {
          if (a.k == IValue::K::Inf) return b;
          return a;
        }
        if (t->kind == IK::Sub && b.k == IValue::K::Inf)
          fail("NotGround", "subtraction of infinity");
        return IValue{IValue::K::Inf};
      }
      if (a.k != IValue::K::Num || b.k != IValue::K::Num)
        fail("SortMismatch", "arithmetic on non-numeric ground values");
      switch (t->kind) {
        case IK::Add: return numV(a.num + b.num);
        case IK::Sub: return numV(a.num - b.num);
        case IK::Mul: return numV(a.num * b.num);
        case IK::Div: {
          if (b.num.isZero()) fail("NotGround", "division by zero");
          // N-sorted division is Euclidean; detect via integrality of operands
          if (a.num.isInteger() && b.num.isInteger() && a.num.num() >= 0 && b.num.num() > 0)
            return numV(Rat(a.num.num() / b.num.num()));
          return numV(a.num / b.num);
        }
        case IK::IMax: return numV(a.num < b.num ? b.num : a.num);
        case IK::IMin: return numV(a.num < b.num ? a.num : b.num);
        default: break;
      }
      break;
    }
    case IK::Log2: {
      IValue a = evalIndex(t->kids[0]);
      if (a.k != IValue::K::Num) fail("SortMismatch", "log2 of non-numeric");
      // exact only on powers of two; kept symbolic otherwise by simplify
      if (!a.num.isInteger() || a.num.num() <= 0) fail("NotGround", "log2 kept symbolic");
      long long v = a.num.num();
      if ((v & (v - 1)) != 0) fail("NotGround", "log2 kept symbolic (not a power of two)");
      long long e = 0;
      while (v > 1) {
        v >>= 1;
        ++e;
      }
      return numV(Rat(e));
    }
    case IK::Floor: {
      IValue a = evalIndex(t->kids[0]);
      if (a.k == IValue::K::Inf) return a;
      return numV(Rat(a.num.floorToInt()));
    }
    case IK::Ceil: {
      IValue a = evalIndex(t->kids[0]);
      if (a.k == IValue::K::Inf) return a;
      return numV(Rat(a.num.ceilToInt()));
    }
    case IK::Card: {
      GroundSet s = normalizeSet(t->kids[0]);
      return numV(Rat(s.cardinality()));
    }
    case IK::MinSet: {
      GroundSet s = normalizeSet(t->kids[0]);
      return numV(Rat(s.minimum()));
    }
    default: {
      IValue v;
      v.k = IValue::K::SetV;
      v.set = normalizeSet(t);
      return v;
    }
  }
  fail("Internal", "evalIndex: unreachable");
}

static long long evalNatIndex(const Index& t) {
  IValue v = evalIndex(t);
  if (v.k != IValue::K::Num || !v.num.isInteger())
    fail("SortMismatch", "expected a ground natural");
  return v.num.num();
}

GroundSet normalizeSet(const Index& t) {
  switch (t->kind) {
    case IK::EmptySet: return GroundSet::empty();
    case IK::FullSet: return GroundSet::full();
    case IK::SetEnum: {
      GroundSet s;
      for (auto& k : t->kids) {
        long long n = evalNatIndex(k);
        if (n >= 0) s.ivals.emplace_back(n, n);
      }
      s.canonicalize();
      return s;
    }
    case IK::Interval:
      return GroundSet::interval(evalNatIndex(t->kids[0]), evalNatIndex(t->kids[1]));
    case IK::IntervalInf: {
      long long lo = evalNatIndex(t->kids[0]);
      return GroundSet::fromAbove(lo < 0 ? 0 : lo);
    }
    case IK::Union: return normalizeSet(t->kids[0]).unite(normalizeSet(t->kids[1]));
    case IK::Inter: return normalizeSet(t->kids[0]).intersect(normalizeSet(t->kids[1]));
    case IK::SetDiff: return normalizeSet(t->kids[0]).diff(normalizeSet(t->kids[1]));
    case IK::Var: fail("NotGround", "free set variable " + symName(t->var));
    default: fail("SortMismatch", "not a set term");
  }
}

bool evalConstraintGround(const Constraint& c) {
  switch (c->kind) {
    case CK::True: return true;
    case CK::False: return false;
    case CK::Eq: {
      IValue a = evalIndex(c->lhs), b = evalIndex(c->rhs);
      if (a.k == IValue::K::SetV && b.k == IValue::K::SetV) return a.set == b.set;
      if (a.k == IValue::K::Boolean && b.k == IValue::K::Boolean) return a.b == b.b;
      if (a.k == IValue::K::Inf || b.k == IValue::K::Inf) return a.k == b.k;
      return a.num == b.num;
    }
    case CK::Lt:
    case CK::Le: {
      IValue a = evalIndex(c->lhs), b = evalIndex(c->rhs);
      if (b.k == IValue::K::Inf) return a.k != IValue::K::Inf || c->kind == CK::Le;
      if (a.k == IValue::K::Inf) return false;
      return c->kind == CK::Lt ? a.num < b.num : a.num <= b.num;
    }
    case CK::Mem: {
      long long n = evalNatIndex(c->lhs);
      return normalizeSet(c->rhs).contains(n);
    }
    case CK::SetEq: return normalizeSet(c->lhs) == normalizeSet(c->rhs);
    case CK::Subset: return normalizeSet(c->lhs).subsetOf(normalizeSet(c->rhs));
    case CK::Not: return !evalConstraintGround(c->a);
    case CK::And: return evalConstraintGround(c->a) && evalConstraintGround(c->b);
    case CK::Implies: return !evalConstraintGround(c->a) || evalConstraintGround(c->b);
    case CK::Exists:
    case CK::Forall: fail("NotGround", "quantifier in ground evaluation");
  }
  fail("Internal", "evalConstraintGround: unreachable");
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

Index mkIdx(const IndexNode& n);

static bool isGround(const Index& t) {
  std::set<Symbol> fv;
  freeIndexVars(t, fv);
  return fv.empty();
}

static Index groundSetToIndex(const GroundSet& s) {
  if (s.isEmpty()) return iEmptySet();
  if (s.isFull()) return iFullSet();
  if (s.cofinite) {
    GroundSet holes;
    holes.ivals = s.ivals;
    return iBin(IK::SetDiff, iFullSet(), groundSetToIndex(holes));
  }
  Index acc;
  for (auto [lo, hi] : s.ivals) {
    Index piece = lo == hi ? iSetEnum({iNat(lo)}) : iInterval(iNat(lo), iNat(hi));
    acc = acc ? iBin(IK::Union, acc, piece) : piece;
  }
  return acc;
}

Index simplifyIndex(const Index& t) {
  if (!t) return t;
  switch (t->kind) {
    case IK::Var:
    case IK::Nat:
    case IK::RealC:
    case IK::BoolC:
    case IK::Infty:
    case IK::FullSet:
    case IK::EmptySet:
      return t;
    default: break;
  }
  IndexNode n = *t;
  for (auto& k : n.kids) k = simplifyIndex(k);
  Index folded = mkIdx(n);
  if (isGround(folded)) {
    try {
      IValue v = evalIndex(folded);
      switch (v.k) {
        case IValue::K::Num: return iRat(v.num);
        case IValue::K::Boolean: return iBool(v.b);
        case IValue::K::Inf: return iInfty();
        case IValue::K::SetV: return groundSetToIndex(v.set);
      }
    } catch (const ArelError&) {
      // stays symbolic (e.g. log2 of a non-power-of-two)
    }
  }
  // algebraic identities on partially symbolic terms
  auto isZero = [](const Index& i) {
    return i && (i->kind == IK::Nat || i->kind == IK::RealC) && i->num.isZero();
  };
  auto isOne = [](const Index& i) {
    return i && (i->kind == IK::Nat || i->kind == IK::RealC) && i->num == Rat(1);
  };
  switch (folded->kind) {
    case IK::Add:
      if (isZero(folded->kids[0])) return folded->kids[1];
      if (isZero(folded->kids[1])) return folded->kids[0];
      break;
    case IK::Sub:
      if (isZero(folded->kids[1])) return folded->kids[0];
      break;
    case IK::Mul:
      if (isZero(folded->kids[0]) || isZero(folded->kids[1])) return iNat(0);
      if (isOne(folded->kids[0])) return folded->kids[1];
      if (isOne(folded->kids[1])) return folded->kids[0];
      break;
    case IK::Union:
      if (folded->kids[0]->kind == IK::EmptySet) return folded->kids[1];
      if (folded->kids[1]->kind == IK::EmptySet) return folded->kids[0];
      if (folded->kids[0]->kind == IK::FullSet || folded->kids[1]->kind == IK::FullSet)
        return iFullSet();
      break;
    case IK::Inter:
      if (folded->kids[0]->kind == IK::EmptySet || folded->kids[1]->kind == IK::EmptySet)
        return iEmptySet();
      if (folded->kids[0]->kind == IK::FullSet) return folded->kids[1];
      if (folded->kids[1]->kind == IK::FullSet) return folded->kids[0];
      break;
    case IK::SetDiff:
      if (folded->kids[1]->kind == IK::EmptySet) return folded->kids[0];
      if (folded->kids[0]->kind == IK::EmptySet) return iEmptySet();
      break;
    case IK::IMin:
      if (indexEq(folded->kids[0], folded->kids[1])) return folded->kids[0];
      if (folded->kids[0]->kind == IK::Infty) return folded->kids[1];
      if (folded->kids[1]->kind == IK::Infty) return folded->kids[0];
      break;
    case IK::IMax:
      if (indexEq(folded->kids[0], folded->kids[1])) return folded->kids[0];
      break;
    default: break;
  }
  return folded;
}

Index mkIdx(const IndexNode& n) { return std::make_shared<const IndexNode>(n); }

Constraint simplify(const Constraint& c) {
  if (!c) return c;
  switch (c->kind) {
    case CK::True:
    case CK::False:
      return c;
    case CK::Eq:
    case CK::Lt:
    case CK::Le:
    case CK::Mem:
    case CK::SetEq:
    case CK::Subset: {
      Index l = simplifyIndex(c->lhs), r = simplifyIndex(c->rhs);
      Constraint atom = cAtom(c->kind, l, r);
      std::set<Symbol> fv;
      freeIndexVars(atom, fv);
      if (fv.empty()) {
        try {
          return evalConstraintGround(atom) ? cTrue() : cFalse();
        } catch (const ArelError&) {
          return atom;
        }
      }
      // reflexive atoms
      if ((c->kind == CK::Eq || c->kind == CK::Le || c->kind == CK::SetEq ||
           c->kind == CK::Subset) &&
          indexEq(l, r))
        return cTrue();
      if (c->kind == CK::Le && r->kind == IK::Infty) return cTrue();
      if (c->kind == CK::Mem && r->kind == IK::FullSet) return cTrue();
      if (c->kind == CK::Mem && r->kind == IK::EmptySet) return cFalse();
      if (c->kind == CK::Subset && l->kind == IK::EmptySet) return cTrue();
      if (c->kind == CK::Subset && r->kind == IK::FullSet) return cTrue();
      return atom;
    }
    case CK::Not:
      return cNot(simplify(c->a));
    case CK::And:
      return cAnd(simplify(c->a), simplify(c->b));
    case CK::Implies: {
      Constraint h = simplify(c->a);
      if (h->kind == CK::False) return cTrue();
      return cImplies(h, simplify(c->b));
    }
    case CK::Exists:
    case CK::Forall: {
      Constraint b = simplify(c->a);
      std::set<Symbol> fv;
      freeIndexVars(b, fv);
      if (!fv.count(c->var))
        return b;  // vacuous quantifier
      return c->kind == CK::Exists ? cExists(c->var, c->sort, b) : cForall(c->var, c->sort, b);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Existential elimination
// ---------------------------------------------------------------------------

namespace {

// Collects candidate replacements for `v` from the constraint body:
// equalities first, then inequality bounds.
struct Candidates {
  std::vector<Index> equalities;
  std::vector<Index> uppers;  // v <= t / v < t / v subset t
  std::vector<Index> lowers;  // t <= v / t in v / t subset v
};

// Solves `expr = rest` for v when v occurs exactly once, through +/-.
// Returns null when no solution of that shape exists.
Index solveFor(Symbol v, const Index& expr, const Index& rest) {
  auto mentions = [&](const Index& t) {
    std::set<Symbol> fv;
    freeIndexVars(t, fv);
    return fv.count(v) > 0;
  };
  if (expr->kind == IK::Var && expr->var == v) return mentions(rest) ? nullptr : rest;
  if (expr->kind == IK::Add) {
    bool inL = mentions(expr->kids[0]), inR = mentions(expr->kids[1]);
    if (inL && !inR) return solveFor(v, expr->kids[0], iSub(rest, expr->kids[1]));
    if (inR && !inL) return solveFor(v, expr->kids[1], iSub(rest, expr->kids[0]));
  }
  if (expr->kind == IK::Sub) {
    bool inL = mentions(expr->kids[0]), inR = mentions(expr->kids[1]);
    if (inL && !inR) return solveFor(v, expr->kids[0], iAdd(rest, expr->kids[1]));
    if (inR && !inL) return solveFor(v, expr->kids[1], iSub(expr->kids[0], rest));
  }
  return nullptr;
}

void collect(const Constraint& c, Symbol v, bool positive, Candidates& out) {
  auto mentionsOnlyOthers = [&](const Index& t) {
    std::set<Symbol> fv;
    freeIndexVars(t, fv);
    return !fv.count(v);
  };
  switch (c->kind) {
    case CK::Eq:
    case CK::SetEq: {
      if (!positive) return;
      if (c->lhs->kind == IK::Var && c->lhs->var == v && mentionsOnlyOthers(c->rhs))
        out.equalities.push_back(c->rhs);
      else if (c->rhs->kind == IK::Var && c->rhs->var == v && mentionsOnlyOthers(c->lhs))
        out.equalities.push_back(c->lhs);
      else if (c->kind == CK::Eq) {
        if (mentionsOnlyOthers(c->rhs)) {
          if (Index s = solveFor(v, c->lhs, c->rhs)) out.equalities.push_back(simplifyIndex(s));
        } else if (mentionsOnlyOthers(c->lhs)) {
          if (Index s = solveFor(v, c->rhs, c->lhs)) out.equalities.push_back(simplifyIndex(s));
        }
      }
      return;
    }
    case CK::Le:
    case CK::Lt: {
      if (!positive) return;
      if (c->lhs->kind == IK::Var && c->lhs->var == v && mentionsOnlyOthers(c->rhs))
        out.uppers.push_back(c->rhs);
      if (c->rhs->kind == IK::Var && c->rhs->var == v && mentionsOnlyOthers(c->lhs))
        out.lowers.push_back(c->lhs);
      return;
    }
    case CK::Mem:
      if (positive && c->rhs->kind == IK::Var && c->rhs->var == v && mentionsOnlyOthers(c->lhs))
        out.lowers.push_back(iSetEnum({c->lhs}));
      return;
    case CK::Subset:
      if (!positive) return;
      if (c->rhs->kind == IK::Var && c->rhs->var == v && mentionsOnlyOthers(c->lhs))
        out.lowers.push_back(c->lhs);
      if (c->lhs->kind == IK::Var && c->lhs->var == v && mentionsOnlyOthers(c->rhs))
        out.uppers.push_back(c->rhs);
      return;
    case CK::And:
      collect(c->a, v, positive, out);
      collect(c->b, v, positive, out);
      return;
    case CK::Implies:
      // conclusions keep polarity; hypotheses flip
      collect(c->b, v, positive, out);
      return;
    case CK::Exists:
    case CK::Forall:
      if (c->var != v) collect(c->a, v, positive, out);
      return;
    default:
      return;
  }
}

Constraint substInto(const Constraint& body, Symbol v, const Index& t) {
  IndexSubst m{{v, t}};
  return simplify(substConstraint(body, m));
}

}  // namespace

Constraint eliminateExistentials(const Constraint& c) {
  switch (c->kind) {
    case CK::True:
    case CK::False:
    case CK::Eq:
    case CK::Lt:
    case CK::Le:
    case CK::Mem:
    case CK::SetEq:
    case CK::Subset:
      return c;
    case CK::Not:
      return cNot(eliminateExistentials(c->a));
    case CK::And:
      return cAnd(eliminateExistentials(c->a), eliminateExistentials(c->b));
    case CK::Implies:
      return cImplies(c->a, eliminateExistentials(c->b));
    case CK::Forall:
      return cForall(c->var, c->sort, eliminateExistentials(c->a));
    case CK::Exists: {
      Constraint body = eliminateExistentials(c->a);
      Candidates cand;
      collect(body, c->var, true, cand);
      // equality candidates are exact witnesses
      for (auto& e : cand.equalities) return substInto(body, c->var, e);
      // boundary candidates: try each, keep the first that closes the goal
      std::vector<Index> tries;
      if (c->sort == Sort::Set) {
        Index unionLowers = iEmptySet();
        for (auto& l : cand.lowers) unionLowers = iBin(IK::Union, unionLowers, l);
        tries.push_back(simplifyIndex(unionLowers));
        for (auto& u : cand.uppers) tries.push_back(u);
      } else {
        // tight combinations first
        if (!cand.lowers.empty()) {
          Index m = cand.lowers[0];
          for (size_t i = 1; i < cand.lowers.size(); ++i) m = iMaxT(m, cand.lowers[i]);
          tries.push_back(simplifyIndex(m));
        }
        if (!cand.uppers.empty()) {
          Index m = cand.uppers[0];
          for (size_t i = 1; i < cand.uppers.size(); ++i) m = iMinT(m, cand.uppers[i]);
          tries.push_back(simplifyIndex(m));
        }
        for (auto& u : cand.uppers) tries.push_back(u);
        for (auto& l : cand.lowers) tries.push_back(l);
      }
      for (auto& t : tries) {
        Constraint r = substInto(body, c->var, t);
        if (r->kind == CK::True) return r;
      }
      if (!tries.empty()) {
        // no candidate closed the goal syntactically; commit to the tightest
        // bound (still validity-preserving: it is a concrete witness)
        return substInto(body, c->var, tries.front());
      }
      // no information at all: an unconstrained fresh value; for costs pick 0
      if (c->sort == Sort::Real || c->sort == Sort::Nat) {
        Constraint r = substInto(body, c->var, iNat(0));
        if (r->kind == CK::True) return r;
        return cExists(c->var, c->sort, body);
      }
      if (c->sort == Sort::Set) return substInto(body, c->var, iEmptySet());
      return cExists(c->var, c->sort, body);
    }
  }
  return c;
}

}  // namespace arel
