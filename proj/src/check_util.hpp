#pragma once

#include "arel/checker.hpp"
#include "arel/pretty.hpp"

namespace arel {

inline Index plus(const Index& a, const Index& b) { return simplifyIndex(iAdd(a, b)); }
inline Index minus(const Index& a, const Index& b) { return simplifyIndex(iSub(a, b)); }
inline Index imax(const Index& a, const Index& b) { return simplifyIndex(iMaxT(a, b)); }
inline Index imin(const Index& a, const Index& b) { return simplifyIndex(iMinT(a, b)); }

inline bool sameAssertion(const Assertion& a, const Assertion& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].first != b.entries[i].first) return false;
    if (!indexEq(a.entries[i].second, b.entries[i].second)) return false;
  }
  return true;
}

// Pointwise union of two assertion states over the same domain (used to merge
// the branches of a conditional).
inline Assertion mergeAssertions(const Assertion& a, const Assertion& b) {
  if (sameAssertion(a, b)) return a;
  if (a.dom() != b.dom())
    fail("DomainMismatch", "conditional branches leave different array footprints");
  Assertion r;
  for (auto& [g, beta] : a.entries) {
    const Index* b2 = b.find(g);
    r.entries.emplace_back(g, indexEq(beta, *b2) ? beta : simplifyIndex(iBin(IK::Union, beta, *b2)));
  }
  return r;
}

inline bool inferableTerm(const Term& t) {
  switch (t->kind) {
    case TK::Var:
    case TK::IntL:
    case TK::RealL:
    case TK::BoolL:
    case TK::UnitL:
    case TK::App:
    case TK::IApp:
    case TK::Prim:
    case TK::CElim:
    case TK::Ascribe:
      return true;
    default:
      return false;
  }
}

// The per-construct application cost is c_app for lambdas and c_fapp for
// fixpoints; statically we cannot always tell which will be applied, so the
// checker brackets with min/max (both are 0 in the default model).
inline Index appCostLo(const Checker& ck) {
  Rat m = ck.opts.cm.app < ck.opts.cm.fapp ? ck.opts.cm.app : ck.opts.cm.fapp;
  return iRat(m);
}
inline Index appCostHi(const Checker& ck) {
  Rat m = ck.opts.cm.app < ck.opts.cm.fapp ? ck.opts.cm.fapp : ck.opts.cm.app;
  return iRat(m);
}

}  // namespace arel
