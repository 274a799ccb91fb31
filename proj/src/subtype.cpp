#include "arel/checker.hpp"
#include "arel/pretty.hpp"

namespace arel {

Checker::Checker() {
  // default probe: decision by simplification only
  probe = [](const Ctx& cx, const Constraint& c, int) {
    Constraint goal = cImplies(cx.hypotheses(), c);
    return simplify(goal)->kind == CK::True;
  };
}

bool Checker::entails(const Ctx& cx, const Constraint& c, int timeoutMs) {
  Constraint s = simplify(c);
  if (s->kind == CK::True) return true;
  if (s->kind == CK::False) return false;
  // a hypothesis that syntactically matches or contradicts c settles it fast
  for (auto& h : cx.phi) {
    Constraint hs = simplify(h);
    if (constraintEq(hs, s)) return true;
    if (constraintEq(hs, simplify(cNot(s)))) return false;
    if (constraintEq(simplify(cNot(hs)), s)) return false;
  }
  Constraint g = simplify(cImplies(cx.hypotheses(), s));
  if (g->kind == CK::True) return true;
  ++probeCount;
  return probe(cx, s, timeoutMs ? timeoutMs : opts.probeTimeoutMs);
}

[[noreturn]] static void mismatchU(const UTy& a, const UTy& b) {
  fail("StructuralMismatch", show(a) + " is not a subtype of " + show(b));
}
[[noreturn]] static void mismatchR(const RTy& a, const RTy& b) {
  fail("StructuralMismatch", show(a) + " is not a subtype of " + show(b));
}

bool diagonalType(const RTy& t) {
  switch (t->kind) {
    case RK::Unit: return true;
    case RK::Bool: return t->boolRef != nullptr;
    case RK::Int: return t->intRef != nullptr;
    case RK::Box: return true;
    case RK::Sum: return diagonalType(t->a) && diagonalType(t->inner);
    case RK::CAnd:
    case RK::CImpl:
    case RK::Forall:
    case RK::Exists:
      return diagonalType(t->inner);
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Assertion inclusion: pointwise beta inclusion, small side's entries must
// all be present on the big side.
// ---------------------------------------------------------------------------

static Constraint assertIncluded(const Assertion& small, const Assertion& big, const char* what) {
  Constraint phi = cTrue();
  for (auto& [g, beta] : small.entries) {
    const Index* b2 = big.find(g);
    if (!b2)
      fail("StructuralMismatch",
           std::string(what) + ": name " + symName(g) + " missing on the larger side");
    phi = cAnd(phi, cSubset(beta, *b2));
  }
  return phi;
}

static void requireSameDom(const Assertion& a, const Assertion& b, const char* what) {
  if (a.dom() != b.dom())
    fail("StructuralMismatch", std::string(what) + ": assertion domains differ");
}

// ---------------------------------------------------------------------------
// Unary subtyping (S-UM and structure)
// ---------------------------------------------------------------------------

Constraint subtypeU(Checker& ck, Ctx& cx, const UTy& sub, const UTy& sup) {
  // constraint-type adjustments first
  if (sub->kind == UK::CAnd && sup->kind != UK::CAnd) {
    Ctx cx2 = cx;
    cx2.phi.push_back(sub->cnstr);
    return cImplies(sub->cnstr, subtypeU(ck, cx2, sub->inner, sup));
  }
  if (sup->kind == UK::CImpl && sub->kind != UK::CImpl) {
    Ctx cx2 = cx;
    cx2.phi.push_back(sup->cnstr);
    return cImplies(sup->cnstr, subtypeU(ck, cx2, sub, sup->inner));
  }
  if (sub->kind == UK::CImpl && sup->kind != UK::CImpl)
    return cAnd(sub->cnstr, subtypeU(ck, cx, sub->inner, sup));
  if (sup->kind == UK::CAnd && sub->kind != UK::CAnd)
    return cAnd(sup->cnstr, subtypeU(ck, cx, sub, sup->inner));

  switch (sup->kind) {
    case UK::Unit:
      if (sub->kind != UK::Unit) mismatchU(sub, sup);
      return cTrue();
    case UK::Real:
      if (sub->kind != UK::Real) mismatchU(sub, sup);
      return cTrue();
    case UK::Bool: {
      if (sub->kind != UK::Bool) mismatchU(sub, sup);
      if (!sup->boolRef) return cTrue();
      if (!sub->boolRef) mismatchU(sub, sup);
      return cAnd(cImplies(sub->boolRef, sup->boolRef), cImplies(sup->boolRef, sub->boolRef));
    }
    case UK::Int: {
      if (sub->kind != UK::Int) mismatchU(sub, sup);
      if (!sup->intRef) return cTrue();
      if (!sub->intRef) mismatchU(sub, sup);
      return cEq(sub->intRef, sup->intRef);
    }
    case UK::Arrow: {
      if (sub->kind != UK::Arrow) mismatchU(sub, sup);
      Constraint dom = subtypeU(ck, cx, sup->a, sub->a);
      Constraint cod = subtypeU(ck, cx, sub->inner, sup->inner);
      return cAndAll({dom, cod, cLe(sup->lo, sub->lo), cLe(sub->hi, sup->hi)});
    }
    case UK::Monad: {
      if (sub->kind != UK::Monad) mismatchU(sub, sup);
      if (sub->gammas.size() > sup->gammas.size()) mismatchU(sub, sup);
      UTy subInner = sub->inner;
      Assertion subPost = sub->post;
      IndexSubst ren;
      for (size_t i = 0; i < sub->gammas.size(); ++i)
        ren[sub->gammas[i]] = iVar(sup->gammas[i]);
      if (!ren.empty()) {
        subInner = substUTy(subInner, ren);
        subPost = substAssertion(subPost, ren);
      }
      Ctx cx2 = cx;
      for (auto g : sup->gammas) cx2.delta.push(g, Sort::Loc);
      Constraint inner = subtypeU(ck, cx2, subInner, sup->inner);
      // S-UM: grow the (write-permission) pre, shrink the post
      Constraint pre = assertIncluded(sub->pre, sup->pre, "unary monad precondition");
      Constraint post = assertIncluded(sup->post, subPost, "unary monad postcondition");
      return cAndAll({inner, pre, post, cLe(sup->lo, sub->lo), cLe(sub->hi, sup->hi)});
    }
    case UK::Forall: {
      if (sub->kind != UK::Forall || sub->sort != sup->sort) mismatchU(sub, sup);
      IndexSubst ren{{sub->var, iVar(sup->var)}};
      UTy subBody = substUTy(sub->inner, ren);
      Index slo = substIndex(sub->lo, ren), shi = substIndex(sub->hi, ren);
      Ctx cx2 = cx;
      cx2.delta.push(sup->var, sup->sort);
      Constraint body = subtypeU(ck, cx2, subBody, sup->inner);
      return cForall(sup->var, sup->sort, cAndAll({body, cLe(sup->lo, slo), cLe(shi, sup->hi)}));
    }
    case UK::Exists: {
      if (sub->kind != UK::Exists || sub->sort != sup->sort) mismatchU(sub, sup);
      IndexSubst ren{{sub->var, iVar(sup->var)}};
      Ctx cx2 = cx;
      cx2.delta.push(sup->var, sup->sort);
      return cForall(sup->var, sup->sort,
                     subtypeU(ck, cx2, substUTy(sub->inner, ren), sup->inner));
    }
    case UK::Array: {
      if (sub->kind != UK::Array || sub->gamma != sup->gamma) mismatchU(sub, sup);
      Constraint len = cEq(sub->len, sup->len);
      // mutable cells: element type is invariant
      Constraint a = subtypeU(ck, cx, sub->inner, sup->inner);
      Constraint b = subtypeU(ck, cx, sup->inner, sub->inner);
      return cAndAll({len, a, b});
    }
    case UK::List: {
      if (sub->kind != UK::List) mismatchU(sub, sup);
      return cAnd(cEq(sub->len, sup->len), subtypeU(ck, cx, sub->inner, sup->inner));
    }
    case UK::Sum: {
      if (sub->kind != UK::Sum) mismatchU(sub, sup);
      return cAnd(subtypeU(ck, cx, sub->a, sup->a), subtypeU(ck, cx, sub->inner, sup->inner));
    }
    case UK::CAnd: {
      if (sub->kind != UK::CAnd) mismatchU(sub, sup);
      Ctx cx2 = cx;
      cx2.phi.push_back(sub->cnstr);
      return cImplies(sub->cnstr, cAnd(sup->cnstr, subtypeU(ck, cx2, sub->inner, sup->inner)));
    }
    case UK::CImpl: {
      if (sub->kind != UK::CImpl) mismatchU(sub, sup);
      Ctx cx2 = cx;
      cx2.phi.push_back(sup->cnstr);
      return cImplies(sup->cnstr, cAnd(sub->cnstr, subtypeU(ck, cx2, sub->inner, sup->inner)));
    }
  }
  mismatchU(sub, sup);
}

// ---------------------------------------------------------------------------
// Relational subtyping (S-RM, S-RUM, box laws)
// ---------------------------------------------------------------------------

Constraint subtypeR(Checker& ck, Ctx& cx, const RTy& sub, const RTy& sup) {
  // box elimination / introduction
  if (sub->kind == RK::Box && sup->kind == RK::Box)
    return subtypeR(ck, cx, sub->inner, sup->inner);
  if (sub->kind == RK::Box && sup->kind != RK::Box)
    return subtypeR(ck, cx, sub->inner, sup);  // box tau <= tau
  if (sup->kind == RK::Box && sub->kind != RK::Box) {
    if (!diagonalType(sub)) mismatchR(sub, sup);
    return subtypeR(ck, cx, sub, sup->inner);
  }
  // S-RUM: a pair of unary monads coerces to a relational monad
  if (sub->kind == RK::U && sup->kind == RK::Monad) {
    const UTy& a1 = sub->u1;
    const UTy& a2 = sub->u2;
    if (a1->kind != UK::Monad || a2->kind != UK::Monad) mismatchR(sub, sup);
    Ctx cx2 = cx;
    for (auto g : sup->gammas) cx2.delta.push(g, Sort::Loc);
    Constraint inner = subtypeR(ck, cx2, rU(a1->inner, a2->inner), sup->inner);
    Constraint phi = inner;
    // post beta' absorbs beta plus both sides' write permissions
    for (auto& [g, betaPost] : sup->post.entries) {
      const Index* beta = sup->pre.find(g);
      if (!beta) fail("StructuralMismatch", "S-RUM: " + symName(g) + " missing in precondition");
      Index t1 = a1->pre.find(g) ? *a1->pre.find(g) : iEmptySet();
      Index t2 = a2->pre.find(g) ? *a2->pre.find(g) : iEmptySet();
      phi = cAnd(phi, cSubset(iBin(IK::Union, iBin(IK::Union, *beta, t1), t2), betaPost));
    }
    for (auto& [g, t] : a1->pre.entries)
      if (!sup->pre.find(g))
        fail("StructuralMismatch", "S-RUM: unary permission " + symName(g) + " not related");
    for (auto& [g, t] : a2->pre.entries)
      if (!sup->pre.find(g))
        fail("StructuralMismatch", "S-RUM: unary permission " + symName(g) + " not related");
    phi = cAnd(phi, cLe(iSub(a1->hi, a2->lo), sup->d));
    return phi;
  }
  // embedding into U via projections
  if (sup->kind == RK::U && sub->kind != RK::U) {
    Constraint a = subtypeU(ck, cx, projectType(sub, 1), sup->u1);
    Constraint b = subtypeU(ck, cx, projectType(sub, 2), sup->u2);
    return cAnd(a, b);
  }

  if (sub->kind == RK::CAnd && sup->kind != RK::CAnd) {
    Ctx cx2 = cx;
    cx2.phi.push_back(sub->cnstr);
    return cImplies(sub->cnstr, subtypeR(ck, cx2, sub->inner, sup));
  }
  if (sup->kind == RK::CImpl && sub->kind != RK::CImpl) {
    Ctx cx2 = cx;
    cx2.phi.push_back(sup->cnstr);
    return cImplies(sup->cnstr, subtypeR(ck, cx2, sub, sup->inner));
  }
  if (sub->kind == RK::CImpl && sup->kind != RK::CImpl)
    return cAnd(sub->cnstr, subtypeR(ck, cx, sub->inner, sup));
  if (sup->kind == RK::CAnd && sub->kind != RK::CAnd)
    return cAnd(sup->cnstr, subtypeR(ck, cx, sub, sup->inner));

  switch (sup->kind) {
    case RK::Unit:
      if (sub->kind != RK::Unit) mismatchR(sub, sup);
      return cTrue();
    case RK::Real:
      if (sub->kind != RK::Real) mismatchR(sub, sup);
      return cTrue();
    case RK::Bool: {
      if (sub->kind != RK::Bool) mismatchR(sub, sup);
      if (!sup->boolRef) return cTrue();
      if (!sub->boolRef) mismatchR(sub, sup);
      return cAnd(cImplies(sub->boolRef, sup->boolRef), cImplies(sup->boolRef, sub->boolRef));
    }
    case RK::Int: {
      if (sub->kind != RK::Int) mismatchR(sub, sup);
      if (!sup->intRef) return cTrue();
      if (!sub->intRef) mismatchR(sub, sup);
      return cEq(sub->intRef, sup->intRef);
    }
    case RK::Arrow: {
      if (sub->kind != RK::Arrow) mismatchR(sub, sup);
      Constraint dom = subtypeR(ck, cx, sup->a, sub->a);
      Constraint cod = subtypeR(ck, cx, sub->inner, sup->inner);
      return cAndAll({dom, cod, cLe(sub->d, sup->d)});
    }
    case RK::Monad: {
      if (sub->kind != RK::Monad) mismatchR(sub, sup);
      if (sub->gammas.size() > sup->gammas.size()) mismatchR(sub, sup);
      RTy subInner = sub->inner;
      Assertion subPost = sub->post;
      IndexSubst ren;
      for (size_t i = 0; i < sub->gammas.size(); ++i)
        ren[sub->gammas[i]] = iVar(sup->gammas[i]);
      if (!ren.empty()) {
        subInner = substRTy(subInner, ren);
        subPost = substAssertion(subPost, ren);
      }
      Ctx cx2 = cx;
      for (auto g : sup->gammas) cx2.delta.push(g, Sort::Loc);
      Constraint inner = subtypeR(ck, cx2, subInner, sup->inner);
      requireSameDom(sub->pre, sup->pre, "relational monad precondition");
      // S-RM: more precise pre on the super side, less precise post
      Constraint pre = assertIncluded(sup->pre, sub->pre, "relational monad precondition");
      Constraint post = assertIncluded(subPost, sup->post, "relational monad postcondition");
      return cAndAll({inner, pre, post, cLe(sub->d, sup->d)});
    }
    case RK::Forall: {
      if (sub->kind != RK::Forall || sub->sort != sup->sort) mismatchR(sub, sup);
      IndexSubst ren{{sub->var, iVar(sup->var)}};
      RTy subBody = substRTy(sub->inner, ren);
      Index sd = substIndex(sub->d, ren);
      Ctx cx2 = cx;
      cx2.delta.push(sup->var, sup->sort);
      return cForall(sup->var, sup->sort,
                     cAnd(subtypeR(ck, cx2, subBody, sup->inner), cLe(sd, sup->d)));
    }
    case RK::Exists: {
      if (sub->kind != RK::Exists || sub->sort != sup->sort) mismatchR(sub, sup);
      IndexSubst ren{{sub->var, iVar(sup->var)}};
      Ctx cx2 = cx;
      cx2.delta.push(sup->var, sup->sort);
      return cForall(sup->var, sup->sort,
                     subtypeR(ck, cx2, substRTy(sub->inner, ren), sup->inner));
    }
    case RK::Array: {
      if (sub->kind != RK::Array || sub->gamma != sup->gamma) mismatchR(sub, sup);
      Constraint len = cEq(sub->len, sup->len);
      Constraint a = subtypeR(ck, cx, sub->inner, sup->inner);
      Constraint b = subtypeR(ck, cx, sup->inner, sub->inner);
      return cAndAll({len, a, b});
    }
    case RK::List: {
      if (sub->kind != RK::List) mismatchR(sub, sup);
      Constraint len = cEq(sub->len, sup->len);
      Constraint ch = sub->alpha && sup->alpha ? cLe(sub->alpha, sup->alpha) : cTrue();
      return cAndAll({len, ch, subtypeR(ck, cx, sub->inner, sup->inner)});
    }
    case RK::Sum: {
      if (sub->kind != RK::Sum) mismatchR(sub, sup);
      return cAnd(subtypeR(ck, cx, sub->a, sup->a), subtypeR(ck, cx, sub->inner, sup->inner));
    }
    case RK::CAnd: {
      if (sub->kind != RK::CAnd) mismatchR(sub, sup);
      Ctx cx2 = cx;
      cx2.phi.push_back(sub->cnstr);
      return cImplies(sub->cnstr, cAnd(sup->cnstr, subtypeR(ck, cx2, sub->inner, sup->inner)));
    }
    case RK::CImpl: {
      if (sub->kind != RK::CImpl) mismatchR(sub, sup);
      Ctx cx2 = cx;
      cx2.phi.push_back(sup->cnstr);
      return cImplies(sup->cnstr, cAnd(sub->cnstr, subtypeR(ck, cx2, sub->inner, sup->inner)));
    }
    case RK::U: {
      if (sub->kind != RK::U) mismatchR(sub, sup);
      return cAnd(subtypeU(ck, cx, sub->u1, sup->u1), subtypeU(ck, cx, sub->u2, sup->u2));
    }
    case RK::Box:
      break;  // handled above
  }
  mismatchR(sub, sup);
}

}  // namespace arel
