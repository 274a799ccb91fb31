#include "arel/syntax.hpp"

#include <atomic>
#include <mutex>
#include <unordered_map>

namespace arel {

// ---------------------------------------------------------------------------
// Symbol interner
// ---------------------------------------------------------------------------

namespace {
struct Interner {
  std::mutex mu;
  std::unordered_map<std::string, uint32_t> ids;
  std::vector<std::string> names;
  std::atomic<uint64_t> freshCounter{0};
};
Interner& interner() {
  static Interner in;
  return in;
}
}  // namespace

Symbol intern(const std::string& name) {
  auto& in = interner();
  std::lock_guard<std::mutex> lk(in.mu);
  auto it = in.ids.find(name);
  if (it != in.ids.end()) return Symbol{it->second};
  uint32_t id = static_cast<uint32_t>(in.names.size());
  in.names.push_back(name);
  in.ids.emplace(name, id);
  return Symbol{id};
}

const std::string& symName(Symbol s) {
  auto& in = interner();
  std::lock_guard<std::mutex> lk(in.mu);
  return in.names.at(s.id);
}

Symbol freshSym(const std::string& base) {
  auto& in = interner();
  uint64_t k = in.freshCounter.fetch_add(1);
  return intern(base + "$" + std::to_string(k));
}

const char* sortName(Sort s) {
  switch (s) {
    case Sort::Nat: return "N";
    case Sort::Real: return "R";
    case Sort::Bool: return "B";
    case Sort::Set: return "P";
    case Sort::Loc: return "L";
  }
  return "?";
}

const char* primName(PrimOp p) {
  switch (p) {
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
    case PrimOp::Mul: return "*";
    case PrimOp::Div: return "/";
    case PrimOp::Lt: return "<";
    case PrimOp::Le: return "<=";
    case PrimOp::EqI: return "==";
    case PrimOp::And: return "&&";
    case PrimOp::Or: return "||";
    case PrimOp::Not: return "not";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Index term constructors
// ---------------------------------------------------------------------------

static Index mkI(IndexNode n) { return std::make_shared<const IndexNode>(std::move(n)); }

Index iVar(Symbol s) { return mkI({IK::Var, s}); }
Index iNat(long long n) {
  IndexNode d{IK::Nat};
  d.num = Rat(n);
  return mkI(std::move(d));
}
Index iRat(const Rat& r) {
  IndexNode d{r.isInteger() && r.num() >= 0 ? IK::Nat : IK::RealC};
  d.num = r;
  return mkI(std::move(d));
}
Index iBool(bool b) {
  IndexNode d{IK::BoolC};
  d.bval = b;
  return mkI(std::move(d));
}
Index iInfty() { return mkI({IK::Infty}); }
Index iBin(IK k, Index a, Index b) {
  IndexNode d{k};
  d.kids = {std::move(a), std::move(b)};
  return mkI(std::move(d));
}
Index iUn(IK k, Index a) {
  IndexNode d{k};
  d.kids = {std::move(a)};
  return mkI(std::move(d));
}
Index iSetEnum(std::vector<Index> elems) {
  IndexNode d{IK::SetEnum};
  d.kids = std::move(elems);
  return mkI(std::move(d));
}
Index iInterval(Index lo, Index hi) {
  IndexNode d{IK::Interval};
  d.kids = {std::move(lo), std::move(hi)};
  return mkI(std::move(d));
}
Index iIntervalInf(Index lo) {
  IndexNode d{IK::IntervalInf};
  d.kids = {std::move(lo)};
  return mkI(std::move(d));
}
Index iFullSet() { return mkI({IK::FullSet}); }
Index iEmptySet() { return mkI({IK::EmptySet}); }

bool indexEq(const Index& a, const Index& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case IK::Var: return a->var == b->var;
    case IK::Nat:
    case IK::RealC: return a->num == b->num;
    case IK::BoolC: return a->bval == b->bval;
    default: break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!indexEq(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constraint constructors
// ---------------------------------------------------------------------------

static Constraint mkC(ConstraintNode n) { return std::make_shared<const ConstraintNode>(std::move(n)); }

Constraint cTrue() {
  static Constraint t = mkC({CK::True});
  return t;
}
Constraint cFalse() {
  static Constraint f = mkC({CK::False});
  return f;
}
Constraint cAtom(CK k, Index l, Index r) {
  ConstraintNode n{k};
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return mkC(std::move(n));
}
Constraint cNot(Constraint c) {
  if (c->kind == CK::True) return cFalse();
  if (c->kind == CK::False) return cTrue();
  if (c->kind == CK::Not) return c->a;
  ConstraintNode n{CK::Not};
  n.a = std::move(c);
  return mkC(std::move(n));
}
Constraint cAnd(Constraint a, Constraint b) {
  if (a->kind == CK::True) return b;
  if (b->kind == CK::True) return a;
  if (a->kind == CK::False || b->kind == CK::False) return cFalse();
  ConstraintNode n{CK::And};
  n.a = std::move(a);
  n.b = std::move(b);
  return mkC(std::move(n));
}
Constraint cImplies(Constraint a, Constraint b) {
  if (a->kind == CK::True) return b;
  if (b->kind == CK::True) return cTrue();
  if (a->kind == CK::False) return cTrue();
  ConstraintNode n{CK::Implies};
  n.a = std::move(a);
  n.b = std::move(b);
  return mkC(std::move(n));
}
Constraint cExists(Symbol v, Sort s, Constraint body) {
  if (body->kind == CK::True) return body;
  ConstraintNode n{CK::Exists};
  n.var = v;
  n.sort = s;
  n.a = std::move(body);
  return mkC(std::move(n));
}
Constraint cForall(Symbol v, Sort s, Constraint body) {
  if (body->kind == CK::True) return body;
  ConstraintNode n{CK::Forall};
  n.var = v;
  n.sort = s;
  n.a = std::move(body);
  return mkC(std::move(n));
}
Constraint cAndAll(const std::vector<Constraint>& cs) {
  Constraint r = cTrue();
  for (const auto& c : cs) r = cAnd(r, c);
  return r;
}

bool constraintEq(const Constraint& a, const Constraint& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case CK::True:
    case CK::False: return true;
    case CK::Eq:
    case CK::Lt:
    case CK::Le:
    case CK::Mem:
    case CK::SetEq:
    case CK::Subset: return indexEq(a->lhs, b->lhs) && indexEq(a->rhs, b->rhs);
    case CK::Not: return constraintEq(a->a, b->a);
    case CK::And:
    case CK::Implies: return constraintEq(a->a, b->a) && constraintEq(a->b, b->b);
    case CK::Exists:
    case CK::Forall:
      return a->var == b->var && a->sort == b->sort && constraintEq(a->a, b->a);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Assertions
// ---------------------------------------------------------------------------

static bool symLess(Symbol a, Symbol b) { return symName(a) < symName(b); }

bool Assertion::has(Symbol g) const { return find(g) != nullptr; }
const Index* Assertion::find(Symbol g) const {
  for (auto& e : entries)
    if (e.first == g) return &e.second;
  return nullptr;
}
Assertion Assertion::with(Symbol g, Index beta) const {
  Assertion r;
  bool placed = false;
  for (auto& e : entries) {
    if (e.first == g) {
      r.entries.emplace_back(g, beta);
      placed = true;
    } else {
      r.entries.push_back(e);
    }
  }
  if (!placed) {
    r.entries.emplace_back(g, beta);
    std::sort(r.entries.begin(), r.entries.end(),
              [](auto& a, auto& b) { return symLess(a.first, b.first); });
  }
  return r;
}
Assertion Assertion::without(Symbol g) const {
  Assertion r;
  for (auto& e : entries)
    if (e.first != g) r.entries.push_back(e);
  return r;
}
Assertion Assertion::restrict(const std::set<Symbol>& domSet) const {
  Assertion r;
  for (auto& e : entries)
    if (domSet.count(e.first)) r.entries.push_back(e);
  return r;
}
Assertion Assertion::star(const Assertion& other) const {
  Assertion r = *this;
  for (auto& e : other.entries) {
    if (r.has(e.first))
      fail("DuplicateAssertionName", "star-composition on overlapping name " + symName(e.first));
    r.entries.push_back(e);
  }
  std::sort(r.entries.begin(), r.entries.end(),
            [](auto& a, auto& b) { return symLess(a.first, b.first); });
  return r;
}
std::set<Symbol> Assertion::dom() const {
  std::set<Symbol> s;
  for (auto& e : entries) s.insert(e.first);
  return s;
}

Assertion assertionJoin(const Assertion& p, const Assertion& q) {
  Assertion r = p;
  for (auto& e : q.entries) {
    if (const Index* b = r.find(e.first))
      r = r.with(e.first, iBin(IK::Union, *b, e.second));
    else
      r = r.with(e.first, e.second);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Type constructors
// ---------------------------------------------------------------------------

static UTy mkU(UTypeNode n) { return std::make_shared<const UTypeNode>(std::move(n)); }
static RTy mkR(RTypeNode n) { return std::make_shared<const RTypeNode>(std::move(n)); }

UTy uUnit() { return mkU({UK::Unit}); }
UTy uBool(Constraint ref) {
  UTypeNode n{UK::Bool};
  n.boolRef = std::move(ref);
  return mkU(std::move(n));
}
UTy uInt(Index ref) {
  UTypeNode n{UK::Int};
  n.intRef = std::move(ref);
  return mkU(std::move(n));
}
UTy uReal() { return mkU({UK::Real}); }
UTy uMonad(Assertion pre, std::vector<Symbol> gammas, UTy inner, Assertion post, Index lo, Index hi) {
  UTypeNode n{UK::Monad};
  n.pre = std::move(pre);
  n.post = std::move(post);
  n.gammas = std::move(gammas);
  n.inner = std::move(inner);
  n.lo = std::move(lo);
  n.hi = std::move(hi);
  return mkU(std::move(n));
}
UTy uForall(Symbol v, Sort s, Index lo, Index hi, UTy body) {
  UTypeNode n{UK::Forall};
  n.var = v;
  n.sort = s;
  n.lo = std::move(lo);
  n.hi = std::move(hi);
  n.inner = std::move(body);
  return mkU(std::move(n));
}
UTy uExists(Symbol v, Sort s, UTy body) {
  UTypeNode n{UK::Exists};
  n.var = v;
  n.sort = s;
  n.inner = std::move(body);
  return mkU(std::move(n));
}
UTy uArrow(UTy dom, Index lo, Index hi, UTy cod) {
  UTypeNode n{UK::Arrow};
  n.a = std::move(dom);
  n.lo = std::move(lo);
  n.hi = std::move(hi);
  n.inner = std::move(cod);
  return mkU(std::move(n));
}
UTy uArray(Symbol gamma, Index len, UTy elem) {
  UTypeNode n{UK::Array};
  n.gamma = gamma;
  n.len = std::move(len);
  n.inner = std::move(elem);
  return mkU(std::move(n));
}
UTy uList(Index len, UTy elem) {
  UTypeNode n{UK::List};
  n.len = std::move(len);
  n.inner = std::move(elem);
  return mkU(std::move(n));
}
UTy uSum(UTy l, UTy r) {
  UTypeNode n{UK::Sum};
  n.a = std::move(l);
  n.inner = std::move(r);
  return mkU(std::move(n));
}
UTy uCAnd(Constraint c, UTy t) {
  UTypeNode n{UK::CAnd};
  n.cnstr = std::move(c);
  n.inner = std::move(t);
  return mkU(std::move(n));
}
UTy uCImpl(Constraint c, UTy t) {
  UTypeNode n{UK::CImpl};
  n.cnstr = std::move(c);
  n.inner = std::move(t);
  return mkU(std::move(n));
}

RTy rUnit() { return mkR({RK::Unit}); }
RTy rBool(Constraint ref) {
  RTypeNode n{RK::Bool};
  n.boolRef = std::move(ref);
  return mkR(std::move(n));
}
RTy rInt(Index ref) {
  RTypeNode n{RK::Int};
  n.intRef = std::move(ref);
  return mkR(std::move(n));
}
RTy rReal() { return mkR({RK::Real}); }
RTy rMonad(Assertion pre, std::vector<Symbol> gammas, RTy inner, Assertion post, Index d) {
  RTypeNode n{RK::Monad};
  n.pre = std::move(pre);
  n.post = std::move(post);
  n.gammas = std::move(gammas);
  n.inner = std::move(inner);
  n.d = std::move(d);
  return mkR(std::move(n));
}
RTy rForall(Symbol v, Sort s, Index d, RTy body) {
  RTypeNode n{RK::Forall};
  n.var = v;
  n.sort = s;
  n.d = std::move(d);
  n.inner = std::move(body);
  return mkR(std::move(n));
}
RTy rExists(Symbol v, Sort s, RTy body) {
  RTypeNode n{RK::Exists};
  n.var = v;
  n.sort = s;
  n.inner = std::move(body);
  return mkR(std::move(n));
}
RTy rArrow(RTy dom, Index d, RTy cod) {
  RTypeNode n{RK::Arrow};
  n.a = std::move(dom);
  n.d = std::move(d);
  n.inner = std::move(cod);
  return mkR(std::move(n));
}
RTy rArray(Symbol gamma, Index len, RTy elem) {
  RTypeNode n{RK::Array};
  n.gamma = gamma;
  n.len = std::move(len);
  n.inner = std::move(elem);
  return mkR(std::move(n));
}
RTy rList(Index len, Index alpha, RTy elem) {
  RTypeNode n{RK::List};
  n.len = std::move(len);
  n.alpha = std::move(alpha);
  n.inner = std::move(elem);
  return mkR(std::move(n));
}
RTy rSum(RTy l, RTy r) {
  RTypeNode n{RK::Sum};
  n.a = std::move(l);
  n.inner = std::move(r);
  return mkR(std::move(n));
}
RTy rCAnd(Constraint c, RTy t) {
  RTypeNode n{RK::CAnd};
  n.cnstr = std::move(c);
  n.inner = std::move(t);
  return mkR(std::move(n));
}
RTy rCImpl(Constraint c, RTy t) {
  RTypeNode n{RK::CImpl};
  n.cnstr = std::move(c);
  n.inner = std::move(t);
  return mkR(std::move(n));
}
RTy rU(UTy a1, UTy a2) {
  RTypeNode n{RK::U};
  n.u1 = std::move(a1);
  n.u2 = std::move(a2);
  return mkR(std::move(n));
}
RTy rBox(RTy t) {
  if (t->kind == RK::Box) return t;
  RTypeNode n{RK::Box};
  n.inner = std::move(t);
  return mkR(std::move(n));
}

// ---------------------------------------------------------------------------
// Term constructors
// ---------------------------------------------------------------------------

Term mk(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

Term tVar(Symbol s, Span sp) {
  TermNode n{TK::Var, sp};
  n.x = s;
  return mk(std::move(n));
}
Term tInt(long long v, Span sp) {
  TermNode n{TK::IntL, sp};
  n.intVal = v;
  return mk(std::move(n));
}
Term tReal(const Rat& r, Span sp) {
  TermNode n{TK::RealL, sp};
  n.ratVal = r;
  return mk(std::move(n));
}
Term tBool(bool b, Span sp) {
  TermNode n{TK::BoolL, sp};
  n.boolVal = b;
  return mk(std::move(n));
}
Term tUnit(Span sp) { return mk({TK::UnitL, sp}); }
Term tLam(Symbol x, Term body, Span sp) {
  TermNode n{TK::Lam, sp};
  n.x = x;
  n.t0 = std::move(body);
  return mk(std::move(n));
}
Term tFix(Symbol f, Symbol x, Term body, Span sp) {
  TermNode n{TK::Fix, sp};
  n.f = f;
  n.x = x;
  n.t0 = std::move(body);
  return mk(std::move(n));
}
Term tApp(Term f, Term a, Span sp) {
  TermNode n{TK::App, sp};
  n.t0 = std::move(f);
  n.t1 = std::move(a);
  return mk(std::move(n));
}
Term tLet(Symbol x, Term t1, Term t2, Span sp) {
  TermNode n{TK::Let, sp};
  n.x = x;
  n.t0 = std::move(t1);
  n.t1 = std::move(t2);
  return mk(std::move(n));
}
Term tInl(Term t, Span sp) {
  TermNode n{TK::Inl, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tInr(Term t, Span sp) {
  TermNode n{TK::Inr, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tCase(Term t, Symbol x, Term t1, Symbol y, Term t2, Span sp) {
  TermNode n{TK::Case, sp};
  n.t0 = std::move(t);
  n.x = x;
  n.t1 = std::move(t1);
  n.f = y;
  n.t2 = std::move(t2);
  return mk(std::move(n));
}
Term tIf(Term c, Term t1, Term t2, Span sp) {
  TermNode n{TK::If, sp};
  n.t0 = std::move(c);
  n.t1 = std::move(t1);
  n.t2 = std::move(t2);
  return mk(std::move(n));
}
Term tILam(Symbol i, Sort s, Term body, Span sp) {
  TermNode n{TK::ILam, sp};
  n.x = i;
  n.sort = s;
  n.t0 = std::move(body);
  return mk(std::move(n));
}
Term tIApp(Term t, Index idx, Span sp) {
  TermNode n{TK::IApp, sp};
  n.t0 = std::move(t);
  n.idx = std::move(idx);
  return mk(std::move(n));
}
Term tPack(Term t, Span sp) {
  TermNode n{TK::Pack, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tUnpack(Term t1, Symbol x, Term t2, Span sp) {
  TermNode n{TK::Unpack, sp};
  n.t0 = std::move(t1);
  n.x = x;
  n.t1 = std::move(t2);
  return mk(std::move(n));
}
Term tCElim(Term t, Span sp) {
  TermNode n{TK::CElim, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tRet(Term t, Span sp) {
  TermNode n{TK::Ret, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tBind(Symbol x, Term t1, Term t2, Span sp) {
  TermNode n{TK::Bind, sp};
  n.x = x;
  n.t0 = std::move(t1);
  n.t1 = std::move(t2);
  return mk(std::move(n));
}
Term tAlloc(Term len, Term v, bool boxed, Span sp) {
  TermNode n{TK::Alloc, sp};
  n.t0 = std::move(len);
  n.t1 = std::move(v);
  n.boxed = boxed;
  return mk(std::move(n));
}
Term tRead(Term a, Term i, bool boxed, Span sp) {
  TermNode n{TK::Read, sp};
  n.t0 = std::move(a);
  n.t1 = std::move(i);
  n.boxed = boxed;
  return mk(std::move(n));
}
Term tUpdt(Term a, Term i, Term v, bool boxed, Span sp) {
  TermNode n{TK::Updt, sp};
  n.t0 = std::move(a);
  n.t1 = std::move(i);
  n.t2 = std::move(v);
  n.boxed = boxed;
  return mk(std::move(n));
}
Term tLoc(long long id, Span sp) {
  TermNode n{TK::Loc, sp};
  n.intVal = id;
  return mk(std::move(n));
}
Term tSwitch(Term t, Span sp) {
  TermNode n{TK::Switch, sp};
  n.t0 = std::move(t);
  return mk(std::move(n));
}
Term tSplit(Term t, Constraint c, Span sp) {
  TermNode n{TK::Split, sp};
  n.t0 = std::move(t);
  n.cnstr = std::move(c);
  return mk(std::move(n));
}
Term tFixExt(Symbol f, Symbol x, Term body, UTy a1, UTy a2, Span sp) {
  TermNode n{TK::FixExt, sp};
  n.f = f;
  n.x = x;
  n.t0 = std::move(body);
  n.uty = std::move(a1);
  n.uty2 = std::move(a2);
  return mk(std::move(n));
}
Term tAscribe(Term t, UTy u, RTy r, Span sp) {
  TermNode n{TK::Ascribe, sp};
  n.t0 = std::move(t);
  n.uty = std::move(u);
  n.rty = std::move(r);
  return mk(std::move(n));
}
Term tPrim(PrimOp op, std::vector<Term> args, Span sp) {
  TermNode n{TK::Prim, sp};
  n.prim = op;
  n.args = std::move(args);
  return mk(std::move(n));
}

// ---------------------------------------------------------------------------
// Substitution over index terms
// ---------------------------------------------------------------------------

Index substIndex(const Index& t, const IndexSubst& m) {
  if (!t) return t;
  switch (t->kind) {
    case IK::Var: {
      auto it = m.find(t->var);
      return it == m.end() ? t : it->second;
    }
    case IK::Nat:
    case IK::RealC:
    case IK::BoolC:
    case IK::Infty:
    case IK::FullSet:
    case IK::EmptySet:
      return t;
    default: {
      IndexNode n = *t;
      bool changed = false;
      for (auto& k : n.kids) {
        Index nk = substIndex(k, m);
        if (nk != k) changed = true;
        k = nk;
      }
      return changed ? mkI(std::move(n)) : t;
    }
  }
}

Constraint substConstraint(const Constraint& c, const IndexSubst& m) {
  if (!c || m.empty()) return c;
  switch (c->kind) {
    case CK::True:
    case CK::False:
      return c;
    case CK::Eq:
    case CK::Lt:
    case CK::Le:
    case CK::Mem:
    case CK::SetEq:
    case CK::Subset:
      return cAtom(c->kind, substIndex(c->lhs, m), substIndex(c->rhs, m));
    case CK::Not:
      return cNot(substConstraint(c->a, m));
    case CK::And:
      return cAnd(substConstraint(c->a, m), substConstraint(c->b, m));
    case CK::Implies:
      return cImplies(substConstraint(c->a, m), substConstraint(c->b, m));
    case CK::Exists:
    case CK::Forall: {
      IndexSubst m2 = m;
      m2.erase(c->var);
      // capture check: rename bound var if it appears in any replacement
      Symbol v = c->var;
      bool captured = false;
      for (auto& [k, rep] : m2) {
        std::set<Symbol> fv;
        freeIndexVars(rep, fv);
        if (fv.count(v)) captured = true;
      }
      Constraint body = c->a;
      if (captured) {
        Symbol v2 = freshSym(symName(v));
        IndexSubst rn{{v, iVar(v2)}};
        body = substConstraint(body, rn);
        v = v2;
      }
      Constraint nb = substConstraint(body, m2);
      return c->kind == CK::Exists ? cExists(v, c->sort, nb) : cForall(v, c->sort, nb);
    }
  }
  return c;
}

Assertion substAssertion(const Assertion& a, const IndexSubst& m) {
  Assertion r;
  for (auto& e : a.entries) {
    Symbol g = e.first;
    auto it = m.find(g);
    if (it != m.end() && it->second->kind == IK::Var) g = it->second->var;
    r.entries.emplace_back(g, substIndex(e.second, m));
  }
  std::sort(r.entries.begin(), r.entries.end(),
            [](auto& x, auto& y) { return symLess(x.first, y.first); });
  return r;
}

UTy substUTy(const UTy& t, const IndexSubst& m) {
  if (!t || m.empty()) return t;
  UTypeNode n = *t;
  n.boolRef = n.boolRef ? substConstraint(n.boolRef, m) : nullptr;
  n.intRef = n.intRef ? substIndex(n.intRef, m) : nullptr;
  n.pre = substAssertion(n.pre, m);
  n.post = substAssertion(n.post, m);
  if (n.kind == UK::Forall || n.kind == UK::Exists) {
    IndexSubst m2 = m;
    m2.erase(n.var);
    n.lo = n.lo ? substIndex(n.lo, m2) : nullptr;
    n.hi = n.hi ? substIndex(n.hi, m2) : nullptr;
    n.inner = n.inner ? substUTy(n.inner, m2) : nullptr;
    return mkU(std::move(n));
  }
  n.lo = n.lo ? substIndex(n.lo, m) : nullptr;
  n.hi = n.hi ? substIndex(n.hi, m) : nullptr;
  n.len = n.len ? substIndex(n.len, m) : nullptr;
  n.cnstr = n.cnstr ? substConstraint(n.cnstr, m) : nullptr;
  n.a = n.a ? substUTy(n.a, m) : nullptr;
  if (n.kind == UK::Monad) {
    IndexSubst m2 = m;
    for (auto g : n.gammas) m2.erase(g);
    n.inner = n.inner ? substUTy(n.inner, m2) : nullptr;
    n.post = substAssertion(t->post, m2);
  } else {
    n.inner = n.inner ? substUTy(n.inner, m) : nullptr;
  }
  if (n.kind == UK::Array) {
    auto it = m.find(n.gamma);
    if (it != m.end() && it->second->kind == IK::Var) n.gamma = it->second->var;
  }
  return mkU(std::move(n));
}

RTy substRTy(const RTy& t, const IndexSubst& m) {
  if (!t || m.empty()) return t;
  RTypeNode n = *t;
  n.boolRef = n.boolRef ? substConstraint(n.boolRef, m) : nullptr;
  n.intRef = n.intRef ? substIndex(n.intRef, m) : nullptr;
  n.pre = substAssertion(n.pre, m);
  n.post = substAssertion(n.post, m);
  if (n.kind == RK::Forall || n.kind == RK::Exists) {
    IndexSubst m2 = m;
    m2.erase(n.var);
    n.d = n.d ? substIndex(n.d, m2) : nullptr;
    n.inner = n.inner ? substRTy(n.inner, m2) : nullptr;
    return mkR(std::move(n));
  }
  n.d = n.d ? substIndex(n.d, m) : nullptr;
  n.len = n.len ? substIndex(n.len, m) : nullptr;
  n.alpha = n.alpha ? substIndex(n.alpha, m) : nullptr;
  n.cnstr = n.cnstr ? substConstraint(n.cnstr, m) : nullptr;
  n.a = n.a ? substRTy(n.a, m) : nullptr;
  n.u1 = n.u1 ? substUTy(n.u1, m) : nullptr;
  n.u2 = n.u2 ? substUTy(n.u2, m) : nullptr;
  if (n.kind == RK::Monad) {
    IndexSubst m2 = m;
    for (auto g : n.gammas) m2.erase(g);
    n.inner = n.inner ? substRTy(n.inner, m2) : nullptr;
    n.post = substAssertion(t->post, m2);
  } else {
    n.inner = n.inner ? substRTy(n.inner, m) : nullptr;
  }
  if (n.kind == RK::Array) {
    auto it = m.find(n.gamma);
    if (it != m.end() && it->second->kind == IK::Var) n.gamma = it->second->var;
  }
  return mkR(std::move(n));
}

Term substTermIndex(const Term& t, const IndexSubst& m) {
  if (!t || m.empty()) return t;
  TermNode n = *t;
  n.t0 = n.t0 ? substTermIndex(n.t0, m) : nullptr;
  n.t1 = n.t1 ? substTermIndex(n.t1, m) : nullptr;
  n.t2 = n.t2 ? substTermIndex(n.t2, m) : nullptr;
  n.idx = n.idx ? substIndex(n.idx, m) : nullptr;
  n.cnstr = n.cnstr ? substConstraint(n.cnstr, m) : nullptr;
  n.uty = n.uty ? substUTy(n.uty, m) : nullptr;
  n.uty2 = n.uty2 ? substUTy(n.uty2, m) : nullptr;
  n.rty = n.rty ? substRTy(n.rty, m) : nullptr;
  for (auto& a : n.args) a = substTermIndex(a, m);
  return mk(std::move(n));
}

// ---------------------------------------------------------------------------
// Term substitution (capture-avoiding)
// ---------------------------------------------------------------------------

void freeTermVars(const Term& t, std::set<Symbol>& out) {
  if (!t) return;
  switch (t->kind) {
    case TK::Var:
      out.insert(t->x);
      return;
    case TK::Lam: {
      std::set<Symbol> inner;
      freeTermVars(t->t0, inner);
      inner.erase(t->x);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case TK::Fix:
    case TK::FixExt: {
      std::set<Symbol> inner;
      freeTermVars(t->t0, inner);
      inner.erase(t->x);
      inner.erase(t->f);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case TK::Let:
    case TK::Bind:
    case TK::Unpack: {
      freeTermVars(t->t0, out);
      std::set<Symbol> inner;
      freeTermVars(t->t1, inner);
      inner.erase(t->x);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case TK::Case: {
      freeTermVars(t->t0, out);
      std::set<Symbol> l, r;
      freeTermVars(t->t1, l);
      l.erase(t->x);
      freeTermVars(t->t2, r);
      r.erase(t->f);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      return;
    }
    default:
      for (const Term* c : {&t->t0, &t->t1, &t->t2})
        if (*c) freeTermVars(*c, out);
      for (auto& a : t->args) freeTermVars(a, out);
      return;
  }
}

namespace {
Term renameBound(const Term& body, Symbol oldv, Symbol newv) {
  TermSubst s{{oldv, tVar(newv)}};
  return substTerm(body, s);
}
}  // namespace

Term substTerm(const Term& t, const TermSubst& m) {
  if (!t || m.empty()) return t;
  switch (t->kind) {
    case TK::Var: {
      auto it = m.find(t->x);
      return it == m.end() ? t : it->second;
    }
    case TK::IntL:
    case TK::RealL:
    case TK::BoolL:
    case TK::UnitL:
    case TK::Loc:
      return t;
    default:
      break;
  }
  // free variables of the replacements, for capture avoidance
  std::set<Symbol> repFv;
  for (auto& [k, rep] : m) freeTermVars(rep, repFv);

  auto goUnder = [&](Term body, std::vector<Symbol*> binders, const TermSubst& base) -> Term {
    TermSubst m2 = base;
    for (Symbol* b : binders) m2.erase(*b);
    if (m2.empty()) return body;
    for (Symbol* b : binders) {
      if (repFv.count(*b)) {
        Symbol nb = freshSym(symName(*b));
        body = renameBound(body, *b, nb);
        *b = nb;
      }
    }
    return substTerm(body, m2);
  };

  TermNode n = *t;
  switch (t->kind) {
    case TK::Lam:
      n.t0 = goUnder(n.t0, {&n.x}, m);
      break;
    case TK::Fix:
    case TK::FixExt:
      n.t0 = goUnder(n.t0, {&n.f, &n.x}, m);
      break;
    case TK::Let:
    case TK::Bind:
    case TK::Unpack:
      n.t0 = substTerm(n.t0, m);
      n.t1 = goUnder(n.t1, {&n.x}, m);
      break;
    case TK::Case:
      n.t0 = substTerm(n.t0, m);
      n.t1 = goUnder(n.t1, {&n.x}, m);
      n.t2 = goUnder(n.t2, {&n.f}, m);
      break;
    default:
      n.t0 = n.t0 ? substTerm(n.t0, m) : nullptr;
      n.t1 = n.t1 ? substTerm(n.t1, m) : nullptr;
      n.t2 = n.t2 ? substTerm(n.t2, m) : nullptr;
      for (auto& a : n.args) a = substTerm(a, m);
      break;
  }
  return mk(std::move(n));
}

// ---------------------------------------------------------------------------
// Free index variables
// ---------------------------------------------------------------------------

void freeIndexVars(const Index& t, std::set<Symbol>& out) {
  if (!t) return;
  if (t->kind == IK::Var) {
    out.insert(t->var);
    return;
  }
  for (auto& k : t->kids) freeIndexVars(k, out);
}

void freeIndexVars(const Constraint& c, std::set<Symbol>& out) {
  if (!c) return;
  switch (c->kind) {
    case CK::True:
    case CK::False:
      return;
    case CK::Not:
      freeIndexVars(c->a, out);
      return;
    case CK::And:
    case CK::Implies:
      freeIndexVars(c->a, out);
      freeIndexVars(c->b, out);
      return;
    case CK::Exists:
    case CK::Forall: {
      std::set<Symbol> inner;
      freeIndexVars(c->a, inner);
      inner.erase(c->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      freeIndexVars(c->lhs, out);
      freeIndexVars(c->rhs, out);
      return;
  }
}

void freeIndexVars(const UTy& t, std::set<Symbol>& out) {
  if (!t) return;
  std::set<Symbol> inner;
  if (t->boolRef) freeIndexVars(t->boolRef, inner);
  if (t->intRef) freeIndexVars(t->intRef, inner);
  for (auto& e : t->pre.entries) {
    inner.insert(e.first);
    freeIndexVars(e.second, inner);
  }
  for (auto& e : t->post.entries) {
    inner.insert(e.first);
    freeIndexVars(e.second, inner);
  }
  if (t->lo) freeIndexVars(t->lo, inner);
  if (t->hi) freeIndexVars(t->hi, inner);
  if (t->len) freeIndexVars(t->len, inner);
  if (t->cnstr) freeIndexVars(t->cnstr, inner);
  if (t->a) freeIndexVars(t->a, inner);
  if (t->inner) freeIndexVars(t->inner, inner);
  if (t->kind == UK::Array) inner.insert(t->gamma);
  if (t->kind == UK::Forall || t->kind == UK::Exists) inner.erase(t->var);
  for (auto g : t->gammas) inner.erase(g);
  out.insert(inner.begin(), inner.end());
}

void freeIndexVars(const RTy& t, std::set<Symbol>& out) {
  if (!t) return;
  std::set<Symbol> inner;
  if (t->boolRef) freeIndexVars(t->boolRef, inner);
  if (t->intRef) freeIndexVars(t->intRef, inner);
  for (auto& e : t->pre.entries) {
    inner.insert(e.first);
    freeIndexVars(e.second, inner);
  }
  for (auto& e : t->post.entries) {
    inner.insert(e.first);
    freeIndexVars(e.second, inner);
  }
  if (t->d) freeIndexVars(t->d, inner);
  if (t->len) freeIndexVars(t->len, inner);
  if (t->alpha) freeIndexVars(t->alpha, inner);
  if (t->cnstr) freeIndexVars(t->cnstr, inner);
  if (t->a) freeIndexVars(t->a, inner);
  if (t->inner) freeIndexVars(t->inner, inner);
  if (t->u1) freeIndexVars(t->u1, inner);
  if (t->u2) freeIndexVars(t->u2, inner);
  if (t->kind == RK::Array) inner.insert(t->gamma);
  if (t->kind == RK::Forall || t->kind == RK::Exists) inner.erase(t->var);
  for (auto g : t->gammas) inner.erase(g);
  out.insert(inner.begin(), inner.end());
}

// ---------------------------------------------------------------------------
// Alpha equivalence of terms
// ---------------------------------------------------------------------------

namespace {
bool alphaEqGo(const Term& a, const Term& b, std::map<Symbol, Symbol>& ren) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->boxed != b->boxed) return false;
  auto varEq = [&](Symbol x, Symbol y) {
    auto it = ren.find(x);
    if (it != ren.end()) return it->second == y;
    return x == y;
  };
  switch (a->kind) {
    case TK::Var: return varEq(a->x, b->x);
    case TK::IntL: return a->intVal == b->intVal;
    case TK::RealL: return a->ratVal == b->ratVal;
    case TK::BoolL: return a->boolVal == b->boolVal;
    case TK::UnitL: return true;
    case TK::Loc: return a->intVal == b->intVal;
    case TK::Lam: {
      auto saved = ren;
      ren[a->x] = b->x;
      bool ok = alphaEqGo(a->t0, b->t0, ren);
      ren = saved;
      return ok;
    }
    case TK::Fix:
    case TK::FixExt: {
      auto saved = ren;
      ren[a->f] = b->f;
      ren[a->x] = b->x;
      bool ok = alphaEqGo(a->t0, b->t0, ren);
      ren = saved;
      return ok;
    }
    case TK::Let:
    case TK::Bind:
    case TK::Unpack: {
      if (!alphaEqGo(a->t0, b->t0, ren)) return false;
      auto saved = ren;
      ren[a->x] = b->x;
      bool ok = alphaEqGo(a->t1, b->t1, ren);
      ren = saved;
      return ok;
    }
    case TK::Case: {
      if (!alphaEqGo(a->t0, b->t0, ren)) return false;
      auto saved = ren;
      ren[a->x] = b->x;
      bool ok = alphaEqGo(a->t1, b->t1, ren);
      ren = saved;
      if (!ok) return false;
      ren[a->f] = b->f;
      ok = alphaEqGo(a->t2, b->t2, ren);
      ren = saved;
      return ok;
    }
    case TK::Prim: {
      if (a->prim != b->prim || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!alphaEqGo(a->args[i], b->args[i], ren)) return false;
      return true;
    }
    case TK::Split:
      if (!constraintEq(a->cnstr, b->cnstr)) return false;
      return alphaEqGo(a->t0, b->t0, ren);
    case TK::IApp:
      if (!indexEq(a->idx, b->idx)) return false;
      return alphaEqGo(a->t0, b->t0, ren);
    case TK::ILam: {
      if (a->x != b->x || a->sort != b->sort) return false;  // index binders compared nominally
      return alphaEqGo(a->t0, b->t0, ren);
    }
    default: {
      for (auto [ca, cb] : {std::pair{&a->t0, &b->t0}, {&a->t1, &b->t1}, {&a->t2, &b->t2}}) {
        if ((*ca == nullptr) != (*cb == nullptr)) return false;
        if (*ca && !alphaEqGo(*ca, *cb, ren)) return false;
      }
      return true;
    }
  }
}
}  // namespace

bool alphaEq(const Term& a, const Term& b) {
  std::map<Symbol, Symbol> ren;
  return alphaEqGo(a, b, ren);
}

// ---------------------------------------------------------------------------
// Context helpers
// ---------------------------------------------------------------------------

bool Ctx::locBound(Symbol g) const {
  for (auto s : sigma)
    if (s == g) return true;
  auto so = sortOf(g);
  return so && *so == Sort::Loc;
}
std::optional<Sort> Ctx::sortOf(Symbol s) const {
  if (auto d = delta.lookup(s)) return d;
  for (auto it = psi.rbegin(); it != psi.rend(); ++it)
    if (it->first == s) return it->second;
  return std::nullopt;
}
const UTy* Ctx::lookupU(Symbol x) const {
  for (auto it = omega.rbegin(); it != omega.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}
const RTy* Ctx::lookupR(Symbol x) const {
  for (auto it = gam.rbegin(); it != gam.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Projection |tau|_i
// ---------------------------------------------------------------------------

UTy projectType(const RTy& t, int side) {
  switch (t->kind) {
    case RK::Unit: return uUnit();
    case RK::Bool: return uBool(t->boolRef);
    case RK::Int: return uInt(t->intRef);
    case RK::Real: return uReal();
    case RK::Box: return projectType(t->inner, side);
    case RK::U: return side == 1 ? t->u1 : t->u2;
    case RK::Arrow:
      // relative cost is lost: the projected body cost is the trivial (0, inf)
      return uArrow(projectType(t->a, side), iNat(0), iInfty(), projectType(t->inner, side));
    case RK::Monad: {
      // relational beta is not a write permission; project to full permission
      Assertion pre, post;
      for (auto& e : t->pre.entries) pre.entries.emplace_back(e.first, iFullSet());
      for (auto& e : t->post.entries) post.entries.emplace_back(e.first, iFullSet());
      return uMonad(pre, t->gammas, projectType(t->inner, side), post, iNat(0), iInfty());
    }
    case RK::Forall:
      return uForall(t->var, t->sort, iNat(0), iInfty(), projectType(t->inner, side));
    case RK::Exists:
      return uExists(t->var, t->sort, projectType(t->inner, side));
    case RK::Array:
      return uArray(t->gamma, t->len, projectType(t->inner, side));
    case RK::List:
      return uList(t->len, projectType(t->inner, side));
    case RK::Sum:
      return uSum(projectType(t->a, side), projectType(t->inner, side));
    case RK::CAnd:
      return uCAnd(t->cnstr, projectType(t->inner, side));
    case RK::CImpl:
      return uCImpl(t->cnstr, projectType(t->inner, side));
  }
  fail("Internal", "projectType: unhandled kind");
}

std::vector<std::pair<Symbol, UTy>> projectEnv(const std::vector<std::pair<Symbol, RTy>>& g, int side) {
  std::vector<std::pair<Symbol, UTy>> out;
  out.reserve(g.size());
  for (auto& [x, t] : g) out.emplace_back(x, projectType(t, side));
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness
// ---------------------------------------------------------------------------

// Sorting judgment lives in index_engine.cpp; forward declared here.
Sort sortCheck(const Ctx& cx, const Index& t);
void wfConstraint(const Ctx& cx, const Constraint& c);

void wfAssertion(const Ctx& cx, const Assertion& p) {
  std::set<Symbol> seen;
  for (auto& [g, beta] : p.entries) {
    if (!cx.locBound(g))
      fail("UnboundLocation", "static name " + symName(g) + " not in scope");
    if (!seen.insert(g).second)
      fail("DuplicateAssertionName", symName(g) + " bound twice in assertion");
    Sort s = sortCheck(cx, beta);
    if (s != Sort::Set)
      fail("SortMismatch", "assertion for " + symName(g) + " must have sort P");
  }
}

void wfUTy(const Ctx& cx, const UTy& t) {
  if (!t) fail("Internal", "null unary type");
  auto numeric = [&](const Index& i, const char* what) {
    if (!i) return;
    Sort s = sortCheck(cx, i);
    if (s != Sort::Nat && s != Sort::Real)
      fail("SortMismatch", std::string(what) + " must have sort N or R");
  };
  switch (t->kind) {
    case UK::Unit:
    case UK::Real:
      return;
    case UK::Bool:
      if (t->boolRef) wfConstraint(cx, t->boolRef);
      return;
    case UK::Int:
      numeric(t->intRef, "int refinement");
      return;
    case UK::Monad: {
      wfAssertion(cx, t->pre);
      Ctx cx2 = cx;
      for (auto g : t->gammas) cx2.delta.push(g, Sort::Loc);
      wfAssertion(cx2, t->post);
      wfUTy(cx2, t->inner);
      numeric(t->lo, "cost bound");
      numeric(t->hi, "cost bound");
      return;
    }
    case UK::Forall:
    case UK::Exists: {
      Ctx cx2 = cx;
      cx2.delta.push(t->var, t->sort);
      if (t->lo) numeric(t->lo, "cost bound");
      if (t->hi) numeric(t->hi, "cost bound");
      wfUTy(cx2, t->inner);
      return;
    }
    case UK::Arrow:
      wfUTy(cx, t->a);
      numeric(t->lo, "cost bound");
      numeric(t->hi, "cost bound");
      wfUTy(cx, t->inner);
      return;
    case UK::Array: {
      if (!cx.locBound(t->gamma))
        fail("UnboundLocation", "array name " + symName(t->gamma) + " not in scope");
      Sort s = sortCheck(cx, t->len);
      if (s != Sort::Nat) fail("SortMismatch", "array length must have sort N");
      wfUTy(cx, t->inner);
      return;
    }
    case UK::List: {
      Sort s = sortCheck(cx, t->len);
      if (s != Sort::Nat) fail("SortMismatch", "list length must have sort N");
      wfUTy(cx, t->inner);
      return;
    }
    case UK::Sum:
      wfUTy(cx, t->a);
      wfUTy(cx, t->inner);
      return;
    case UK::CAnd:
    case UK::CImpl:
      wfConstraint(cx, t->cnstr);
      wfUTy(cx, t->inner);
      return;
  }
}

void wfRTy(const Ctx& cx, const RTy& t) {
  if (!t) fail("Internal", "null relational type");
  auto numeric = [&](const Index& i, const char* what) {
    if (!i) return;
    Sort s = sortCheck(cx, i);
    if (s != Sort::Nat && s != Sort::Real)
      fail("SortMismatch", std::string(what) + " must have sort N or R");
  };
  switch (t->kind) {
    case RK::Unit:
    case RK::Real:
      return;
    case RK::Bool:
      if (t->boolRef) wfConstraint(cx, t->boolRef);
      return;
    case RK::Int:
      numeric(t->intRef, "int refinement");
      return;
    case RK::Monad: {
      wfAssertion(cx, t->pre);
      Ctx cx2 = cx;
      for (auto g : t->gammas) cx2.delta.push(g, Sort::Loc);
      wfAssertion(cx2, t->post);
      wfRTy(cx2, t->inner);
      numeric(t->d, "relative cost");
      return;
    }
    case RK::Forall:
    case RK::Exists: {
      Ctx cx2 = cx;
      cx2.delta.push(t->var, t->sort);
      if (t->d) numeric(t->d, "relative cost");
      wfRTy(cx2, t->inner);
      return;
    }
    case RK::Arrow:
      wfRTy(cx, t->a);
      numeric(t->d, "relative cost");
      wfRTy(cx, t->inner);
      return;
    case RK::Array: {
      if (!cx.locBound(t->gamma))
        fail("UnboundLocation", "array name " + symName(t->gamma) + " not in scope");
      Sort s = sortCheck(cx, t->len);
      if (s != Sort::Nat) fail("SortMismatch", "array length must have sort N");
      wfRTy(cx, t->inner);
      return;
    }
    case RK::List: {
      if (sortCheck(cx, t->len) != Sort::Nat) fail("SortMismatch", "list length must have sort N");
      if (t->alpha && sortCheck(cx, t->alpha) != Sort::Nat)
        fail("SortMismatch", "list change bound must have sort N");
      wfRTy(cx, t->inner);
      return;
    }
    case RK::Sum:
      wfRTy(cx, t->a);
      wfRTy(cx, t->inner);
      return;
    case RK::CAnd:
    case RK::CImpl:
      wfConstraint(cx, t->cnstr);
      wfRTy(cx, t->inner);
      return;
    case RK::U:
      wfUTy(cx, t->u1);
      wfUTy(cx, t->u2);
      return;
    case RK::Box:
      wfRTy(cx, t->inner);
      return;
  }
}

}  // namespace arel
