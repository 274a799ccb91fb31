#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arel/rational.hpp"

namespace arel {

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

// Interned identifier. Fresh names come from a global atomic counter so
// alpha-renaming and fresh static names are race-free.
struct Symbol {
  uint32_t id = 0;
  bool operator==(const Symbol& o) const { return id == o.id; }
  bool operator!=(const Symbol& o) const { return id != o.id; }
  bool operator<(const Symbol& o) const { return id < o.id; }
};

Symbol intern(const std::string& name);
const std::string& symName(Symbol s);
Symbol freshSym(const std::string& base);

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

enum class Sort { Nat, Real, Bool, Set, Loc };
const char* sortName(Sort s);

// ---------------------------------------------------------------------------
// Index terms
// ---------------------------------------------------------------------------

enum class IK {
  Var, Nat, RealC, BoolC, Infty,
  Add, Sub, Mul, Div, IMax, IMin, Log2, Floor, Ceil,
  SetEnum, Union, Inter, SetDiff, Interval, IntervalInf,
  Card, MinSet, FullSet, EmptySet
};

struct IndexNode;
using Index = std::shared_ptr<const IndexNode>;

struct IndexNode {
  IK kind;
  Symbol var{};               // Var
  Rat num{};                  // Nat / RealC
  bool bval = false;          // BoolC
  std::vector<Index> kids;    // operands / set elements / interval bounds
};

Index iVar(Symbol s);
Index iNat(long long n);
Index iRat(const Rat& r);
Index iBool(bool b);
Index iInfty();
Index iBin(IK k, Index a, Index b);
Index iUn(IK k, Index a);
Index iSetEnum(std::vector<Index> elems);
Index iInterval(Index lo, Index hi);
Index iIntervalInf(Index lo);
Index iFullSet();
Index iEmptySet();
inline Index iAdd(Index a, Index b) { return iBin(IK::Add, a, b); }
inline Index iSub(Index a, Index b) { return iBin(IK::Sub, a, b); }
inline Index iMul(Index a, Index b) { return iBin(IK::Mul, a, b); }
inline Index iMaxT(Index a, Index b) { return iBin(IK::IMax, a, b); }
inline Index iMinT(Index a, Index b) { return iBin(IK::IMin, a, b); }
inline Index iCard(Index a) { return iUn(IK::Card, a); }
inline Index iMinSet(Index a) { return iUn(IK::MinSet, a); }

bool indexEq(const Index& a, const Index& b);  // structural equality

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

enum class CK { True, False, Eq, Lt, Le, Mem, SetEq, Subset, Not, And, Implies, Exists, Forall };

struct ConstraintNode;
using Constraint = std::shared_ptr<const ConstraintNode>;

struct ConstraintNode {
  CK kind;
  Index lhs, rhs;      // atoms
  Constraint a, b;     // Not(a) / And(a,b) / Implies(a,b) / quantifier body in a
  Symbol var{};        // quantifiers
  Sort sort = Sort::Nat;
};

Constraint cTrue();
Constraint cFalse();
Constraint cAtom(CK k, Index l, Index r);
inline Constraint cEq(Index l, Index r) { return cAtom(CK::Eq, l, r); }
inline Constraint cLe(Index l, Index r) { return cAtom(CK::Le, l, r); }
inline Constraint cLt(Index l, Index r) { return cAtom(CK::Lt, l, r); }
inline Constraint cMem(Index l, Index r) { return cAtom(CK::Mem, l, r); }
inline Constraint cSubset(Index l, Index r) { return cAtom(CK::Subset, l, r); }
inline Constraint cSetEq(Index l, Index r) { return cAtom(CK::SetEq, l, r); }
Constraint cNot(Constraint c);
Constraint cAnd(Constraint a, Constraint b);
Constraint cImplies(Constraint a, Constraint b);
Constraint cExists(Symbol v, Sort s, Constraint body);
Constraint cForall(Symbol v, Sort s, Constraint body);
Constraint cAndAll(const std::vector<Constraint>& cs);
bool constraintEq(const Constraint& a, const Constraint& b);

// ---------------------------------------------------------------------------
// Assertions: finite maps from static names to difference/permission sets.
// ---------------------------------------------------------------------------

struct Assertion {
  // Kept sorted by symbol name for deterministic printing and encoding.
  std::vector<std::pair<Symbol, Index>> entries;

  bool has(Symbol g) const;
  const Index* find(Symbol g) const;
  Assertion with(Symbol g, Index beta) const;     // add or replace
  Assertion without(Symbol g) const;
  Assertion restrict(const std::set<Symbol>& dom) const;
  Assertion star(const Assertion& other) const;   // disjoint union; throws on overlap
  std::set<Symbol> dom() const;
  bool empty() const { return entries.empty(); }
};

// Pointwise join (beta union) where domains overlap; used by the asynchronous
// monadic rules.
Assertion assertionJoin(const Assertion& p, const Assertion& q);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class UK { Unit, Bool, Int, Real, Monad, Forall, Exists, Arrow, Array, List, Sum, CAnd, CImpl };
enum class RK { Unit, Bool, Int, Real, Monad, Forall, Exists, Arrow, Array, List, Sum, CAnd, CImpl, U, Box };

struct UTypeNode;
struct RTypeNode;
using UTy = std::shared_ptr<const UTypeNode>;
using RTy = std::shared_ptr<const RTypeNode>;

struct UTypeNode {
  UK kind;
  Constraint boolRef;         // Bool refinement (null = unrefined)
  Index intRef;               // Int refinement (null = unrefined)
  Assertion pre, post;        // Monad
  std::vector<Symbol> gammas; // Monad: existential static names
  UTy inner;                  // Monad/Forall/Exists body, Arrow codomain, Array/List elem, Sum right, CAnd/CImpl body
  Index lo, hi;               // cost pair: Monad, Forall, Arrow
  Symbol var{};               // Forall/Exists binder
  Sort sort = Sort::Nat;
  UTy a;                      // Arrow domain, Sum left
  Symbol gamma{};             // Array static name
  Index len;                  // Array/List length
  Constraint cnstr;           // CAnd/CImpl
};

struct RTypeNode {
  RK kind;
  Constraint boolRef;
  Index intRef;
  Assertion pre, post;
  std::vector<Symbol> gammas;
  RTy inner;
  Index d;                    // relative cost: Monad, Forall, Arrow
  Symbol var{};
  Sort sort = Sort::Nat;
  RTy a;
  Symbol gamma{};
  Index len;
  Index alpha;                // List change bound
  Constraint cnstr;
  UTy u1, u2;                 // U(A1, A2)
};

// Unary constructors
UTy uUnit();
UTy uBool(Constraint ref = nullptr);
UTy uInt(Index ref = nullptr);
UTy uReal();
UTy uMonad(Assertion pre, std::vector<Symbol> gammas, UTy inner, Assertion post, Index lo, Index hi);
UTy uForall(Symbol v, Sort s, Index lo, Index hi, UTy body);
UTy uExists(Symbol v, Sort s, UTy body);
UTy uArrow(UTy dom, Index lo, Index hi, UTy cod);
UTy uArray(Symbol gamma, Index len, UTy elem);
UTy uList(Index len, UTy elem);
UTy uSum(UTy l, UTy r);
UTy uCAnd(Constraint c, UTy t);
UTy uCImpl(Constraint c, UTy t);

// Relational constructors
RTy rUnit();
RTy rBool(Constraint ref = nullptr);
RTy rInt(Index ref = nullptr);
RTy rReal();
RTy rMonad(Assertion pre, std::vector<Symbol> gammas, RTy inner, Assertion post, Index d);
RTy rForall(Symbol v, Sort s, Index d, RTy body);
RTy rExists(Symbol v, Sort s, RTy body);
RTy rArrow(RTy dom, Index d, RTy cod);
RTy rArray(Symbol gamma, Index len, RTy elem);
RTy rList(Index len, Index alpha, RTy elem);
RTy rSum(RTy l, RTy r);
RTy rCAnd(Constraint c, RTy t);
RTy rCImpl(Constraint c, RTy t);
RTy rU(UTy a1, UTy a2);
RTy rBox(RTy t);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Span {
  int line = 0, col = 0;
  bool known() const { return line > 0; }
};

enum class PrimOp { Add, Sub, Mul, Div, Lt, Le, EqI, And, Or, Not };
const char* primName(PrimOp p);

enum class TK {
  Var, IntL, RealL, BoolL, UnitL,
  Lam, Fix, App, Let, Inl, Inr, Case, If,
  ILam, IApp, Pack, Unpack, CElim,
  Ret, Bind, Alloc, Read, Updt, Loc,
  Switch, Split, FixExt, Ascribe, Prim
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TK kind;
  Span span;
  Symbol x{}, f{};            // binders; Var payload in x
  long long intVal = 0;       // IntL / Loc id
  Rat ratVal{};               // RealL
  bool boolVal = false;       // BoolL
  Term t0, t1, t2;            // children
  Index idx;                  // IApp
  Sort sort = Sort::Nat;      // ILam binder sort
  Constraint cnstr;           // Split
  UTy uty, uty2;              // FixExt ascriptions (null = take from declaration); Ascribe unary
  RTy rty;                    // Ascribe relational
  PrimOp prim = PrimOp::Add;
  std::vector<Term> args;     // Prim operands
  bool boxed = false;         // Alloc/Read/Updt boxed variants
};

Term mk(TermNode n);
Term tVar(Symbol s, Span sp = {});
Term tInt(long long v, Span sp = {});
Term tReal(const Rat& r, Span sp = {});
Term tBool(bool b, Span sp = {});
Term tUnit(Span sp = {});
Term tLam(Symbol x, Term body, Span sp = {});
Term tFix(Symbol f, Symbol x, Term body, Span sp = {});
Term tApp(Term f, Term a, Span sp = {});
Term tLet(Symbol x, Term t1, Term t2, Span sp = {});
Term tInl(Term t, Span sp = {});
Term tInr(Term t, Span sp = {});
Term tCase(Term t, Symbol x, Term t1, Symbol y, Term t2, Span sp = {});
Term tIf(Term c, Term t1, Term t2, Span sp = {});
Term tILam(Symbol i, Sort s, Term body, Span sp = {});
Term tIApp(Term t, Index idx, Span sp = {});
Term tPack(Term t, Span sp = {});
Term tUnpack(Term t1, Symbol x, Term t2, Span sp = {});
Term tCElim(Term t, Span sp = {});
Term tRet(Term t, Span sp = {});
Term tBind(Symbol x, Term t1, Term t2, Span sp = {});
Term tAlloc(Term n, Term v, bool boxed, Span sp = {});
Term tRead(Term a, Term i, bool boxed, Span sp = {});
Term tUpdt(Term a, Term i, Term v, bool boxed, Span sp = {});
Term tLoc(long long id, Span sp = {});
Term tSwitch(Term t, Span sp = {});
Term tSplit(Term t, Constraint c, Span sp = {});
Term tFixExt(Symbol f, Symbol x, Term body, UTy a1, UTy a2, Span sp = {});
Term tAscribe(Term t, UTy u, RTy r, Span sp = {});
Term tPrim(PrimOp op, std::vector<Term> args, Span sp = {});

// ---------------------------------------------------------------------------
// Substitution, free variables, alpha equivalence
// ---------------------------------------------------------------------------

using IndexSubst = std::map<Symbol, Index>;
using TermSubst = std::map<Symbol, Term>;

Index substIndex(const Index& t, const IndexSubst& m);
Constraint substConstraint(const Constraint& c, const IndexSubst& m);
Assertion substAssertion(const Assertion& a, const IndexSubst& m);
UTy substUTy(const UTy& t, const IndexSubst& m);
RTy substRTy(const RTy& t, const IndexSubst& m);
Term substTermIndex(const Term& t, const IndexSubst& m);   // index vars inside a term
Term substTerm(const Term& t, const TermSubst& m);         // capture-avoiding

void freeIndexVars(const Index& t, std::set<Symbol>& out);
void freeIndexVars(const Constraint& c, std::set<Symbol>& out);
void freeIndexVars(const UTy& t, std::set<Symbol>& out);
void freeIndexVars(const RTy& t, std::set<Symbol>& out);
void freeTermVars(const Term& t, std::set<Symbol>& out);

bool alphaEq(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Environments / contexts
// ---------------------------------------------------------------------------

struct SortEnv {
  std::vector<std::pair<Symbol, Sort>> items;
  std::optional<Sort> lookup(Symbol s) const {
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      if (it->first == s) return it->second;
    return std::nullopt;
  }
  void push(Symbol s, Sort so) { items.emplace_back(s, so); }
};

// Full checking context. Sigma lists static names in scope; Delta the sorted
// index variables (gamma::Loc entries land here when universally bound).
struct Ctx {
  std::vector<Symbol> sigma;
  SortEnv delta;
  std::vector<std::pair<Symbol, Sort>> psi;   // existential variables introduced
  std::vector<Constraint> phi;                // hypotheses
  std::vector<std::pair<Symbol, UTy>> omega;  // unary env
  std::vector<std::pair<Symbol, RTy>> gam;    // relational env

  bool locBound(Symbol g) const;
  std::optional<Sort> sortOf(Symbol s) const; // delta, then psi
  const UTy* lookupU(Symbol x) const;
  const RTy* lookupR(Symbol x) const;
  Constraint hypotheses() const { return cAndAll(phi); }
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ArelError : std::runtime_error {
  std::string category;
  Span span;
  ArelError(std::string cat, const std::string& msg, Span sp = {})
      : std::runtime_error(cat + ": " + msg), category(std::move(cat)), span(sp) {}
};

[[noreturn]] inline void fail(const std::string& cat, const std::string& msg, Span sp = {}) {
  throw ArelError(cat, msg, sp);
}

// ---------------------------------------------------------------------------
// Well-formedness and projection
// ---------------------------------------------------------------------------

void wfAssertion(const Ctx& cx, const Assertion& p);
void wfUTy(const Ctx& cx, const UTy& t);
void wfRTy(const Ctx& cx, const RTy& t);

// |tau|_i : relational types/environments to unary ones (side is 1 or 2).
UTy projectType(const RTy& t, int side);
std::vector<std::pair<Symbol, UTy>> projectEnv(const std::vector<std::pair<Symbol, RTy>>& g, int side);

}  // namespace arel
