#include "arel/pretty.hpp"

#include <sstream>

namespace arel {

// Precedence climbing for index terms: 0 add, 1 mul, 2 atoms. Set operators
// print fully parenthesized except chains of the same operator.
namespace {

std::string showIdx(const Index& t, int prec);

std::string showIdxBin(const Index& t, const char* op, int opPrec, int prec) {
  std::string s = showIdx(t->kids[0], opPrec) + " " + op + " " + showIdx(t->kids[1], opPrec + 1);
  if (opPrec < prec) return "(" + s + ")";
  return s;
}

std::string showIdx(const Index& t, int prec) {
  if (!t) return "<null>";
  switch (t->kind) {
    case IK::Var: return symName(t->var);
    case IK::Nat:
    case IK::RealC: return t->num.str();
    case IK::BoolC: return t->bval ? "btrue" : "bfalse";
    case IK::Infty: return "inf";
    case IK::Add: return showIdxBin(t, "+", 0, prec);
    case IK::Sub: return showIdxBin(t, "-", 0, prec);
    case IK::Mul: return showIdxBin(t, "*", 1, prec);
    case IK::Div: return showIdxBin(t, "/", 1, prec);
    case IK::IMax: return "max(" + showIdx(t->kids[0], 0) + ", " + showIdx(t->kids[1], 0) + ")";
    case IK::IMin: return "min(" + showIdx(t->kids[0], 0) + ", " + showIdx(t->kids[1], 0) + ")";
    case IK::Log2: return "log2(" + showIdx(t->kids[0], 0) + ")";
    case IK::Floor: return "floor(" + showIdx(t->kids[0], 0) + ")";
    case IK::Ceil: return "ceil(" + showIdx(t->kids[0], 0) + ")";
    case IK::SetEnum: {
      std::string s = "{";
      for (size_t i = 0; i < t->kids.size(); ++i)
        s += (i ? ", " : "") + showIdx(t->kids[i], 0);
      return s + "}";
    }
    case IK::Union: return showIdxBin(t, "\\/", 0, prec);
    case IK::Inter: return showIdxBin(t, "/\\", 1, prec);
    case IK::SetDiff: return showIdxBin(t, "\\", 1, prec);
    case IK::Interval:
      return "[" + showIdx(t->kids[0], 0) + ", " + showIdx(t->kids[1], 0) + "]";
    case IK::IntervalInf: return "[" + showIdx(t->kids[0], 0) + ", inf)";
    case IK::Card: return "card(" + showIdx(t->kids[0], 0) + ")";
    case IK::MinSet: return "minset(" + showIdx(t->kids[0], 0) + ")";
    case IK::FullSet: return "full";
    case IK::EmptySet: return "empty";
  }
  return "<?>";
}

std::string showC(const Constraint& c, int prec);

std::string showC(const Constraint& c, int prec) {
  if (!c) return "<null>";
  switch (c->kind) {
    case CK::True: return "true";
    case CK::False: return "false";
    case CK::Eq: return showIdx(c->lhs, 0) + " = " + showIdx(c->rhs, 0);
    case CK::Lt: return showIdx(c->lhs, 0) + " < " + showIdx(c->rhs, 0);
    case CK::Le: return showIdx(c->lhs, 0) + " <= " + showIdx(c->rhs, 0);
    case CK::Mem: return showIdx(c->lhs, 0) + " in " + showIdx(c->rhs, 0);
    case CK::SetEq: return showIdx(c->lhs, 0) + " = " + showIdx(c->rhs, 0);
    case CK::Subset: return showIdx(c->lhs, 0) + " sub " + showIdx(c->rhs, 0);
    case CK::Not: return "not (" + showC(c->a, 0) + ")";
    case CK::And: {
      std::string s = showC(c->a, 1) + " and " + showC(c->b, 1);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case CK::Implies: {
      std::string s = showC(c->a, 1) + " -> " + showC(c->b, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case CK::Exists: {
      std::string s = std::string("exists ") + symName(c->var) + "::" + sortName(c->sort) + ". " +
                      showC(c->a, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case CK::Forall: {
      std::string s = std::string("forall ") + symName(c->var) + "::" + sortName(c->sort) + ". " +
                      showC(c->a, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "<?>";
}

std::string showAssert(const Assertion& a) {
  std::string s;
  for (size_t i = 0; i < a.entries.size(); ++i) {
    if (i) s += ", ";
    s += symName(a.entries[i].first) + " -> " + showIdx(a.entries[i].second, 0);
  }
  return s;
}

bool isZeroIdx(const Index& i) {
  return i && (i->kind == IK::Nat || i->kind == IK::RealC) && i->num.isZero();
}

std::string showU(const UTy& t, int prec);
std::string showR(const RTy& t, int prec);

// prec: 0 = arrow level, 1 = sum level, 2 = atom
std::string showU(const UTy& t, int prec) {
  if (!t) return "<null>";
  switch (t->kind) {
    case UK::Unit: return "unit";
    case UK::Real: return "real";
    case UK::Bool: return t->boolRef ? "bool[" + showC(t->boolRef, 0) + "]" : "bool";
    case UK::Int: return t->intRef ? "int[" + showIdx(t->intRef, 0) + "]" : "int";
    case UK::Monad: {
      std::string s = "M{" + showAssert(t->pre) + "}[" + showIdx(t->lo, 0) + ", " +
                      showIdx(t->hi, 0) + "]{" + showAssert(t->post) + "}";
      if (!t->gammas.empty()) {
        s += " exists";
        for (auto g : t->gammas) s += " " + symName(g);
        s += ".";
      }
      s += " " + showU(t->inner, 2);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UK::Forall: {
      std::string s = std::string("forall ") + symName(t->var) + "::" + sortName(t->sort);
      if (!(isZeroIdx(t->lo) && isZeroIdx(t->hi)))
        s += " [" + showIdx(t->lo, 0) + ", " + showIdx(t->hi, 0) + "]";
      s += ". " + showU(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UK::Exists: {
      std::string s = std::string("exists ") + symName(t->var) + "::" + sortName(t->sort) + ". " +
                      showU(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UK::Arrow: {
      std::string arrow = isZeroIdx(t->lo) && isZeroIdx(t->hi)
                              ? " -> "
                              : " ->[" + showIdx(t->lo, 0) + ", " + showIdx(t->hi, 0) + "] ";
      std::string s = showU(t->a, 1) + arrow + showU(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UK::Array:
      return "Arr(" + symName(t->gamma) + ", " + showIdx(t->len, 0) + ", " + showU(t->inner, 0) + ")";
    case UK::List: return "List[" + showIdx(t->len, 0) + "] " + showU(t->inner, 2);
    case UK::Sum: {
      std::string s = showU(t->a, 2) + " + " + showU(t->inner, 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case UK::CAnd: {
      std::string s = "(" + showC(t->cnstr, 0) + ") & " + showU(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UK::CImpl: {
      std::string s = "(" + showC(t->cnstr, 0) + ") => " + showU(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "<?>";
}

std::string showR(const RTy& t, int prec) {
  if (!t) return "<null>";
  switch (t->kind) {
    case RK::Unit: return "unit";
    case RK::Real: return "real";
    case RK::Bool: return t->boolRef ? "bool[" + showC(t->boolRef, 0) + "]" : "bool";
    case RK::Int: return t->intRef ? "int[" + showIdx(t->intRef, 0) + "]" : "int";
    case RK::Monad: {
      std::string s = "M{" + showAssert(t->pre) + "}[" + showIdx(t->d, 0) + "]{" +
                      showAssert(t->post) + "}";
      if (!t->gammas.empty()) {
        s += " exists";
        for (auto g : t->gammas) s += " " + symName(g);
        s += ".";
      }
      s += " " + showR(t->inner, 2);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::Forall: {
      std::string s = std::string("forall ") + symName(t->var) + "::" + sortName(t->sort);
      if (!isZeroIdx(t->d)) s += " [" + showIdx(t->d, 0) + "]";
      s += ". " + showR(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::Exists: {
      std::string s = std::string("exists ") + symName(t->var) + "::" + sortName(t->sort) + ". " +
                      showR(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::Arrow: {
      std::string arrow = isZeroIdx(t->d) ? " -> " : " ->[" + showIdx(t->d, 0) + "] ";
      std::string s = showR(t->a, 1) + arrow + showR(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::Array:
      return "Arr(" + symName(t->gamma) + ", " + showIdx(t->len, 0) + ", " + showR(t->inner, 0) + ")";
    case RK::List:
      return "List[" + showIdx(t->len, 0) + "; " + showIdx(t->alpha, 0) + "] " + showR(t->inner, 2);
    case RK::Sum: {
      std::string s = showR(t->a, 2) + " + " + showR(t->inner, 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case RK::CAnd: {
      std::string s = "(" + showC(t->cnstr, 0) + ") & " + showR(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::CImpl: {
      std::string s = "(" + showC(t->cnstr, 0) + ") => " + showR(t->inner, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case RK::U: return "U(" + showU(t->u1, 0) + ", " + showU(t->u2, 0) + ")";
    case RK::Box: return "box " + showR(t->inner, 2);
  }
  return "<?>";
}

// Term precedence: 0 full, 1 comparisons, 2 additive, 3 multiplicative,
// 4 application, 5 atom.
std::string showT(const Term& t, int prec);

std::string showPrim(const Term& t, int prec) {
  auto bin = [&](const char* op, int p) {
    std::string s = showT(t->args[0], p) + " " + op + " " + showT(t->args[1], p + 1);
    return prec > p ? "(" + s + ")" : s;
  };
  switch (t->prim) {
    case PrimOp::Add: return bin("+", 2);
    case PrimOp::Sub: return bin("-", 2);
    case PrimOp::Mul: return bin("*", 3);
    case PrimOp::Div: return bin("/", 3);
    case PrimOp::Lt: return bin("<", 1);
    case PrimOp::Le: return bin("<=", 1);
    case PrimOp::EqI: return bin("==", 1);
    case PrimOp::And: return bin("&&", 1);
    case PrimOp::Or: return bin("||", 1);
    case PrimOp::Not: {
      std::string s = "! " + showT(t->args[0], 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
  }
  return "<?>";
}

std::string showT(const Term& t, int prec) {
  if (!t) return "<null>";
  switch (t->kind) {
    case TK::Var: return symName(t->x);
    case TK::IntL: return std::to_string(t->intVal);
    case TK::RealL: {
      // keep the real-literal marker so the parser reads it back as a real
      if (t->ratVal.isInteger()) return t->ratVal.str() + ".0";
      return "rat(" + std::to_string(t->ratVal.num()) + ", " + std::to_string(t->ratVal.den()) + ")";
    }
    case TK::BoolL: return t->boolVal ? "true" : "false";
    case TK::UnitL: return "()";
    case TK::Lam: {
      std::string s = "lam " + symName(t->x) + ". " + showT(t->t0, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::Fix: {
      std::string s = "fix " + symName(t->f) + "(" + symName(t->x) + "). " + showT(t->t0, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::FixExt: {
      std::string s = "fixext " + symName(t->f) + "(" + symName(t->x);
      if (t->uty) s += " : " + showU(t->uty, 0);
      s += "). " + showT(t->t0, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::App: {
      std::string s = showT(t->t0, 4) + " " + showT(t->t1, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Let: {
      std::string s = "let " + symName(t->x) + " = " + showT(t->t0, 0) + " in " + showT(t->t1, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::Bind: {
      std::string s =
          "let {" + symName(t->x) + "} = " + showT(t->t0, 0) + " in " + showT(t->t1, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::Inl: {
      std::string s = "inl " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Inr: {
      std::string s = "inr " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Case: {
      std::string s = "case " + showT(t->t0, 0) + " of { inl " + symName(t->x) + " -> " +
                      showT(t->t1, 0) + "; inr " + symName(t->f) + " -> " + showT(t->t2, 0) + " }";
      return s;
    }
    case TK::If: {
      std::string s = "if " + showT(t->t0, 1) + " then " + showT(t->t1, 0) + " else " +
                      showT(t->t2, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::ILam: {
      std::string s = "idxlam " + symName(t->x) + "::" + sortName(t->sort) + ". " + showT(t->t0, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::IApp: {
      std::string s = showT(t->t0, 4) + " [" + showIdx(t->idx, 0) + "]";
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Pack: {
      std::string s = "pack " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Unpack: {
      std::string s = "unpack " + showT(t->t0, 0) + " as " + symName(t->x) + " in " +
                      showT(t->t1, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case TK::CElim: {
      std::string s = "celim " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Ret: {
      std::string s = "return " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Alloc:
      return std::string(t->boxed ? "allocB" : "alloc") + "(" + showT(t->t0, 0) + ", " +
             showT(t->t1, 0) + ")";
    case TK::Read:
      return std::string(t->boxed ? "readB" : "read") + "(" + showT(t->t0, 0) + ", " +
             showT(t->t1, 0) + ")";
    case TK::Updt:
      return std::string(t->boxed ? "updtB" : "updt") + "(" + showT(t->t0, 0) + ", " +
             showT(t->t1, 0) + ", " + showT(t->t2, 0) + ")";
    case TK::Loc: return "<loc:" + std::to_string(t->intVal) + ">";
    case TK::Switch: {
      std::string s = "switch " + showT(t->t0, 5);
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Split: {
      std::string s = "split (" + showT(t->t0, 0) + ") with (" + showC(t->cnstr, 0) + ")";
      return prec > 4 ? "(" + s + ")" : s;
    }
    case TK::Ascribe:
      if (t->uty) return "(" + showT(t->t0, 0) + " :u " + showU(t->uty, 0) + ")";
      return "(" + showT(t->t0, 0) + " :r " + showR(t->rty, 0) + ")";
    case TK::Prim: return showPrim(t, prec);
  }
  return "<?>";
}

}  // namespace

std::string show(const Index& t) { return showIdx(t, 0); }
std::string show(const Constraint& c) { return showC(c, 0); }
std::string show(const Assertion& a) { return showAssert(a); }
std::string show(const UTy& t) { return showU(t, 0); }
std::string show(const RTy& t) { return showR(t, 0); }
std::string show(const Term& t) { return showT(t, 0); }

}  // namespace arel
