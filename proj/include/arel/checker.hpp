#pragma once

#include <functional>

#include "arel/index_engine.hpp"
#include "arel/interp.hpp"
#include "arel/parser.hpp"
#include "arel/syntax.hpp"

namespace arel {

struct CheckOptions {
  CostModel cm = CostModel::defaultModel();
  bool heuristicBox = true;  // try boxed array rules first, falling back
  int probeTimeoutMs = 1000;
  std::string solverCmd;  // used by the probe hook the driver installs
};

// Box-heuristic audit record.
struct BoxAttempt {
  std::string op;
  std::string sideCondition;
  double seconds = 0;
  bool boxed = false;
};

struct UnaryVerdict {
  UTy type;
  Index lo, hi;  // judgment cost bounds (synthesized in infer mode)
  Constraint phi;
};

struct RelVerdict {
  RTy type;
  Index d;  // judgment relative cost (synthesized)
  Constraint phi;
};

// Shared state for one declaration's check: options, probe access, fresh
// existential bookkeeping, instrumentation counters.
struct Checker {
  CheckOptions opts;
  // Entailment probe: returns true iff hyps |= c was established (by
  // simplification or by the installed solver hook). Never unsound: "false"
  // only means "not proved".
  std::function<bool(const Ctx&, const Constraint&, int timeoutMs)> probe;

  std::vector<std::pair<Symbol, Sort>> psi;  // open existentials (scoped stack)
  std::vector<BoxAttempt> boxLog;
  double probeSeconds = 0;
  int probeCount = 0;
  int annotationNodes = 0;  // switch/split/fixext seen (corpus #ESF analog)
  const Decl* currentDecl = nullptr;  // for fixext's implicit unary ascription

  Checker();

  Symbol freshVar(const char* base, Sort s) {
    Symbol v = freshSym(base);
    psi.push_back({v, s});
    return v;
  }
  size_t mark() const { return psi.size(); }
  // Закрывает existentials introduced past the mark around c.
  Constraint closeSince(size_t m, Constraint c) {
    for (size_t i = psi.size(); i > m; --i)
      c = cExists(psi[i - 1].first, psi[i - 1].second, c);
    psi.resize(m);
    return c;
  }

  bool entails(const Ctx& cx, const Constraint& c, int timeoutMs = 0);
};

// ---------------------------------------------------------------------------
// Subtyping (subtype.cpp). Both return the constraint whose validity implies
// the subtyping judgment; they throw StructuralMismatch on shape errors.
// ---------------------------------------------------------------------------

Constraint subtypeU(Checker& ck, Ctx& cx, const UTy& sub, const UTy& sup);
Constraint subtypeR(Checker& ck, Ctx& cx, const RTy& sub, const RTy& sup);

// tau <= box tau' side conditions: types whose relational interpretation is
// diagonal. Used by R-NC and by boxed-value checking.
bool diagonalType(const RTy& t);

// ---------------------------------------------------------------------------
// Unary checker (ucheck.cpp)
// ---------------------------------------------------------------------------

UnaryVerdict inferU(Checker& ck, Ctx& cx, const Term& t);
Constraint checkU(Checker& ck, Ctx& cx, const Term& t, const UTy& goal, const Index& lo,
                  const Index& hi);

// ---------------------------------------------------------------------------
// Relational checker (rcheck.cpp)
// ---------------------------------------------------------------------------

RelVerdict inferR(Checker& ck, Ctx& cx, const Term& t1, const Term& t2);
Constraint checkR(Checker& ck, Ctx& cx, const Term& t1, const Term& t2, const RTy& goal,
                  const Index& d);

// ---------------------------------------------------------------------------
// Declaration-level entry points (used by the driver): produce the closed
// verification condition  forall Delta. (hypotheses -> Phi).
// ---------------------------------------------------------------------------

Constraint checkDeclUnary(Checker& ck, const SourceProgram& prog, const Decl& d);
Constraint checkDeclRel(Checker& ck, const SourceProgram& prog, const Decl& d);

// Environment seeding shared by both: earlier declarations enter the
// relational env boxed (they are closed values, equal in both runs) and the
// unary env at their unary ascriptions.
void seedEnv(Ctx& cx, const SourceProgram& prog, const Decl& upTo);

}  // namespace arel
