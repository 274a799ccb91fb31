#pragma once

#include <optional>

#include "arel/syntax.hpp"

namespace arel {

// A top-level declaration: a named term with optional unary and relational
// type ascriptions. A file is one self-contained benchmark.
struct Decl {
  Symbol name{};
  UTy unary;  // may be null
  RTy rel;    // may be null
  Term body;
  Span span;
};

// @eval block: a designated term plus an optional initial heap.
struct EvalHeapEntry {
  Symbol name{};
  std::vector<long long> elems;
};
struct EvalSpec {
  std::vector<EvalHeapEntry> heap;
  Term run;
};

// @generator block: self-contained input generation for `arel relcost`.
struct GenParam {
  Symbol name{};
  Index lo, hi;                 // inclusive range; may mention earlier params
  std::vector<long long> choices;  // alternative: explicit choice list
};
struct GenSet {
  enum class Mode { Subset, SubsetNonempty, Empty, Full };
  Symbol name{};
  Mode mode = Mode::Subset;
  Index lo, hi;  // range the subset is drawn from
};
struct GenArray {
  Symbol name{};
  Symbol gamma{};       // the static name in the target's type this array instantiates
  Index length;
  long long elemLo = 0, elemHi = 9;
  Symbol beta{};        // differ exactly inside this set (optional)
  bool hasBeta = false;
  bool forced = false;  // at beta indices: left=forcedL, right=forcedR
  long long forcedL = 1, forcedR = 0;
};
struct GenFunArg {
  Symbol name{};
  Symbol leftDecl{}, rightDecl{};
};
struct GenApplyArg {
  bool isUnit = false;
  Symbol name{};
};
struct GeneratorSpec {
  int trials = 20;
  unsigned seed = 1;
  Symbol target{};
  std::vector<GenParam> params;
  std::vector<GenSet> sets;
  std::vector<GenArray> arrays;
  std::vector<GenFunArg> funargs;
  std::vector<std::pair<Symbol, Index>> rvals;  // extra index instantiations
  std::vector<GenApplyArg> apply;
  std::vector<std::pair<std::string, Rat>> costOverrides;
};

struct SourceProgram {
  std::vector<Decl> decls;
  std::optional<EvalSpec> eval;
  std::optional<GeneratorSpec> gen;

  const Decl* find(Symbol name) const {
    for (auto& d : decls)
      if (d.name == name) return &d;
    return nullptr;
  }
};

// Parses a whole benchmark file. Diagnostics carry line/column spans.
SourceProgram parseProgram(const std::string& text);

// Entry points used by tests and the round-trip property.
Term parseTermString(const std::string& text);
RTy parseRTyString(const std::string& text);
UTy parseUTyString(const std::string& text);
Index parseIndexString(const std::string& text);
Constraint parseConstraintString(const std::string& text);

}  // namespace arel
