#include "arel/parser.hpp"

#include <cctype>

namespace arel {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Int, Real, Punct, AtIdent, End
};

struct Token {
  Tok kind;
  std::string text;
  long long intVal = 0;
  Rat ratVal{};
  Span span;
};

struct Lexer {
  std::vector<Token> toks;

  explicit Lexer(const std::string& src) {
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string s, Span sp) {
      Token t{k, std::move(s)};
      t.span = sp;
      toks.push_back(std::move(t));
    };
    while (i < src.size()) {
      char c = src[i];
      Span sp{line, col};
      auto adv = [&](size_t n = 1) {
        for (size_t j = 0; j < n && i < src.size(); ++j) {
          if (src[i] == '\n') {
            ++line;
            col = 1;
          } else {
            ++col;
          }
          ++i;
        }
      };
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        adv();
        continue;
      }
      if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
        while (i < src.size() && src[i] != '\n') adv();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
          num += src[i];
          adv();
        }
        bool isReal = false;
        if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
          isReal = true;
          num += src[i];
          adv();
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
            num += src[i];
            adv();
          }
        }
        Token t{isReal ? Tok::Real : Tok::Int, num};
        t.span = sp;
        if (isReal)
          t.ratVal = Rat::fromString(num);
        else
          t.intVal = std::stoll(num);
        toks.push_back(std::move(t));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (i < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '\'' ||
                src[i] == '$')) {
          id += src[i];
          adv();
        }
        push(Tok::Ident, id, sp);
        continue;
      }
      if (c == '@') {
        adv();
        std::string id;
        while (i < src.size() && std::isalpha(static_cast<unsigned char>(src[i]))) {
          id += src[i];
          adv();
        }
        push(Tok::AtIdent, id, sp);
        continue;
      }
      // multi-char punctuation, longest match first
      static const char* multi[] = {"::", "->", "=>", "==", "<=", ">=", "&&", "||",
                                    "\\/", "/\\", "..", ":u", ":r"};
      bool matched = false;
      for (const char* m : multi) {
        size_t len = std::char_traits<char>::length(m);
        if (src.compare(i, len, m) == 0) {
          push(Tok::Punct, m, sp);
          adv(len);
          matched = true;
          break;
        }
      }
      if (matched) continue;
      push(Tok::Punct, std::string(1, c), sp);
      adv();
    }
    Token end{Tok::End, ""};
    end.span = {line, col};
    toks.push_back(std::move(end));
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  explicit Parser(const std::string& src) : toks(Lexer(src).toks) {}

  const Token& peek(size_t ahead = 0) const {
    size_t p = pos + ahead;
    return p < toks.size() ? toks[p] : toks.back();
  }
  const Token& cur() const { return peek(); }
  Span here() const { return cur().span; }
  bool atEnd() const { return cur().kind == Tok::End; }
  void advance() {
    if (pos + 1 < toks.size()) ++pos;
  }

  [[noreturn]] void err(const std::string& msg) {
    Span sp = here();
    fail("SyntaxError",
         msg + " at line " + std::to_string(sp.line) + ", column " + std::to_string(sp.col) +
             (cur().kind == Tok::End ? " (end of input)" : " (near '" + cur().text + "')"),
         sp);
  }

  bool isPunct(const std::string& p, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool isIdent(const std::string& id, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == id;
  }
  bool eatPunct(const std::string& p) {
    if (isPunct(p)) {
      advance();
      return true;
    }
    return false;
  }
  bool eatIdent(const std::string& id) {
    if (isIdent(id)) {
      advance();
      return true;
    }
    return false;
  }
  void expectPunct(const std::string& p) {
    if (!eatPunct(p)) err("expected '" + p + "'");
  }
  void expectIdent(const std::string& id) {
    if (!eatIdent(id)) err("expected '" + id + "'");
  }
  std::string expectAnyIdent() {
    if (cur().kind != Tok::Ident) err("expected an identifier");
    std::string s = cur().text;
    advance();
    return s;
  }

  // ---- sorts ----
  Sort parseSort() {
    std::string s = expectAnyIdent();
    if (s == "N") return Sort::Nat;
    if (s == "R") return Sort::Real;
    if (s == "B") return Sort::Bool;
    if (s == "P") return Sort::Set;
    if (s == "L") return Sort::Loc;
    err("expected a sort (N, R, B, P, L)");
  }

  // ---- index terms ----
  // precedence: 0 additive/union, 1 multiplicative/intersect/diff, 2 atom
  Index parseIndex(int prec = 0) {
    Index left = prec >= 1 ? parseIndexMul() : parseIndexAdd();
    return left;
  }

  Index parseIndexAdd() {
    Index l = parseIndexMul();
    for (;;) {
      if (isPunct("+")) {
        advance();
        l = iAdd(l, parseIndexMul());
      } else if (isPunct("-")) {
        advance();
        l = iSub(l, parseIndexMul());
      } else if (isPunct("\\/")) {
        advance();
        l = iBin(IK::Union, l, parseIndexMul());
      } else {
        return l;
      }
    }
  }

  Index parseIndexMul() {
    Index l = parseIndexAtom();
    for (;;) {
      if (isPunct("*")) {
        advance();
        l = iMul(l, parseIndexAtom());
      } else if (isPunct("/")) {
        advance();
        l = iBin(IK::Div, l, parseIndexAtom());
      } else if (isPunct("/\\")) {
        advance();
        l = iBin(IK::Inter, l, parseIndexAtom());
      } else if (isPunct("\\")) {
        advance();
        l = iBin(IK::SetDiff, l, parseIndexAtom());
      } else {
        return l;
      }
    }
  }

  Index parseIndexAtom() {
    if (cur().kind == Tok::Int) {
      long long v = cur().intVal;
      advance();
      return iNat(v);
    }
    if (cur().kind == Tok::Real) {
      Rat r = cur().ratVal;
      advance();
      return iRat(r);
    }
    if (eatPunct("-")) return iSub(iNat(0), parseIndexAtom());
    if (eatPunct("(")) {
      Index t = parseIndex();
      expectPunct(")");
      return t;
    }
    if (eatPunct("{")) {
      std::vector<Index> elems;
      if (!isPunct("}")) {
        elems.push_back(parseIndex());
        while (eatPunct(",")) elems.push_back(parseIndex());
      }
      expectPunct("}");
      return iSetEnum(std::move(elems));
    }
    if (eatPunct("[")) {
      Index lo = parseIndex();
      expectPunct(",");
      if (isIdent("inf")) {
        advance();
        expectPunct(")");
        return iIntervalInf(lo);
      }
      Index hi = parseIndex();
      expectPunct("]");
      return iInterval(lo, hi);
    }
    if (cur().kind == Tok::Ident) {
      std::string id = cur().text;
      auto fn1 = [&](IK k) {
        advance();
        expectPunct("(");
        Index a = parseIndex();
        expectPunct(")");
        return iUn(k, a);
      };
      auto fn2 = [&](IK k) {
        advance();
        expectPunct("(");
        Index a = parseIndex();
        expectPunct(",");
        Index b = parseIndex();
        expectPunct(")");
        return iBin(k, a, b);
      };
      if (id == "max") return fn2(IK::IMax);
      if (id == "min") return fn2(IK::IMin);
      if (id == "log2") return fn1(IK::Log2);
      if (id == "floor") return fn1(IK::Floor);
      if (id == "ceil") return fn1(IK::Ceil);
      if (id == "card") return fn1(IK::Card);
      if (id == "minset") return fn1(IK::MinSet);
      if (id == "full") {
        advance();
        return iFullSet();
      }
      if (id == "empty") {
        advance();
        return iEmptySet();
      }
      if (id == "inf") {
        advance();
        return iInfty();
      }
      if (id == "btrue") {
        advance();
        return iBool(true);
      }
      if (id == "bfalse") {
        advance();
        return iBool(false);
      }
      advance();
      return iVar(intern(id));
    }
    err("expected an index term");
  }

  // ---- constraints ----
  Constraint parseConstraint() {
    Constraint l = parseConstraintAnd();
    if (eatPunct("->")) return cImplies(l, parseConstraint());
    return l;
  }

  Constraint parseConstraintAnd() {
    Constraint l = parseConstraintAtom();
    while (isIdent("and")) {
      advance();
      l = cAnd(l, parseConstraintAtom());
    }
    return l;
  }

  Constraint parseConstraintAtom() {
    if (isIdent("true")) {
      advance();
      return cTrue();
    }
    if (isIdent("false")) {
      advance();
      return cFalse();
    }
    if (isIdent("not")) {
      advance();
      return cNot(parseConstraintAtom());
    }
    if (isIdent("exists") || isIdent("forall")) {
      bool ex = isIdent("exists");
      advance();
      Symbol v = intern(expectAnyIdent());
      expectPunct("::");
      Sort s = parseSort();
      expectPunct(".");
      Constraint body = parseConstraint();
      return ex ? cExists(v, s, body) : cForall(v, s, body);
    }
    if (isPunct("(")) {
      // could be a parenthesized constraint or a parenthesized index term
      size_t save = pos;
      advance();
      try {
        Constraint c = parseConstraint();
        expectPunct(")");
        // if a relational operator follows, this was an index after all
        if (!relopAhead()) return c;
      } catch (const ArelError&) {
      }
      pos = save;
    }
    Index l = parseIndex();
    if (eatPunct("=")) {
      Index r = parseIndex();
      return cEq(l, r);
    }
    if (eatPunct("<=")) return cLe(l, parseIndex());
    if (eatPunct("<")) return cLt(l, parseIndex());
    if (eatPunct(">=")) {
      Index r = parseIndex();
      return cLe(r, l);
    }
    if (eatPunct(">")) {
      Index r = parseIndex();
      return cLt(r, l);
    }
    if (eatIdent("in")) return cMem(l, parseIndex());
    if (eatIdent("sub")) return cSubset(l, parseIndex());
    err("expected a constraint relation");
  }

  bool relopAhead() const {
    return isPunct("=") || isPunct("<=") || isPunct("<") || isPunct(">=") || isPunct(">") ||
           isIdent("in") || isIdent("sub");
  }

  // ---- assertions ----
  Assertion parseAssertion() {
    Assertion a;
    if (isPunct("}")) return a;
    for (;;) {
      Symbol g = intern(expectAnyIdent());
      expectPunct("->");
      Index beta = parseIndex();
      a = a.with(g, beta);
      if (!eatPunct(",")) break;
    }
    return a;
  }

  // ---- types ----
  // Shared shape between the two type languages; `rel` picks constructors.
  UTy parseUTy() { return parseUTyArrow(); }
  RTy parseRTy() { return parseRTyArrow(); }

  bool tryConstraintPrefix(Constraint& out) {
    // "(C) => T" or "(C) & T"
    if (!isPunct("(")) return false;
    size_t save = pos;
    advance();
    try {
      Constraint c = parseConstraint();
      if (isPunct(")") && (isPunct("=>", 1) || isPunct("&", 1))) {
        advance();  // ')'
        out = c;
        return true;
      }
    } catch (const ArelError&) {
    }
    pos = save;
    return false;
  }

  UTy parseUTyArrow() {
    Constraint c;
    if (tryConstraintPrefix(c)) {
      bool impl = eatPunct("=>");
      if (!impl) expectPunct("&");
      UTy body = parseUTyArrow();
      return impl ? uCImpl(c, body) : uCAnd(c, body);
    }
    if (isIdent("forall") || isIdent("exists")) return parseUTyQuant();
    UTy l = parseUTySum();
    if (isPunct("->") && isPunct("[", 1)) {
      advance();
      advance();
      Index lo = parseIndex();
      expectPunct(",");
      Index hi = parseIndex();
      expectPunct("]");
      return uArrow(l, lo, hi, parseUTyArrow());
    }
    if (eatPunct("->")) return uArrow(l, iNat(0), iNat(0), parseUTyArrow());
    return l;
  }

  UTy parseUTyQuant() {
    bool ex = isIdent("exists");
    advance();
    std::vector<std::pair<Symbol, Sort>> binders;
    for (;;) {
      Symbol v = intern(expectAnyIdent());
      expectPunct("::");
      binders.emplace_back(v, parseSort());
      if (!eatPunct(",")) break;
    }
    Index lo = iNat(0), hi = iNat(0);
    if (!ex && eatPunct("[")) {
      lo = parseIndex();
      expectPunct(",");
      hi = parseIndex();
      expectPunct("]");
    }
    expectPunct(".");
    UTy body = parseUTyArrow();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = ex ? uExists(it->first, it->second, body)
                : uForall(it->first, it->second, lo, hi, body);
    return body;
  }

  UTy parseUTySum() {
    UTy l = parseUTyAtom();
    while (isPunct("+")) {
      advance();
      l = uSum(l, parseUTyAtom());
    }
    return l;
  }

  UTy parseUTyAtom() {
    if (eatIdent("unit")) return uUnit();
    if (eatIdent("real")) return uReal();
    if (eatIdent("bool")) {
      if (eatPunct("[")) {
        Constraint c = parseConstraint();
        expectPunct("]");
        return uBool(c);
      }
      return uBool();
    }
    if (eatIdent("int")) {
      if (eatPunct("[")) {
        Index i = parseIndex();
        expectPunct("]");
        return uInt(i);
      }
      return uInt();
    }
    if (eatIdent("Arr")) {
      expectPunct("(");
      Symbol g = intern(expectAnyIdent());
      expectPunct(",");
      Index len = parseIndex();
      expectPunct(",");
      UTy elem = parseUTy();
      expectPunct(")");
      return uArray(g, len, elem);
    }
    if (eatIdent("List")) {
      expectPunct("[");
      Index len = parseIndex();
      expectPunct("]");
      return uList(len, parseUTyAtom());
    }
    if (isIdent("M") && isPunct("{", 1)) {
      advance();
      expectPunct("{");
      Assertion pre = parseAssertion();
      expectPunct("}");
      expectPunct("[");
      Index lo = parseIndex();
      expectPunct(",");
      Index hi = parseIndex();
      expectPunct("]");
      expectPunct("{");
      Assertion post = parseAssertion();
      expectPunct("}");
      std::vector<Symbol> gs;
      if (eatIdent("exists")) {
        while (cur().kind == Tok::Ident) gs.push_back(intern(expectAnyIdent()));
        expectPunct(".");
      }
      UTy inner = parseUTyAtom();
      return uMonad(pre, gs, inner, post, lo, hi);
    }
    if (isIdent("forall") || isIdent("exists")) return parseUTyQuant();
    if (isPunct("(")) {
      Constraint c;
      if (tryConstraintPrefix(c)) {
        bool impl = eatPunct("=>");
        if (!impl) expectPunct("&");
        UTy body = parseUTyArrow();
        return impl ? uCImpl(c, body) : uCAnd(c, body);
      }
      advance();
      UTy t = parseUTy();
      expectPunct(")");
      return t;
    }
    err("expected a unary type");
  }

  RTy parseRTyArrow() {
    Constraint c;
    if (tryConstraintPrefix(c)) {
      bool impl = eatPunct("=>");
      if (!impl) expectPunct("&");
      RTy body = parseRTyArrow();
      return impl ? rCImpl(c, body) : rCAnd(c, body);
    }
    if (isIdent("forall") || isIdent("exists")) return parseRTyQuant();
    RTy l = parseRTySum();
    if (isPunct("->") && isPunct("[", 1)) {
      advance();
      advance();
      Index d = parseIndex();
      expectPunct("]");
      return rArrow(l, d, parseRTyArrow());
    }
    if (eatPunct("->")) return rArrow(l, iNat(0), parseRTyArrow());
    return l;
  }

  RTy parseRTyQuant() {
    bool ex = isIdent("exists");
    advance();
    std::vector<std::pair<Symbol, Sort>> binders;
    for (;;) {
      Symbol v = intern(expectAnyIdent());
      expectPunct("::");
      binders.emplace_back(v, parseSort());
      if (!eatPunct(",")) break;
    }
    Index d = iNat(0);
    if (!ex && eatPunct("[")) {
      d = parseIndex();
      expectPunct("]");
    }
    expectPunct(".");
    RTy body = parseRTyArrow();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = ex ? rExists(it->first, it->second, body) : rForall(it->first, it->second, d, body);
    return body;
  }

  RTy parseRTySum() {
    RTy l = parseRTyAtom();
    while (isPunct("+")) {
      advance();
      l = rSum(l, parseRTyAtom());
    }
    return l;
  }

  RTy parseRTyAtom() {
    if (eatIdent("unit")) return rUnit();
    if (eatIdent("real")) return rReal();
    if (eatIdent("bool")) {
      if (eatPunct("[")) {
        Constraint c = parseConstraint();
        expectPunct("]");
        return rBool(c);
      }
      return rBool();
    }
    if (eatIdent("int")) {
      if (eatPunct("[")) {
        Index i = parseIndex();
        expectPunct("]");
        return rInt(i);
      }
      return rInt();
    }
    if (eatIdent("box")) return rBox(parseRTyAtom());
    if (eatIdent("U")) {
      expectPunct("(");
      UTy a1 = parseUTy();
      expectPunct(",");
      UTy a2 = parseUTy();
      expectPunct(")");
      return rU(a1, a2);
    }
    if (eatIdent("Arr")) {
      expectPunct("(");
      Symbol g = intern(expectAnyIdent());
      expectPunct(",");
      Index len = parseIndex();
      expectPunct(",");
      RTy elem = parseRTy();
      expectPunct(")");
      return rArray(g, len, elem);
    }
    if (eatIdent("List")) {
      expectPunct("[");
      Index len = parseIndex();
      expectPunct(";");
      Index alpha = parseIndex();
      expectPunct("]");
      return rList(len, alpha, parseRTyAtom());
    }
    if (isIdent("M") && isPunct("{", 1)) {
      advance();
      expectPunct("{");
      Assertion pre = parseAssertion();
      expectPunct("}");
      expectPunct("[");
      Index d = parseIndex();
      expectPunct("]");
      expectPunct("{");
      Assertion post = parseAssertion();
      expectPunct("}");
      std::vector<Symbol> gs;
      if (eatIdent("exists")) {
        while (cur().kind == Tok::Ident) gs.push_back(intern(expectAnyIdent()));
        expectPunct(".");
      }
      RTy inner = parseRTyAtom();
      return rMonad(pre, gs, inner, post, d);
    }
    if (isIdent("forall") || isIdent("exists")) return parseRTyQuant();
    if (isPunct("(")) {
      Constraint c;
      if (tryConstraintPrefix(c)) {
        bool impl = eatPunct("=>");
        if (!impl) expectPunct("&");
        RTy body = parseRTyArrow();
        return impl ? rCImpl(c, body) : rCAnd(c, body);
      }
      advance();
      RTy t = parseRTy();
      expectPunct(")");
      return t;
    }
    err("expected a relational type");
  }

  // ---- terms ----
  bool termKeywordAhead() const {
    return isIdent("lam") || isIdent("fix") || isIdent("fixext") || isIdent("idxlam") ||
           isIdent("let") || isIdent("if") || isIdent("case") || isIdent("unpack");
  }

  Term parseTerm() {
    Span sp = here();
    if (eatIdent("lam")) {
      Symbol x = intern(expectAnyIdent());
      expectPunct(".");
      return tLam(x, parseTerm(), sp);
    }
    if (eatIdent("fix")) {
      Symbol f = intern(expectAnyIdent());
      expectPunct("(");
      Symbol x = intern(expectAnyIdent());
      expectPunct(")");
      expectPunct(".");
      return tFix(f, x, parseTerm(), sp);
    }
    if (eatIdent("fixext")) {
      Symbol f = intern(expectAnyIdent());
      expectPunct("(");
      Symbol x = intern(expectAnyIdent());
      UTy a1;
      if (eatPunct(":")) a1 = parseUTy();
      expectPunct(")");
      expectPunct(".");
      return tFixExt(f, x, parseTerm(), a1, a1, sp);
    }
    if (eatIdent("idxlam")) {
      Symbol i = intern(expectAnyIdent());
      expectPunct("::");
      Sort s = parseSort();
      expectPunct(".");
      return tILam(i, s, parseTerm(), sp);
    }
    if (eatIdent("let")) {
      if (eatPunct("{")) {
        Symbol x = intern(expectAnyIdent());
        expectPunct("}");
        expectPunct("=");
        Term t1 = parseTerm();
        expectIdent("in");
        return tBind(x, t1, parseTerm(), sp);
      }
      Symbol x = intern(expectAnyIdent());
      expectPunct("=");
      Term t1 = parseTerm();
      expectIdent("in");
      return tLet(x, t1, parseTerm(), sp);
    }
    if (eatIdent("if")) {
      Term c = parseOr();
      expectIdent("then");
      Term t1 = parseTerm();
      expectIdent("else");
      return tIf(c, t1, parseTerm(), sp);
    }
    if (eatIdent("case")) {
      Term t = parseTerm();
      expectIdent("of");
      expectPunct("{");
      expectIdent("inl");
      Symbol x = intern(expectAnyIdent());
      expectPunct("->");
      Term t1 = parseTerm();
      expectPunct(";");
      expectIdent("inr");
      Symbol y = intern(expectAnyIdent());
      expectPunct("->");
      Term t2 = parseTerm();
      expectPunct("}");
      return tCase(t, x, t1, y, t2, sp);
    }
    if (eatIdent("unpack")) {
      Term t1 = parseTerm();
      expectIdent("as");
      Symbol x = intern(expectAnyIdent());
      expectIdent("in");
      return tUnpack(t1, x, parseTerm(), sp);
    }
    return parseOr();
  }

  Term parseOr() {
    Term l = parseAndT();
    while (isPunct("||")) {
      Span sp = here();
      advance();
      l = tPrim(PrimOp::Or, {l, parseAndT()}, sp);
    }
    return l;
  }
  Term parseAndT() {
    Term l = parseCmp();
    while (isPunct("&&")) {
      Span sp = here();
      advance();
      l = tPrim(PrimOp::And, {l, parseCmp()}, sp);
    }
    return l;
  }
  Term parseCmp() {
    Term l = parseAdd();
    Span sp = here();
    if (eatPunct("<=")) return tPrim(PrimOp::Le, {l, parseAdd()}, sp);
    if (eatPunct("<")) return tPrim(PrimOp::Lt, {l, parseAdd()}, sp);
    if (eatPunct("==")) return tPrim(PrimOp::EqI, {l, parseAdd()}, sp);
    if (eatPunct(">=")) return tPrim(PrimOp::Le, {parseAdd(), l}, sp);
    if (eatPunct(">")) return tPrim(PrimOp::Lt, {parseAdd(), l}, sp);
    return l;
  }
  Term parseAdd() {
    Term l = parseMulT();
    for (;;) {
      Span sp = here();
      if (isPunct("+")) {
        advance();
        l = tPrim(PrimOp::Add, {l, parseMulT()}, sp);
      } else if (isPunct("-")) {
        advance();
        l = tPrim(PrimOp::Sub, {l, parseMulT()}, sp);
      } else {
        return l;
      }
    }
  }
  Term parseMulT() {
    Term l = parseAppT();
    for (;;) {
      Span sp = here();
      if (isPunct("*")) {
        advance();
        l = tPrim(PrimOp::Mul, {l, parseAppT()}, sp);
      } else if (isPunct("/")) {
        advance();
        l = tPrim(PrimOp::Div, {l, parseAppT()}, sp);
      } else {
        return l;
      }
    }
  }

  bool atomAhead() const {
    if (cur().kind == Tok::Int || cur().kind == Tok::Real) return true;
    if (cur().kind == Tok::Ident) {
      static const char* stop[] = {"in", "then", "else", "of", "as", "with", "and",
                                   "def", "unary", "rel", "sub"};
      for (const char* s : stop)
        if (cur().text == s) return false;
      return true;
    }
    return isPunct("(");
  }

  Term parseAppT() {
    Term l = parseAtomT();
    for (;;) {
      if (isPunct("[")) {
        Span sp = here();
        advance();
        Index i = parseIndex();
        expectPunct("]");
        l = tIApp(l, i, sp);
        continue;
      }
      if (atomAhead() && !termKeywordAhead()) {
        Span sp = here();
        l = tApp(l, parseAtomT(), sp);
        continue;
      }
      return l;
    }
  }

  Term parseAtomT() {
    Span sp = here();
    if (cur().kind == Tok::Int) {
      long long v = cur().intVal;
      advance();
      return tInt(v, sp);
    }
    if (cur().kind == Tok::Real) {
      Rat r = cur().ratVal;
      advance();
      return tReal(r, sp);
    }
    if (isIdent("rat") && isPunct("(", 1)) {
      advance();
      advance();
      if (cur().kind != Tok::Int) err("expected numerator");
      long long n = cur().intVal;
      advance();
      expectPunct(",");
      if (cur().kind != Tok::Int) err("expected denominator");
      long long d = cur().intVal;
      advance();
      expectPunct(")");
      return tReal(Rat(n, d), sp);
    }
    if (eatIdent("true")) return tBool(true, sp);
    if (eatIdent("false")) return tBool(false, sp);
    if (eatIdent("return")) return tRet(parseAtomT(), sp);
    if (eatIdent("inl")) return tInl(parseAtomT(), sp);
    if (eatIdent("inr")) return tInr(parseAtomT(), sp);
    if (eatIdent("pack")) return tPack(parseAtomT(), sp);
    if (eatIdent("celim")) return tCElim(parseAtomT(), sp);
    if (eatIdent("switch")) return tSwitch(parseAtomT(), sp);
    if (eatPunct("!")) return tPrim(PrimOp::Not, {parseAtomT()}, sp);
    if (eatIdent("split")) {
      expectPunct("(");
      Term t = parseTerm();
      expectPunct(")");
      expectIdent("with");
      expectPunct("(");
      Constraint c = parseConstraint();
      expectPunct(")");
      return tSplit(t, c, sp);
    }
    if (isIdent("alloc") || isIdent("allocB")) {
      bool boxed = cur().text == "allocB";
      advance();
      expectPunct("(");
      Term a = parseTerm();
      expectPunct(",");
      Term b = parseTerm();
      expectPunct(")");
      return tAlloc(a, b, boxed, sp);
    }
    if (isIdent("read") || isIdent("readB")) {
      bool boxed = cur().text == "readB";
      advance();
      expectPunct("(");
      Term a = parseTerm();
      expectPunct(",");
      Term b = parseTerm();
      expectPunct(")");
      return tRead(a, b, boxed, sp);
    }
    if (isIdent("updt") || isIdent("updtB")) {
      bool boxed = cur().text == "updtB";
      advance();
      expectPunct("(");
      Term a = parseTerm();
      expectPunct(",");
      Term b = parseTerm();
      expectPunct(",");
      Term c = parseTerm();
      expectPunct(")");
      return tUpdt(a, b, c, boxed, sp);
    }
    if (isPunct("(")) {
      advance();
      if (isPunct(")")) {
        advance();
        return tUnit(sp);
      }
      Term t = parseTerm();
      if (eatPunct(":u")) {
        UTy u = parseUTy();
        expectPunct(")");
        return tAscribe(t, u, nullptr, sp);
      }
      if (eatPunct(":r")) {
        RTy r = parseRTy();
        expectPunct(")");
        return tAscribe(t, nullptr, r, sp);
      }
      expectPunct(")");
      return t;
    }
    if (cur().kind == Tok::Ident) {
      Symbol x = intern(cur().text);
      advance();
      return tVar(x, sp);
    }
    err("expected a term");
  }

  // ---- generator / eval blocks ----
  GeneratorSpec parseGenerator() {
    GeneratorSpec g;
    expectPunct("{");
    while (!isPunct("}")) {
      std::string key = expectAnyIdent();
      if (key == "trials") {
        expectPunct("=");
        g.trials = static_cast<int>(cur().intVal);
        advance();
      } else if (key == "seed") {
        expectPunct("=");
        g.seed = static_cast<unsigned>(cur().intVal);
        advance();
      } else if (key == "target") {
        expectPunct("=");
        g.target = intern(expectAnyIdent());
      } else if (key == "param") {
        GenParam p;
        p.name = intern(expectAnyIdent());
        expectPunct("=");
        if (cur().kind == Tok::Int && isPunct("|", 1)) {
          while (true) {
            p.choices.push_back(cur().intVal);
            advance();
            if (!eatPunct("|")) break;
          }
        } else {
          p.lo = parseIndex(1);
          if (eatPunct("..")) {
            p.hi = parseIndex(1);
          } else {
            p.hi = p.lo;
          }
        }
        g.params.push_back(std::move(p));
      } else if (key == "set") {
        GenSet s;
        s.name = intern(expectAnyIdent());
        expectPunct("=");
        std::string mode = expectAnyIdent();
        if (mode == "empty") {
          s.mode = GenSet::Mode::Empty;
        } else {
          if (mode == "subset")
            s.mode = GenSet::Mode::Subset;
          else if (mode == "full")
            s.mode = GenSet::Mode::Full;
          else
            err("expected subset/full/empty");
          expectPunct("[");
          s.lo = parseIndex();
          expectPunct(",");
          s.hi = parseIndex();
          expectPunct("]");
          if (eatIdent("nonempty")) s.mode = GenSet::Mode::SubsetNonempty;
        }
        g.sets.push_back(std::move(s));
      } else if (key == "array") {
        GenArray a;
        a.name = intern(expectAnyIdent());
        expectPunct(":");
        a.gamma = intern(expectAnyIdent());
        expectIdent("length");
        a.length = parseIndex(1);
        if (eatIdent("elems")) {
          a.elemLo = cur().intVal;
          advance();
          expectPunct("..");
          a.elemHi = cur().intVal;
          advance();
        }
        if (eatIdent("differ")) {
          a.beta = intern(expectAnyIdent());
          a.hasBeta = true;
          if (eatIdent("as")) {
            a.forced = true;
            a.forcedL = cur().intVal;
            advance();
            expectPunct("/");
            a.forcedR = cur().intVal;
            advance();
          }
        }
        g.arrays.push_back(std::move(a));
      } else if (key == "funarg") {
        GenFunArg f;
        f.name = intern(expectAnyIdent());
        expectPunct("=");
        f.leftDecl = intern(expectAnyIdent());
        if (eatPunct("/"))
          f.rightDecl = intern(expectAnyIdent());
        else
          f.rightDecl = f.leftDecl;
        g.funargs.push_back(f);
      } else if (key == "rval") {
        Symbol n = intern(expectAnyIdent());
        expectPunct("=");
        g.rvals.emplace_back(n, parseIndex());
      } else if (key == "apply") {
        expectPunct("=");
        // target followed by argument tokens; a ';' terminates the list
        g.target = intern(expectAnyIdent());
        while (!isPunct(";")) {
          if (isPunct("(") && isPunct(")", 1)) {
            advance();
            advance();
            g.apply.push_back({true, {}});
            continue;
          }
          if (cur().kind == Tok::Ident) {
            g.apply.push_back({false, intern(cur().text)});
            advance();
            continue;
          }
          err("expected an apply argument or ';'");
        }
        advance();
      } else if (key == "costmodel") {
        std::string entry = expectAnyIdent();
        expectPunct("=");
        Rat v;
        if (cur().kind == Tok::Int) {
          v = Rat(cur().intVal);
          advance();
        } else if (cur().kind == Tok::Real) {
          v = cur().ratVal;
          advance();
        } else {
          err("expected a rational");
        }
        g.costOverrides.emplace_back(entry, v);
      } else {
        err("unknown generator key '" + key + "'");
      }
    }
    expectPunct("}");
    return g;
  }

  EvalSpec parseEval() {
    EvalSpec e;
    expectPunct("{");
    while (!isPunct("}")) {
      std::string key = expectAnyIdent();
      if (key == "heap") {
        EvalHeapEntry h;
        h.name = intern(expectAnyIdent());
        expectPunct("=");
        expectPunct("[");
        if (!isPunct("]")) {
          for (;;) {
            long long sign = 1;
            if (eatPunct("-")) sign = -1;
            h.elems.push_back(sign * cur().intVal);
            advance();
            if (!eatPunct(",")) break;
          }
        }
        expectPunct("]");
        e.heap.push_back(std::move(h));
      } else if (key == "run") {
        expectPunct("=");
        e.run = parseTerm();
      } else {
        err("unknown eval key '" + key + "'");
      }
    }
    expectPunct("}");
    return e;
  }

  SourceProgram parseProgram() {
    SourceProgram p;
    while (!atEnd()) {
      if (cur().kind == Tok::AtIdent) {
        std::string what = cur().text;
        advance();
        if (what == "generator")
          p.gen = parseGenerator();
        else if (what == "eval")
          p.eval = parseEval();
        else
          err("unknown block @" + what);
        continue;
      }
      expectIdent("def");
      Decl d;
      d.span = here();
      d.name = intern(expectAnyIdent());
      while (isIdent("unary") || isIdent("rel")) {
        bool isU = cur().text == "unary";
        advance();
        expectPunct(":");
        if (isU)
          d.unary = parseUTy();
        else
          d.rel = parseRTy();
      }
      expectPunct("=");
      d.body = parseTerm();
      for (auto& prev : p.decls)
        if (prev.name == d.name) err("duplicate declaration " + symName(d.name));
      p.decls.push_back(std::move(d));
    }
    return p;
  }
};

}  // namespace

SourceProgram parseProgram(const std::string& text) {
  Parser p(text);
  return p.parseProgram();
}

Term parseTermString(const std::string& text) {
  Parser p(text);
  Term t = p.parseTerm();
  if (!p.atEnd()) p.err("trailing input after term");
  return t;
}
RTy parseRTyString(const std::string& text) {
  Parser p(text);
  RTy t = p.parseRTy();
  if (!p.atEnd()) p.err("trailing input after type");
  return t;
}
UTy parseUTyString(const std::string& text) {
  Parser p(text);
  UTy t = p.parseUTy();
  if (!p.atEnd()) p.err("trailing input after type");
  return t;
}
Index parseIndexString(const std::string& text) {
  Parser p(text);
  Index t = p.parseIndex();
  if (!p.atEnd()) p.err("trailing input after index term");
  return t;
}
Constraint parseConstraintString(const std::string& text) {
  Parser p(text);
  Constraint c = p.parseConstraint();
  if (!p.atEnd()) p.err("trailing input after constraint");
  return c;
}

}  // namespace arel
