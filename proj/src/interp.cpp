#include "arel/interp.hpp"

#include <fstream>

#include "arel/pretty.hpp"

namespace arel {

// ---------------------------------------------------------------------------
// Heap
// ---------------------------------------------------------------------------

long long Heap::alloc(long long n, const Term& init) {
  if (n < 0) fail("OutOfBounds", "negative allocation length");
  long long l = nextLoc++;
  arrays.emplace(l, std::vector<Term>(static_cast<size_t>(n), init));
  return l;
}
const Term& Heap::read(long long loc, long long idx) const {
  auto it = arrays.find(loc);
  if (it == arrays.end()) fail("UnboundLocation", "location " + std::to_string(loc));
  if (idx < 0 || static_cast<size_t>(idx) >= it->second.size())
    fail("OutOfBounds",
         "index " + std::to_string(idx) + " on array of length " + std::to_string(it->second.size()));
  return it->second[static_cast<size_t>(idx)];
}
void Heap::update(long long loc, long long idx, const Term& v) {
  auto it = arrays.find(loc);
  if (it == arrays.end()) fail("UnboundLocation", "location " + std::to_string(loc));
  if (idx < 0 || static_cast<size_t>(idx) >= it->second.size())
    fail("OutOfBounds",
         "index " + std::to_string(idx) + " on array of length " + std::to_string(it->second.size()));
  it->second[static_cast<size_t>(idx)] = v;
}
bool Heap::operator==(const Heap& o) const {
  if (arrays.size() != o.arrays.size()) return false;
  for (auto& [l, z] : arrays) {
    auto it = o.arrays.find(l);
    if (it == o.arrays.end() || it->second.size() != z.size()) return false;
    for (size_t i = 0; i < z.size(); ++i)
      if (!valueEq(z[i], it->second[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cost model
// ---------------------------------------------------------------------------

CostModel CostModel::zero() { return CostModel{}; }
CostModel CostModel::defaultModel() {
  CostModel m;
  m.read = Rat(1);
  m.update = Rat(1);
  return m;
}

void CostModel::set(const std::string& key, const Rat& v) {
  if (key == "c_app") app = v;
  else if (key == "c_fapp") fapp = v;
  else if (key == "c_let") let_ = v;
  else if (key == "c_lt") lt = v;
  else if (key == "c_ret") ret = v;
  else if (key == "c_read") read = v;
  else if (key == "c_update") update = v;
  else if (key == "c_alloc") alloc = v;
  else if (key == "c_case") case_ = v;
  else if (key == "c_unpack") unpack = v;
  else if (key == "c_celim") celim = v;
  else if (key == "c_iapp") iapp = v;
  else fail("UsageError", "unknown cost model entry " + key);
}
Rat CostModel::get(const std::string& key) const {
  if (key == "c_app") return app;
  if (key == "c_fapp") return fapp;
  if (key == "c_let") return let_;
  if (key == "c_lt") return lt;
  if (key == "c_ret") return ret;
  if (key == "c_read") return read;
  if (key == "c_update") return update;
  if (key == "c_alloc") return alloc;
  if (key == "c_case") return case_;
  if (key == "c_unpack") return unpack;
  if (key == "c_celim") return celim;
  if (key == "c_iapp") return iapp;
  fail("UsageError", "unknown cost model entry " + key);
}

CostModel CostModel::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("UsageError", "cannot open cost model file " + path);
  CostModel m = defaultModel();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto notSpace = [](char c) { return !std::isspace(static_cast<unsigned char>(c)); };
    if (std::find_if(line.begin(), line.end(), notSpace) == line.end()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("UsageError", "cost model line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    m.set(trim(line.substr(0, eq)), Rat::fromString(trim(line.substr(eq + 1))));
  }
  m.validate();
  return m;
}

void CostModel::validate() const {
  for (const Rat* r : {&app, &fapp, &let_, &lt, &ret, &read, &update, &alloc, &case_, &unpack,
                       &celim, &iapp})
    if (*r < Rat(0)) fail("UsageError", "cost model entries must be nonnegative");
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

static bool isValue(const Term& t) {
  switch (t->kind) {
    case TK::IntL:
    case TK::RealL:
    case TK::BoolL:
    case TK::UnitL:
    case TK::Loc:
    case TK::Lam:
    case TK::Fix:
    case TK::FixExt:
    case TK::ILam:
    case TK::Ret:
    case TK::Bind:
    case TK::Alloc:
    case TK::Read:
    case TK::Updt:
      return true;
    case TK::Inl:
    case TK::Inr:
    case TK::Pack:
      return isValue(t->t0);
    default:
      return false;
  }
}

bool valueEq(const Term& a, const Term& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TK::IntL: return a->intVal == b->intVal;
    case TK::RealL: return a->ratVal == b->ratVal;
    case TK::BoolL: return a->boolVal == b->boolVal;
    case TK::UnitL: return true;
    case TK::Loc: return a->intVal == b->intVal;
    case TK::Inl:
    case TK::Inr:
    case TK::Pack:
      return valueEq(a->t0, b->t0);
    default:
      // higher-order heap contents compare structurally
      return alphaEq(a, b);
  }
}

// ---------------------------------------------------------------------------
// Pure evaluation
// ---------------------------------------------------------------------------

namespace {

struct Evaluator {
  const CostModel& cm;
  uint64_t fuel;
  uint64_t steps = 0;
  Rat cost{};

  void tick(const Rat& c) {
    if (++steps > fuel) fail("FuelExhausted", "step budget exceeded");
    cost += c;
  }

  [[noreturn]] void stuck(const Term& t, const std::string& why) {
    fail("StuckTerm", why + " in " + show(t), t->span);
  }

  static long long intOf(const Term& v, const char* what) {
    if (v->kind != TK::IntL) fail("StuckTerm", std::string(what) + " expects an integer");
    return v->intVal;
  }

  Term prim(const Term& t) {
    std::vector<Term> vs;
    vs.reserve(t->args.size());
    for (auto& a : t->args) vs.push_back(eval(a));
    auto num = [&](const Term& v) -> Rat {
      if (v->kind == TK::IntL) return Rat(v->intVal);
      if (v->kind == TK::RealL) return v->ratVal;
      stuck(t, "numeric primitive on non-number");
    };
    auto isInt = [&](const Term& v) { return v->kind == TK::IntL; };
    auto mkNum = [&](const Rat& r, bool asInt) -> Term {
      if (asInt) {
        if (!r.isInteger()) return tReal(r);
        return tInt(r.num());
      }
      return tReal(r);
    };
    switch (t->prim) {
      case PrimOp::Add:
      case PrimOp::Sub:
      case PrimOp::Mul:
      case PrimOp::Div: {
        bool ints = isInt(vs[0]) && isInt(vs[1]);
        Rat a = num(vs[0]), b = num(vs[1]);
        switch (t->prim) {
          case PrimOp::Add: return mkNum(a + b, ints);
          case PrimOp::Sub: return mkNum(a - b, ints);
          case PrimOp::Mul: return mkNum(a * b, ints);
          case PrimOp::Div:
            if (ints) {
              if (vs[1]->intVal == 0) stuck(t, "integer division by zero");
              long long q = vs[0]->intVal / vs[1]->intVal;
              if ((vs[0]->intVal % vs[1]->intVal) != 0 &&
                  ((vs[0]->intVal < 0) != (vs[1]->intVal < 0)))
                --q;  // floor division, matching the index-level semantics
              return tInt(q);
            }
            return tReal(a / b);
          default: break;
        }
        break;
      }
      case PrimOp::Lt: return tBool(num(vs[0]) < num(vs[1]));
      case PrimOp::Le: return tBool(num(vs[0]) <= num(vs[1]));
      case PrimOp::EqI: return tBool(valueEq(vs[0], vs[1]));
      case PrimOp::And:
        if (vs[0]->kind != TK::BoolL || vs[1]->kind != TK::BoolL) stuck(t, "&& on non-bool");
        return tBool(vs[0]->boolVal && vs[1]->boolVal);
      case PrimOp::Or:
        if (vs[0]->kind != TK::BoolL || vs[1]->kind != TK::BoolL) stuck(t, "|| on non-bool");
        return tBool(vs[0]->boolVal || vs[1]->boolVal);
      case PrimOp::Not:
        if (vs[0]->kind != TK::BoolL) stuck(t, "! on non-bool");
        return tBool(!vs[0]->boolVal);
    }
    stuck(t, "bad primitive");
  }

  Term eval(const Term& t) {
    if (isValue(t)) return t;  // e-v: values cost nothing
    switch (t->kind) {
      case TK::Var:
        stuck(t, "unbound variable " + symName(t->x));
      case TK::App: {
        Term f = eval(t->t0);
        Term a = eval(t->t1);
        if (f->kind == TK::Lam) {
          tick(cm.app);  // e-a
          TermSubst s{{f->x, a}};
          return eval(substTerm(f->t0, s));
        }
        if (f->kind == TK::Fix || f->kind == TK::FixExt) {
          tick(cm.fapp);  // e-f
          // fixext behaves exactly like fix at runtime
          TermSubst s{{f->f, f}, {f->x, a}};
          return eval(substTerm(f->t0, s));
        }
        stuck(t, "application of a non-function");
      }
      case TK::Let: {
        Term v = eval(t->t0);
        tick(cm.lt);
        TermSubst s{{t->x, v}};
        return eval(substTerm(t->t1, s));
      }
      case TK::If: {
        Term c = eval(t->t0);
        if (c->kind != TK::BoolL) stuck(t, "if on non-bool");
        tick(cm.case_);
        return eval(c->boolVal ? t->t1 : t->t2);
      }
      case TK::Case: {
        Term v = eval(t->t0);
        tick(cm.case_);
        if (v->kind == TK::Inl) {
          TermSubst s{{t->x, v->t0}};
          return eval(substTerm(t->t1, s));
        }
        if (v->kind == TK::Inr) {
          TermSubst s{{t->f, v->t0}};
          return eval(substTerm(t->t2, s));
        }
        stuck(t, "case on a non-sum");
      }
      case TK::Inl: return tInl(eval(t->t0), t->span);
      case TK::Inr: return tInr(eval(t->t0), t->span);
      case TK::Pack: return tPack(eval(t->t0), t->span);
      case TK::Unpack: {
        Term v = eval(t->t0);
        if (v->kind != TK::Pack) stuck(t, "unpack of a non-package");
        tick(cm.unpack);
        TermSubst s{{t->x, v->t0}};
        return eval(substTerm(t->t1, s));
      }
      case TK::IApp: {
        Term f = eval(t->t0);
        if (f->kind != TK::ILam) stuck(t, "index application of a non-index-abstraction");
        tick(cm.iapp);
        return eval(f->t0);  // index erased at runtime
      }
      case TK::CElim: {
        Term v = eval(t->t0);
        tick(cm.celim);
        return v;
      }
      case TK::Prim:
        return prim(t);
      case TK::Switch:
      case TK::Split:
        return eval(t->t0);  // checker annotations are runtime no-ops
      case TK::Ascribe:
        return eval(t->t0);
      default:
        stuck(t, "no evaluation rule");
    }
  }

  // Forcing evaluation of a monadic value against a heap.
  Term force(const Term& v, Heap& h) {
    switch (v->kind) {
      case TK::Ret: {  // f-t
        Term r = eval(v->t0);
        tick(cm.ret);
        return r;
      }
      case TK::Bind: {  // f-e
        Term v1 = eval(v->t0);
        Term r1 = force(v1, h);
        TermSubst s{{v->x, r1}};
        Term v2 = eval(substTerm(v->t1, s));
        Term r2 = force(v2, h);
        tick(cm.let_);
        return r2;
      }
      case TK::Read: {  // f-r
        Term l = eval(v->t0);
        Term i = eval(v->t1);
        if (l->kind != TK::Loc) stuck(v, "read of a non-location");
        tick(cm.read);
        return h.read(l->intVal, intOf(i, "read"));
      }
      case TK::Updt: {  // f-u
        Term l = eval(v->t0);
        Term i = eval(v->t1);
        Term x = eval(v->t2);
        if (l->kind != TK::Loc) stuck(v, "update of a non-location");
        tick(cm.update);
        h.update(l->intVal, intOf(i, "update"), x);
        return tUnit();
      }
      case TK::Alloc: {  // f-l
        Term n = eval(v->t0);
        Term x = eval(v->t1);
        tick(cm.alloc);
        long long loc = h.alloc(intOf(n, "alloc"), x);
        return tLoc(loc);
      }
      default:
        // forcing a pure value is the computation that already returned it
        stuck(v, "forcing a non-monadic value");
    }
  }
};

}  // namespace

EvalResult evalPure(const Term& t, const CostModel& cm, uint64_t fuel) {
  Evaluator ev{cm, fuel};
  Term v = ev.eval(t);
  return {v, ev.cost, ev.steps};
}

ForceResult evalForce(const Term& t, const Heap& h, const CostModel& cm, uint64_t fuel) {
  Evaluator ev{cm, fuel};
  Term v = ev.eval(t);
  Heap h2 = h;
  Term r = ev.force(v, h2);
  return {r, ev.cost, ev.steps, std::move(h2)};
}

RelCostResult empiricalRelcost(const Term& t1, const Term& t2, const Heap& h1, const Heap& h2,
                               const CostModel& cm, uint64_t fuel) {
  RelCostResult r;
  try {
    r.left = evalForce(t1, h1, cm, fuel);
  } catch (const ArelError& e) {
    fail(e.category, std::string("Left: ") + e.what());
  }
  try {
    r.right = evalForce(t2, h2, cm, fuel);
  } catch (const ArelError& e) {
    fail(e.category, std::string("Right: ") + e.what());
  }
  r.delta = r.left.cost - r.right.cost;
  for (auto& [loc, z1] : r.left.heap.arrays) {
    auto it = r.right.heap.arrays.find(loc);
    if (it == r.right.heap.arrays.end()) continue;
    const auto& z2 = it->second;
    std::vector<long long> diffs;
    size_t n = std::min(z1.size(), z2.size());
    for (size_t i = 0; i < n; ++i)
      if (!valueEq(z1[i], z2[i])) diffs.push_back(static_cast<long long>(i));
    for (size_t i = n; i < std::max(z1.size(), z2.size()); ++i)
      diffs.push_back(static_cast<long long>(i));
    if (!diffs.empty()) r.heapDiff[loc] = std::move(diffs);
  }
  return r;
}

}  // namespace arel
