#include "acsolve/printer.hpp"

#include <functional>
#include <sstream>

namespace acsolve {

namespace {

// One shared precedence scale for both layers:
//   0 ->   1 +   2 *   3 |   4 &   5 unary   6 primary
constexpr int kImp = 0, kPlus = 1, kTimes = 2, kOr = 3, kAnd = 4, kUnary = 5, kPrim = 6;

void pf(std::ostream& out, const FormulaPtr& f, int ctx);

void wrap(std::ostream& out, int level, int ctx, const std::function<void()>& body) {
  bool paren = level < ctx;
  if (paren) out << '(';
  body();
  if (paren) out << ')';
}

void pw(std::ostream& out, const WeightedPtr& w, int ctx) {
  switch (w->kind) {
    case Weighted::Kind::Const:
      out << w->k.str();
      return;
    case Weighted::Kind::Var:
      out << w->boundVar;
      return;
    case Weighted::Kind::Embed:
      pf(out, w->phi, ctx);
      return;
    case Weighted::Kind::Implies:
      wrap(out, kImp, ctx, [&] {
        pw(out, w->lhs, kImp + 1);
        out << " -> ";
        pw(out, w->rhs, kImp);
      });
      return;
    case Weighted::Kind::Plus:
      wrap(out, kPlus, ctx, [&] {
        pw(out, w->lhs, kPlus);
        out << " + ";
        pw(out, w->rhs, kPlus + 1);
      });
      return;
    case Weighted::Kind::Times:
      wrap(out, kTimes, ctx, [&] {
        pw(out, w->lhs, kTimes);
        out << " * ";
        pw(out, w->rhs, kTimes + 1);
      });
      return;
    case Weighted::Kind::Neg:
      wrap(out, kUnary, ctx, [&] {
        // a negated numeric literal would re-lex as a constant
        if (w->lhs->kind == Weighted::Kind::Const) {
          out << "-(" << w->lhs->k.str() << ")";
        } else {
          out << '-';
          pw(out, w->lhs, kUnary);
        }
      });
      return;
    case Weighted::Kind::Inv:
      out << "inv(";
      pw(out, w->lhs, kImp);
      out << ')';
      return;
    case Weighted::Kind::Sum:
    case Weighted::Kind::Prod:
      // diagnostic only; the closure is implicit in rule text
      out << (w->kind == Weighted::Kind::Sum ? "$sum " : "$prod ") << w->boundVar << ' ';
      pw(out, w->lhs, kPrim);
      return;
    case Weighted::Kind::Conditional: {
      out << '(';
      pw(out, w->lhs, kImp);
      out << " | ";
      pw(out, w->rhs, kImp);
      out << " : ";
      pf(out, w->phi, kImp);
      out << ")@";
      switch (w->mode) {
        case CondMode::Alt: out << "alt"; break;
        case CondMode::Vc: out << "vc"; break;
        case CondMode::Df: out << "df"; break;
      }
      return;
    }
  }
}

void pf(std::ostream& out, const FormulaPtr& f, int ctx) {
  switch (f->kind) {
    case Formula::Kind::Bottom:
      out << "bot";
      return;
    case Formula::Kind::Constraint:
      out << printConstraint(*f->cons);
      return;
    case Formula::Kind::Atomic:
      out << f->atom.str();
      return;
    case Formula::Kind::And:
      wrap(out, kAnd, ctx, [&] {
        pf(out, f->lhs, kAnd);
        out << " & ";
        pf(out, f->rhs, kAnd + 1);
      });
      return;
    case Formula::Kind::Or:
      wrap(out, kOr, ctx, [&] {
        pf(out, f->lhs, kOr);
        out << " | ";
        pf(out, f->rhs, kOr + 1);
      });
      return;
    case Formula::Kind::Implies:
      if (f->isNegation()) {
        wrap(out, kUnary, ctx, [&] {
          out << "not ";
          pf(out, f->lhs, kUnary);
        });
        return;
      }
      wrap(out, kImp, ctx, [&] {
        pf(out, f->lhs, kImp + 1);
        out << " -> ";
        pf(out, f->rhs, kImp);
      });
      return;
  }
}

const char* aggName(AggKind k) {
  switch (k) {
    case AggKind::Sum: return "sum";
    case AggKind::Count: return "count";
    case AggKind::Max: return "max";
    case AggKind::Min: return "min";
    case AggKind::Times: return "times";
    case AggKind::Avg: return "avg";
  }
  return "?";
}

}  // namespace

std::string printWeighted(const WeightedPtr& w) {
  std::ostringstream out;
  pw(out, w, kImp);
  return out.str();
}

std::string printFormula(const FormulaPtr& f) {
  std::ostringstream out;
  pf(out, f, kImp);
  return out.str();
}

std::string printConstraint(const AlgebraicConstraint& c) {
  std::ostringstream out;
  out << c.lhs.str() << ' ' << cmpToken(c.cmp);
  if (c.choice) out << 'c';
  out << '[' << c.ringSpec << "]{ ";
  pw(out, c.body, kImp);
  out << " }";
  return out.str();
}

std::string printLiteral(const Literal& l) {
  std::string s;
  if (l.negated) s += "not ";
  if (l.isAtom()) return s + l.atom->str();
  if (l.isConstraint()) return s + printConstraint(*l.cons);
  const Aggregate& a = *l.agg;
  std::ostringstream out;
  out << s << a.bound.str() << ' ' << cmpToken(a.cmp) << ' ' << aggName(a.kind);
  if (a.ringSpec) out << '[' << *a.ringSpec << ']';
  out << "{ ";
  for (size_t i = 0; i < a.elems.size(); ++i) {
    if (i) out << ", ";
    if (a.elems[i].weight) out << a.elems[i].weight->str() << " : ";
    out << a.elems[i].atom.str();
  }
  out << " }";
  return out.str();
}

std::string printRule(const Rule& r) {
  std::ostringstream out;
  switch (r.head.kind) {
    case Head::Kind::Bottom:
      out << "bot";
      break;
    case Head::Kind::Atom:
      out << r.head.atom->str();
      break;
    case Head::Kind::Constraint:
      out << printConstraint(*r.head.cons);
      break;
    case Head::Kind::Disjunction:
      for (size_t i = 0; i < r.head.disj.size(); ++i) {
        if (i) out << " | ";
        out << r.head.disj[i].str();
      }
      break;
  }
  if (!r.body.empty()) {
    out << " :- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
      if (i) out << ", ";
      out << printLiteral(r.body[i]);
    }
  }
  out << '.';
  return out.str();
}

std::string printProgram(const Program& p) {
  std::ostringstream out;
  if (!p.declaredDomain.empty()) {
    out << "domain {";
    bool first = true;
    for (const auto& s : p.declaredDomain) {
      if (!first) out << ", ";
      out << s;
      first = false;
    }
    out << "}.\n";
  }
  for (const auto& r : p.rules) out << printRule(r) << '\n';
  return out.str();
}

}  // namespace acsolve
