// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/formula.hpp"

#include <algorithm>
#include <cctype>

namespace continua {

namespace {
TermPtr make_term(Term t) { return std::make_shared<Term>(std::move(t)); }
FormulaPtr make_formula(Formula f) {
  return std::make_shared<Formula>(std::move(f));
}
}  // namespace

TermPtr Term::variable(int index) {
  if (index < 0) throw InvalidInput("negative variable index");
  Term t{Kind::Var};
  t.var = index;
  t.degree = 1;
  return make_term(std::move(t));
}
TermPtr Term::one() {
  Term t{Kind::One};
  return make_term(std::move(t));
}
TermPtr Term::zero() {
  Term t{Kind::Zero};
  return make_term(std::move(t));
}
TermPtr Term::scale(Rat c, TermPtr x) {
  Term t{Kind::Scale};
  t.scalar = std::move(c);
  t.degree = x->degree;
  t.a = std::move(x);
  return make_term(std::move(t));
}
TermPtr Term::add(TermPtr x, TermPtr y) {
  Term t{Kind::Add};
  t.degree = std::max(x->degree, y->degree);
  t.a = std::move(x);
  t.b = std::move(y);
  return make_term(std::move(t));
}
TermPtr Term::sub(TermPtr x, TermPtr y) {
  Term t{Kind::Sub};
  t.degree = std::max(x->degree, y->degree);
  t.a = std::move(x);
  t.b = std::move(y);
  return make_term(std::move(t));
}
TermPtr Term::mul(TermPtr x, TermPtr y) {
  if (x->degree > 1 || y->degree > 1)
    throw InvalidInput(
        "degree cap: products take two piecewise-linear factors");
  Term t{Kind::Mul};
  t.degree = x->degree + y->degree;
  t.a = std::move(x);
  t.b = std::move(y);
  return make_term(std::move(t));
}
TermPtr Term::abs(TermPtr x) {
  if (x->degree > 1)
    throw InvalidInput("degree cap: |.| takes a piecewise-linear argument");
  Term t{Kind::Abs};
  t.degree = x->degree;
  t.a = std::move(x);
  return make_term(std::move(t));
}

FormulaPtr Formula::norm(TermPtr t) {
  Formula f{Kind::Norm};
  f.t1 = std::move(t);
  return make_formula(std::move(f));
}
FormulaPtr Formula::constant(Rat c) {
  Formula f{Kind::Const};
  f.scalar = std::move(c);
  return make_formula(std::move(f));
}
FormulaPtr Formula::add(FormulaPtr x, FormulaPtr y) {
  Formula f{Kind::Add};
  f.args = {std::move(x), std::move(y)};
  return make_formula(std::move(f));
}
FormulaPtr Formula::truncsub(FormulaPtr x, FormulaPtr y) {
  Formula f{Kind::TruncSub};
  f.args = {std::move(x), std::move(y)};
  return make_formula(std::move(f));
}
FormulaPtr Formula::fmax(std::vector<FormulaPtr> xs) {
  if (xs.empty()) throw InvalidInput("max needs at least one argument");
  Formula f{Kind::Max};
  f.args = std::move(xs);
  return make_formula(std::move(f));
}
FormulaPtr Formula::fmin(std::vector<FormulaPtr> xs) {
  if (xs.empty()) throw InvalidInput("min needs at least one argument");
  Formula f{Kind::Min};
  f.args = std::move(xs);
  return make_formula(std::move(f));
}
FormulaPtr Formula::scale(Rat c, FormulaPtr x) {
  Formula f{Kind::Scale};
  f.scalar = std::move(c);
  f.args = {std::move(x)};
  return make_formula(std::move(f));
}
FormulaPtr Formula::sqrt(FormulaPtr x) {
  Formula f{Kind::Sqrt};
  f.args = {std::move(x)};
  return make_formula(std::move(f));
}
FormulaPtr Formula::dist(TermPtr x, TermPtr y) {
  Formula f{Kind::Dist};
  f.t1 = std::move(x);
  f.t2 = std::move(y);
  return make_formula(std::move(f));
}

static int term_var_count(const TermPtr& t) {
  if (!t) return 0;
  int n = t->kind == Term::Kind::Var ? t->var + 1 : 0;
  return std::max({n, term_var_count(t->a), term_var_count(t->b)});
}

int Formula::var_count() const {
  int n = std::max(term_var_count(t1), term_var_count(t2));
  for (const auto& a : args) n = std::max(n, a->var_count());
  return n;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->var != b->var || a->scalar != b->scalar)
    return false;
  return term_equal(a->a, b->a) && term_equal(a->b, b->b);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->scalar != b->scalar) return false;
  if (!term_equal(a->t1, b->t1) || !term_equal(a->t2, b->t2)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!formula_equal(a->args[i], b->args[i])) return false;
  return true;
}

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return "x" + std::to_string(t->var + 1);
    case Term::Kind::One:
      return "1";
    case Term::Kind::Zero:
      return "0";
    case Term::Kind::Scale:
      return rat_to_string(t->scalar) + "*(" + print_term(t->a) + ")";
    case Term::Kind::Add:
      return "(" + print_term(t->a) + " + " + print_term(t->b) + ")";
    case Term::Kind::Sub:
      return "(" + print_term(t->a) + " - " + print_term(t->b) + ")";
    case Term::Kind::Mul:
      return "(" + print_term(t->a) + " * " + print_term(t->b) + ")";
    case Term::Kind::Abs:
      return "abs(" + print_term(t->a) + ")";
  }
  throw Error("unreachable");
}

std::string print_formula(const FormulaPtr& f) {
  auto join = [&](const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < f->args.size(); ++i) {
      if (i) s += sep;
      s += print_formula(f->args[i]);
    }
    return s;
  };
  switch (f->kind) {
    case Formula::Kind::Norm:
      return "norm(" + print_term(f->t1) + ")";
    case Formula::Kind::Const:
      return rat_to_string(f->scalar);
    case Formula::Kind::Add:
      return "(" + join(" + ") + ")";
    case Formula::Kind::TruncSub:
      return "dot-(" + print_formula(f->args[0]) + ", " +
             print_formula(f->args[1]) + ")";
    case Formula::Kind::Max:
      return "max(" + join(", ") + ")";
    case Formula::Kind::Min:
      return "min(" + join(", ") + ")";
    case Formula::Kind::Scale:
      return rat_to_string(f->scalar) + "*" + print_formula(f->args[0]);
    case Formula::Kind::Sqrt:
      return "sqrt(" + print_formula(f->args[0]) + ")";
    case Formula::Kind::Dist:
      return "d(" + print_term(f->t1) + ", " + print_term(f->t2) + ")";
  }
  throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Parser (recursive descent; grammar in docs/formula-grammar.md).

namespace {

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  explicit Lexer(const std::string& s) : src(s) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }
  // Identifier: letters, optionally followed by one '-' (for "dot-").
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() &&
           std::isalpha(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos < src.size() && src[pos] == '-' &&
        src.substr(start, pos - start) == "dot")
      ++pos;
    return src.substr(start, pos - start);
  }
  bool at_number() {
    return std::isdigit(static_cast<unsigned char>(peek()));
  }
  Rat number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos == start) throw ParseError("expected a number", pos);
    if (pos < src.size() && src[pos] == '/') {
      ++pos;
      std::size_t dstart = pos;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos])))
        ++pos;
      if (pos == dstart) throw ParseError("expected a denominator", pos);
    }
    return rat_from_string(src.substr(start, pos - start));
  }
  bool at_ident() {
    return std::isalpha(static_cast<unsigned char>(peek()));
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& s) : lex(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex.pos);
  }

  TermPtr term() {
    TermPtr t = term_factor();
    while (true) {
      if (lex.accept('+'))
        t = guarded([&] { return Term::add(t, term_factor()); });
      else if (lex.accept('-'))
        t = guarded([&] { return Term::sub(t, term_factor()); });
      else
        return t;
    }
  }

  TermPtr term_factor() {
    TermPtr t = term_primary();
    while (lex.accept('*'))
      t = guarded([&] { return Term::mul(t, term_primary()); });
    return t;
  }

  TermPtr term_primary() {
    if (lex.at_number()) {
      Rat r = lex.number();
      if (lex.accept('*'))
        return guarded([&] { return Term::scale(r, term_primary()); });
      if (r == 0) return Term::zero();
      if (r == 1) return Term::one();
      return Term::scale(r, Term::one());
    }
    if (lex.accept('(')) {
      TermPtr t = term();
      lex.expect(')');
      return t;
    }
    if (lex.at_ident()) {
      std::size_t at = lex.pos;
      std::string id = lex.ident();
      if (id == "abs") {
        lex.expect('(');
        TermPtr t = guarded([&] { return Term::abs(term()); });
        lex.expect(')');
        return t;
      }
      if (id.size() >= 2 && id[0] == 'x') {
        for (std::size_t i = 1; i < id.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(id[i])))
            throw ParseError("bad variable '" + id + "'", at);
        int idx = std::stoi(id.substr(1));
        if (idx < 1) throw ParseError("variables start at x1", at);
        return Term::variable(idx - 1);
      }
      // x followed by digits lexes as letters only; pick the digits up here.
      if (id == "x") {
        std::size_t dstart = lex.pos;
        if (!lex.at_number()) throw ParseError("bad variable 'x'", at);
        Rat n = lex.number();
        if (denominator(n) != 1 || n < 1)
          throw ParseError("bad variable index", dstart);
        return Term::variable(n.convert_to<int>() - 1);
      }
      throw ParseError("unknown term symbol '" + id + "'", at);
    }
    fail("expected a term");
  }

  FormulaPtr formula() {
    FormulaPtr f = formula_term();
    while (lex.accept('+')) f = Formula::add(f, formula_term());
    return f;
  }

  FormulaPtr formula_term() {
    if (lex.at_number()) {
      std::size_t save = lex.pos;
      Rat r = lex.number();
      if (lex.accept('*')) return Formula::scale(r, formula_atom());
      lex.pos = save;
    }
    return formula_atom();
  }

  std::vector<FormulaPtr> formula_list() {
    std::vector<FormulaPtr> out;
    out.push_back(formula());
    while (lex.accept(',')) out.push_back(formula());
    return out;
  }

  FormulaPtr formula_atom() {
    if (lex.at_number()) return Formula::constant(lex.number());
    if (lex.accept('(')) {
      FormulaPtr f = formula();
      lex.expect(')');
      return f;
    }
    std::size_t at = lex.pos;
    std::string id = lex.ident();
    if (id == "norm") {
      lex.expect('(');
      TermPtr t = term();
      lex.expect(')');
      return Formula::norm(t);
    }
    if (id == "dot-") {
      lex.expect('(');
      FormulaPtr a = formula();
      lex.expect(',');
      FormulaPtr b = formula();
      lex.expect(')');
      return Formula::truncsub(a, b);
    }
    if (id == "max" || id == "min") {
      lex.expect('(');
      auto xs = formula_list();
      lex.expect(')');
      return id == "max" ? Formula::fmax(std::move(xs))
                         : Formula::fmin(std::move(xs));
    }
    if (id == "sqrt") {
      lex.expect('(');
      FormulaPtr f = formula();
      lex.expect(')');
      return Formula::sqrt(f);
    }
    if (id == "d") {
      lex.expect('(');
      TermPtr a = term();
      lex.expect(',');
      TermPtr b = term();
      lex.expect(')');
      return Formula::dist(a, b);
    }
    throw ParseError("unknown formula symbol '" + id + "'", at);
  }

  // Converts degree-cap InvalidInput from the AST builders into a
  // positioned parse error.
  template <typename F>
  TermPtr guarded(F&& build) {
    try {
      return build();
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), lex.pos);
    }
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p(text);
  FormulaPtr f = p.formula();
  if (!p.lex.eof()) throw ParseError("trailing input", p.lex.pos);
  return f;
}

}  // namespace continua
