#include "idxlog/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace idxlog {

ParseError::ParseError(const std::string& msg, SourceSpan span)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + " (offset " +
                         std::to_string(span.start) + "): " + msg),
      span_(span),
      detail_(msg) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- Lexer

namespace {

enum class Tok { Ident, NVar, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t start, end;
};

class Lexer {
 public:
  // comment: "//" for formulas, "#" for structure/machine files.
  Lexer(std::string_view src, std::string_view comment) : src_(src) {
    std::size_t i = 0;
    line_starts_.push_back(0);
    for (std::size_t k = 0; k < src.size(); ++k)
      if (src[k] == '\n') line_starts_.push_back(k + 1);
    while (true) {
      while (i < src.size()) {
        if (std::isspace(static_cast<unsigned char>(src[i]))) {
          ++i;
        } else if (src.substr(i, comment.size()) == comment) {
          while (i < src.size() && src[i] != '\n') ++i;
        } else {
          break;
        }
      }
      if (i >= src.size()) break;
      const std::size_t s = i;
      const char c = src[i];
      auto ident_char = [&](std::size_t k) {
        return k < src.size() && (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '_');
      };
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (ident_char(i)) ++i;
        toks_.push_back({Tok::Ident, std::string(src.substr(s, i - s)), s, i});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        toks_.push_back({Tok::Number, std::string(src.substr(s, i - s)), s, i});
      } else if (c == '#' && comment != "#") {
        ++i;
        if (!ident_char(i)) throw ParseError("expected a variable name after '#'", span(s, i));
        while (ident_char(i)) ++i;
        toks_.push_back({Tok::NVar, std::string(src.substr(s + 1, i - s - 1)), s, i});
      } else {
        static const char* multi[] = {"<->", "->", "<="};
        bool matched = false;
        for (const char* m : multi) {
          std::string_view mv(m);
          if (src.substr(i, mv.size()) == mv) {
            toks_.push_back({Tok::Sym, std::string(mv), i, i + mv.size()});
            i += mv.size();
            matched = true;
            break;
          }
        }
        if (!matched) {
          static const std::string singles = "()[]{},.:;&|!=/<*-_";
          if (singles.find(c) == std::string::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", span(i, i + 1));
          toks_.push_back({Tok::Sym, std::string(1, c), i, i + 1});
          ++i;
        }
      }
    }
    toks_.push_back({Tok::End, "", src.size(), src.size()});
  }

  SourceSpan span(std::size_t s, std::size_t e) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), s);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    SourceSpan sp;
    sp.start = s;
    sp.end = e;
    sp.line = static_cast<unsigned>(line);
    sp.column = static_cast<unsigned>(s - line_starts_[line - 1] + 1);
    return sp;
  }

  const std::vector<Token>& tokens() const { return toks_; }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  std::vector<std::size_t> line_starts_;
};

// ---------------------------------------------------------------- Formula parser

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"EX", "ALL", "IFP", "LFP", "PFP", "SIFP", "SLFP", "SPFP", "index"};
  return kw.count(s) > 0;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Vocabulary& v) : lex_(text, "//"), toks_(lex_.tokens()), vocab_(v) {}

  FormulaPtr parse() {
    auto f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool at_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(msg, lex_.span(t.start, t.end));
  }
  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(std::string("expected '") + s + "'" + (peek().kind == Tok::End ? " before end of input" : ""));
    take();
  }
  std::string expect_nvar() {
    if (peek().kind != Tok::NVar) fail("expected an n-variable (#name)");
    return take().text;
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected an identifier");
    return take().text;
  }

  FormulaPtr spanned(FormulaPtr f, std::size_t start) const {
    auto g = std::make_shared<Formula>(*f);
    std::size_t end = pos_ > 0 ? toks_[pos_ - 1].end : start;
    g->span = lex_.span(start, end);
    return g;
  }
  TermPtr spanned(TermPtr t, std::size_t start) const {
    auto g = std::make_shared<Term>(*t);
    std::size_t end = pos_ > 0 ? toks_[pos_ - 1].end : start;
    g->span = lex_.span(start, end);
    return g;
  }

  FormulaPtr formula() { return binary_level(1); }

  FormulaPtr binary_level(int level) {
    if (level > 4) return unary();
    static const char* ops[] = {"", "<->", "->", "|", "&"};
    const std::size_t start = peek().start;
    auto lhs = binary_level(level + 1);
    while (at_sym(ops[level])) {
      take();
      auto rhs = binary_level(level + 1);
      switch (level) {
        case 1: lhs = iff(lhs, rhs); break;
        case 2: lhs = implies(lhs, rhs); break;
        case 3: lhs = disj(lhs, rhs); break;
        default: lhs = conj(lhs, rhs); break;
      }
      lhs = spanned(lhs, start);
    }
    return lhs;
  }

  FormulaPtr unary() {
    const std::size_t start = peek().start;
    if (at_sym("!")) {
      take();
      return spanned(neg(unary()), start);
    }
    if (at_ident("EX")) {
      take();
      if (peek().kind == Tok::NVar) {
        auto x = take().text;
        expect_sym(".");
        return spanned(exists_n(x, formula()), start);
      }
      auto x = expect_ident();
      expect_sym("=");
      if (!at_ident("index")) fail("expected 'index'");
      take();
      expect_sym("{");
      auto nx = expect_nvar();
      expect_sym(":");
      auto guard = formula();
      expect_sym("}");
      expect_sym(".");
      auto body = formula();
      return spanned(guarded_exists(x, nx, guard, body), start);
    }
    if (at_ident("ALL")) {
      take();
      auto x = expect_nvar();
      expect_sym(".");
      return spanned(forall_n(x, formula()), start);
    }
    return primary();
  }

  FormulaPtr primary() {
    const std::size_t start = peek().start;
    if (at_sym("(")) {
      take();
      auto f = formula();
      expect_sym(")");
      return f;
    }
    if (at_sym("[")) return fixpoint_expr();
    if (peek().kind == Tok::NVar) {
      auto a = take().text;
      if (at_sym("<=")) {
        take();
        return spanned(nleq(a, expect_nvar()), start);
      }
      if (at_sym("=")) {
        take();
        return spanned(neq(a, expect_nvar()), start);
      }
      fail("expected '<=' or '=' after n-variable");
    }
    if (peek().kind == Tok::Ident && !is_keyword(peek().text) && at_sym("(", 1)) {
      const std::string name = peek().text;
      const Symbol* s = vocab_.find(name);
      if (s && s->kind == SymbolKind::Relation) {
        take();
        take();
        std::vector<TermPtr> args;
        if (!at_sym(")")) {
          args.push_back(term());
          while (at_sym(",")) {
            take();
            args.push_back(term());
          }
        }
        expect_sym(")");
        return spanned(rel(name, args), start);
      }
      if (!s && find_macro(name)) return macro_call();
      if (!s) {
        take();
        take();
        std::vector<std::string> args;
        if (!at_sym(")")) {
          args.push_back(expect_nvar());
          while (at_sym(",")) {
            take();
            args.push_back(expect_nvar());
          }
        }
        expect_sym(")");
        return spanned(relvar(name, args), start);
      }
    }
    auto lhs = term();
    if (at_sym("<=")) {
      take();
      return spanned(leq(lhs, term()), start);
    }
    if (at_sym("=")) {
      take();
      if (at_ident("index")) {
        take();
        expect_sym("{");
        auto nx = expect_nvar();
        expect_sym(":");
        auto body = formula();
        expect_sym("}");
        return spanned(index_eq(lhs, nx, body), start);
      }
      return spanned(eq(lhs, term()), start);
    }
    fail("expected '<=' or '=' after term");
  }

  TermPtr term() {
    const std::size_t start = peek().start;
    if (peek().kind == Tok::NVar) fail("n-variable used where a term of sort v is expected");
    auto name = expect_ident();
    const Symbol* s = vocab_.find(name);
    if (s && s->kind == SymbolKind::Function) {
      expect_sym("(");
      std::vector<TermPtr> args;
      if (!at_sym(")")) {
        args.push_back(term());
        while (at_sym(",")) {
          take();
          args.push_back(term());
        }
      }
      expect_sym(")");
      return spanned(func(name, args), start);
    }
    if (s && s->kind == SymbolKind::Constant) return spanned(constant(name), start);
    if (s) fail("relation symbol '" + name + "' used as a term");
    return spanned(vvar(name), start);
  }

  FormulaPtr fixpoint_expr() {
    const std::size_t start = peek().start;
    expect_sym("[");
    if (peek().kind != Tok::Ident) fail("expected a fixed-point keyword");
    static const std::map<std::string, FpKind> kinds = {{"IFP", FpKind::IFP},   {"LFP", FpKind::LFP},
                                                         {"PFP", FpKind::PFP},   {"SIFP", FpKind::SIFP},
                                                         {"SLFP", FpKind::SLFP}, {"SPFP", FpKind::SPFP}};
    auto it = kinds.find(peek().text);
    if (it == kinds.end()) fail("expected IFP, LFP, PFP, SIFP, SLFP or SPFP");
    take();
    std::vector<FixComponent> comps;
    do {
      if (!comps.empty()) take();  // ';'
      FixComponent c;
      while (peek().kind == Tok::NVar) {
        c.vars.push_back(take().text);
        expect_sym(",");
      }
      c.rel = expect_ident();
      expect_sym(".");
      c.body = formula();
      comps.push_back(std::move(c));
    } while (at_sym(";"));
    expect_sym("]");
    expect_sym("(");
    std::vector<std::string> applied;
    if (!at_sym(")")) {
      applied.push_back(expect_nvar());
      while (at_sym(",")) {
        take();
        applied.push_back(expect_nvar());
      }
    }
    expect_sym(")");
    return spanned(fixpoint(it->second, std::move(comps), std::move(applied)), start);
  }

  MacroArg macro_arg(char kind) {
    switch (kind) {
      case 'T': return term_arg(term());
      case 'N': return nvar_arg(expect_nvar());
      default: {
        if (at_sym("{")) {
          take();
          std::vector<std::string> vars{expect_nvar()};
          while (at_sym(",")) {
            take();
            vars.push_back(expect_nvar());
          }
          expect_sym(":");
          auto body = formula();
          expect_sym("}");
          return lambda_arg(vars, body);
        }
        return rel_arg(expect_ident());
      }
    }
  }

  FormulaPtr macro_call() {
    const std::size_t start = peek().start;
    const std::string name = take().text;
    const MacroSignature* sig = find_macro(name);
    expect_sym("(");
    std::vector<MacroArg> args;
    if (sig->params == "*") {
      if (!at_sym(")")) {
        args.push_back(nvar_arg(expect_nvar()));
        while (at_sym(",")) {
          take();
          args.push_back(nvar_arg(expect_nvar()));
        }
      }
    } else {
      for (std::size_t i = 0; i < sig->params.size(); ++i) {
        if (i > 0) expect_sym(",");
        args.push_back(macro_arg(sig->params[i]));
      }
    }
    expect_sym(")");
    return spanned(macro(name, args), start);
  }

  Lexer lex_;
  const std::vector<Token>& toks_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- Rendering

int precedence(const Formula& f) {
  switch (f.kind) {
    case FKind::Iff: return 1;
    case FKind::Implies: return 2;
    case FKind::Or: return 3;
    case FKind::And: return 4;
    case FKind::Not: return 5;
    case FKind::ExistsN:
    case FKind::ForallN:
    case FKind::GuardedExists: return 0;
    default: return 6;
  }
}

void render(const FormulaPtr& f, std::string& out);

void render_at(const FormulaPtr& f, int min_prec, std::string& out) {
  if (precedence(*f) < min_prec) {
    out += '(';
    render(f, out);
    out += ')';
  } else {
    render(f, out);
  }
}

void join_nvars(const std::vector<std::string>& xs, std::string& out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += '#' + xs[i];
  }
}

void render(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case FKind::LeqV: out += render_term(f->terms[0]) + " <= " + render_term(f->terms[1]); return;
    case FKind::EqV: out += render_term(f->terms[0]) + " = " + render_term(f->terms[1]); return;
    case FKind::LeqN: out += "#" + f->vars[0] + " <= #" + f->vars[1]; return;
    case FKind::EqN: out += "#" + f->vars[0] + " = #" + f->vars[1]; return;
    case FKind::Rel: {
      out += f->name + "(";
      for (std::size_t i = 0; i < f->terms.size(); ++i) out += (i ? ", " : "") + render_term(f->terms[i]);
      out += ")";
      return;
    }
    case FKind::RelVar:
      out += f->name + "(";
      join_nvars(f->vars, out);
      out += ")";
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff: {
      static const std::map<FKind, const char*> op = {
          {FKind::And, " & "}, {FKind::Or, " | "}, {FKind::Implies, " -> "}, {FKind::Iff, " <-> "}};
      const int p = precedence(*f);
      render_at(f->subs[0], p, out);
      out += op.at(f->kind);
      render_at(f->subs[1], p + 1, out);
      return;
    }
    case FKind::Not:
      out += "!";
      render_at(f->subs[0], 5, out);
      return;
    case FKind::ExistsN:
    case FKind::ForallN:
      out += (f->kind == FKind::ExistsN ? "EX #" : "ALL #") + f->vars[0] + ". ";
      render(f->subs[0], out);
      return;
    case FKind::IndexEq:
      out += render_term(f->terms[0]) + " = index{#" + f->vars[0] + " : ";
      render(f->subs[0], out);
      out += "}";
      return;
    case FKind::GuardedExists:
      out += "EX " + f->vars[0] + " = index{#" + f->vars[1] + " : ";
      render(f->subs[0], out);
      out += "}. ";
      render(f->subs[1], out);
      return;
    case FKind::Fixpoint:
      out += "[" + fp_keyword(f->fp) + " ";
      for (std::size_t i = 0; i < f->components.size(); ++i) {
        const auto& c = f->components[i];
        if (i) out += " ; ";
        for (const auto& x : c.vars) out += "#" + x + ", ";
        out += c.rel + " . ";
        render(c.body, out);
      }
      out += "](";
      join_nvars(f->vars, out);
      out += ")";
      return;
    case FKind::Macro:
      out += f->name + "(";
      for (std::size_t i = 0; i < f->margs.size(); ++i) {
        const auto& a = f->margs[i];
        if (i) out += ", ";
        switch (a.kind) {
          case MacroArg::Kind::Term: out += render_term(a.term); break;
          case MacroArg::Kind::NVar: out += "#" + a.name; break;
          case MacroArg::Kind::Rel: out += a.name; break;
          case MacroArg::Kind::Lambda:
            out += "{";
            join_nvars(a.vars, out);
            out += " : ";
            render(a.body, out);
            out += "}";
            break;
        }
      }
      out += ")";
      return;
  }
}

}  // namespace

FormulaPtr parse_formula_unchecked(std::string_view text, const Vocabulary& v) {
  FormulaParser p(text, v);
  return p.parse();
}

FormulaPtr parse_formula(std::string_view text, const Vocabulary& v) {
  auto f = parse_formula_unchecked(text, v);
  auto errs = check_well_formed(f, v);
  if (!errs.empty()) throw IllFormed(std::move(errs));
  return f;
}

std::string render_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::VVar:
    case TermKind::Const: return t->name;
    case TermKind::NVar: return "#" + t->name;
    case TermKind::Func: {
      std::string out = t->name + "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) out += (i ? ", " : "") + render_term(t->args[i]);
      return out + ")";
    }
  }
  return "?";
}

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  render(f, out);
  return out;
}

// ---------------------------------------------------------------- Structures

namespace {

class StructParser {
 public:
  explicit StructParser(std::string_view text) : lex_(text, "#"), toks_(lex_.tokens()) {}

  Structure parse() {
    std::uint64_t n = 0;
    bool have_domain = false;
    Vocabulary v;
    struct RelData {
      std::string name;
      std::vector<Tuple> tuples;
    };
    std::vector<RelData> rels;
    std::vector<std::pair<std::string, std::uint64_t>> consts;
    std::vector<std::pair<std::string, std::vector<std::uint64_t>>> funs;
    auto declare = [&](const Token& at, auto add) {
      if (v.find(at.text)) throw ParseError("duplicate symbol '" + at.text + "'", lex_.span(at.start, at.end));
      add();
    };
    while (peek().kind != Tok::End) {
      const Token kw = take();
      if (kw.kind != Tok::Ident) fail(kw, "expected 'domain', 'rel', 'const' or 'fun'");
      if (kw.text == "domain") {
        if (have_domain) fail(kw, "duplicate domain declaration");
        n = number();
        have_domain = true;
      } else if (kw.text == "rel") {
        const Token name = ident();
        expect("/");
        unsigned arity = static_cast<unsigned>(number());
        expect("=");
        expect("{");
        RelData rd{name.text, {}};
        while (!at("}")) {
          if (!rd.tuples.empty()) expect(",");
          expect("(");
          Tuple t;
          if (!at(")")) {
            t.push_back(static_cast<Elem>(number()));
            while (at(",")) {
              take();
              t.push_back(static_cast<Elem>(number()));
            }
          }
          expect(")");
          if (t.size() != arity)
            throw ParseError("tuple of width " + std::to_string(t.size()) + " for relation " + name.text + "/" +
                                 std::to_string(arity),
                             lex_.span(name.start, name.end));
          rd.tuples.push_back(std::move(t));
        }
        expect("}");
        declare(name, [&] { v.add_relation(name.text, arity); });
        rels.push_back(std::move(rd));
      } else if (kw.text == "const") {
        const Token name = ident();
        expect("=");
        std::uint64_t val = number();
        declare(name, [&] { v.add_constant(name.text); });
        consts.emplace_back(name.text, val);
      } else if (kw.text == "fun") {
        const Token name = ident();
        expect("/");
        unsigned arity = static_cast<unsigned>(number());
        expect("=");
        expect("[");
        std::vector<std::uint64_t> table;
        while (!at("]")) {
          if (!table.empty()) expect(",");
          table.push_back(number());
        }
        expect("]");
        declare(name, [&] { v.add_function(name.text, arity); });
        funs.emplace_back(name.text, std::move(table));
      } else {
        fail(kw, "unknown declaration '" + kw.text + "'");
      }
    }
    if (!have_domain) throw ParseError("missing 'domain <n>' declaration", lex_.span(0, 0));
    Structure s(v, n);
    for (const auto& r : rels)
      for (const auto& t : r.tuples) s.add_tuple(r.name, t);
    for (const auto& [c, val] : consts) s.set_constant(c, val);
    for (const auto& [f, table] : funs) s.set_function(f, table);
    require_valid(s);
    return s;
  }

 private:
  const Token& peek() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(msg, lex_.span(t.start, t.end));
  }
  void expect(const char* s) {
    if (!at(s)) fail(peek(), std::string("expected '") + s + "'");
    take();
  }
  Token ident() {
    if (peek().kind != Tok::Ident) fail(peek(), "expected a symbol name");
    return take();
  }
  std::uint64_t number() {
    if (peek().kind != Tok::Number) fail(peek(), "expected a number");
    const Token& t = take();
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      fail(t, "number out of range");
    }
  }

  Lexer lex_;
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Structure parse_structure(std::string_view text) {
  StructParser p(text);
  return p.parse();
}

std::string render_structure(const Structure& s) {
  std::ostringstream out;
  out << "domain " << s.size() << "\n";
  const auto& syms = s.vocabulary().symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const auto& sym = syms[i];
    const int idx = static_cast<int>(i);
    switch (sym.kind) {
      case SymbolKind::Relation: {
        out << "rel " << sym.name << "/" << sym.arity << " = {";
        const auto& bits = s.relation_bits(idx);
        bool first = true;
        for (std::uint64_t m = 0; m < bits.size(); ++m) {
          if (!bits[m]) continue;
          auto t = lex_unrank(m, sym.arity, s.size());
          out << (first ? "" : ", ") << "(";
          for (std::size_t j = 0; j < t.size(); ++j) out << (j ? "," : "") << t[j];
          out << ")";
          first = false;
        }
        out << "}\n";
        break;
      }
      case SymbolKind::Constant: out << "const " << sym.name << " = " << s.constant(idx) << "\n"; break;
      case SymbolKind::Function: {
        out << "fun " << sym.name << "/" << sym.arity << " = [";
        const auto& tab = s.function_table(idx);
        for (std::size_t j = 0; j < tab.size(); ++j) out << (j ? ", " : "") << tab[j];
        out << "]\n";
        break;
      }
    }
  }
  return out.str();
}

}  // namespace idxlog
