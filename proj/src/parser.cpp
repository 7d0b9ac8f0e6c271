#include "hors/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

#include "hors/error.hpp"

namespace hors {

namespace {

enum class Tok { ident, arrow, lparen, rparen, colon, equals, bottom, end };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

constexpr std::string_view kBottom = "⊥";

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }

bool ident_continue(unsigned char c) {
  return ident_start(c) || std::isdigit(c) || c == '\'' || c == '#' || c == '~' || c == '.';
}

std::vector<Token> lex_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const unsigned char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
    } else if (line.substr(i, 2) == "--") {
      break;
    } else if (line.substr(i, 2) == "->") {
      out.push_back({Tok::arrow, "->", col});
      i += 2;
    } else if (line.substr(i, kBottom.size()) == kBottom) {
      out.push_back({Tok::bottom, std::string(kBottom), col});
      i += kBottom.size();
    } else if (c == '(') {
      out.push_back({Tok::lparen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::rparen, ")", col});
      ++i;
    } else if (c == ':') {
      out.push_back({Tok::colon, ":", col});
      ++i;
    } else if (c == '=') {
      out.push_back({Tok::equals, "=", col});
      ++i;
    } else if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && ident_continue(static_cast<unsigned char>(line[j])) &&
             line.substr(j, kBottom.size()) != kBottom) {
        ++j;
      }
      out.push_back({Tok::ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else {
      throw ParseError(line_no, col, std::string("unexpected character '") + line[i] + "'");
    }
  }
  out.push_back({Tok::end, "", static_cast<int>(line.size()) + 1});
  return out;
}

class Cursor {
 public:
  Cursor(std::vector<Token> tokens, int line) : toks_(std::move(tokens)), line_(line) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  int line() const { return line_; }

  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) fail(peek(), "expected " + std::string(what));
    return next();
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(line_, t.column, msg + (t.kind == Tok::end ? " at end of line"
                                                                : " near '" + t.text + "'"));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
};

Type parse_type_expr(Cursor& c) {
  Type arg;
  if (c.at(Tok::lparen)) {
    c.next();
    arg = parse_type_expr(c);
    c.expect(Tok::rparen, "')'");
  } else {
    const Token& t = c.expect(Tok::ident, "type");
    if (t.text != "o") c.fail(t, "unknown base type");
  }
  if (c.at(Tok::arrow)) {
    c.next();
    return Type::arrow(arg, parse_type_expr(c));
  }
  return arg;
}

using Resolver = std::function<Symbol(const Token&)>;

Term parse_term_expr(Cursor& c, const Resolver& resolve);

std::pair<Term, int> parse_atom(Cursor& c, const Resolver& resolve) {
  const Token& t = c.peek();
  if (t.kind == Tok::lparen) {
    c.next();
    Term inner = parse_term_expr(c, resolve);
    c.expect(Tok::rparen, "')'");
    return {inner, t.column};
  }
  if (t.kind != Tok::ident) c.fail(t, "expected a term");
  c.next();
  return {Term(resolve(t)), t.column};
}

bool atom_follows(const Cursor& c) { return c.at(Tok::ident) || c.at(Tok::lparen); }

Term parse_term_expr(Cursor& c, const Resolver& resolve) {
  auto [head, head_col] = parse_atom(c, resolve);
  (void)head_col;
  Term acc = head;
  while (atom_follows(c)) {
    auto [arg, col] = parse_atom(c, resolve);
    try {
      acc = Term::apply(acc, {arg});
    } catch (const TypeMismatch& e) {
      throw ParseError(c.line(), col, std::string("type error: ") + e.what());
    }
  }
  return acc;
}

Resolver resolver_for(const Scheme& g, const std::vector<Symbol>* locals, int line) {
  return [&g, locals, line](const Token& t) -> Symbol {
    if (locals) {
      for (const Symbol& x : *locals) {
        if (x.name() == t.text) return x;
      }
    }
    const Symbol* s = g.find(t.text);
    if (!s) throw ParseError(line, t.column, "undeclared symbol '" + t.text + "'");
    return *s;
  };
}

void expect_end(Cursor& c) {
  if (!c.at(Tok::end)) c.fail(c.peek(), "unexpected trailing input");
}

std::vector<std::pair<int, std::string_view>> split_lines(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line_no++, line);
    start = end + 1;
  }
  return out;
}

}  // namespace

Scheme parse_scheme(std::string_view text) {
  Scheme g;
  struct Pending {
    int line;
    std::vector<Token> toks;
  };
  std::vector<Pending> later;
  bool have_start = false;

  for (auto [line_no, line] : split_lines(text)) {
    auto toks = lex_line(line, line_no);
    if (toks.front().kind == Tok::end) continue;
    const Token& kw = toks.front();
    if (kw.kind != Tok::ident) {
      throw ParseError(line_no, kw.column, "expected a declaration keyword");
    }
    if (kw.text == "terminal" || kw.text == "nonterminal" || kw.text == "var") {
      Cursor c(toks, line_no);
      c.next();
      const Token name = c.expect(Tok::ident, "symbol name");
      c.expect(Tok::colon, "':'");
      Type type = parse_type_expr(c);
      expect_end(c);
      const SymbolKind kind = kw.text == "terminal"      ? SymbolKind::terminal
                              : kw.text == "nonterminal" ? SymbolKind::nonterminal
                                                         : SymbolKind::variable;
      if (const Symbol* prev = g.find(name.text)) {
        const std::string why = prev->kind() == kind && !(prev->type() == type)
                                    ? "type annotation mismatch for '"
                                    : "duplicate declaration of '";
        throw ParseError(line_no, name.column, why + name.text + "'");
      }
      g.declare(Symbol(name.text, kind, type));
    } else if (kw.text == "start" || kw.text == "rule" || kw.text == "inert") {
      later.push_back({line_no, std::move(toks)});
    } else {
      throw ParseError(line_no, kw.column, "unknown keyword '" + kw.text + "'");
    }
  }

  for (auto& [line_no, toks] : later) {
    Cursor c(toks, line_no);
    const std::string kw = c.next().text;
    if (kw == "start") {
      const Token name = c.expect(Tok::ident, "start symbol");
      expect_end(c);
      if (have_start) throw ParseError(line_no, name.column, "start declared twice");
      if (!g.find(name.text)) {
        throw ParseError(line_no, name.column, "undeclared symbol '" + name.text + "'");
      }
      g.set_start(name.text);
      have_start = true;
    } else if (kw == "inert") {
      const Token name = c.expect(Tok::ident, "non-terminal");
      expect_end(c);
      const Symbol* s = g.find(name.text);
      if (!s || !s->is_nonterminal()) {
        throw ParseError(line_no, name.column, "'" + name.text + "' is not a non-terminal");
      }
      g.mark_inert(name.text);
    } else {
      const Token lhs_tok = c.expect(Tok::ident, "non-terminal");
      const Symbol* lhs = g.find(lhs_tok.text);
      if (!lhs) {
        throw ParseError(line_no, lhs_tok.column, "undeclared symbol '" + lhs_tok.text + "'");
      }
      if (!lhs->is_nonterminal()) {
        throw ParseError(line_no, lhs_tok.column, "'" + lhs_tok.text + "' is not a non-terminal");
      }
      std::vector<Symbol> params;
      while (c.at(Tok::ident)) {
        const Token& p = c.next();
        const Symbol* x = g.find(p.text);
        if (!x) throw ParseError(line_no, p.column, "undeclared symbol '" + p.text + "'");
        if (!x->is_variable()) {
          throw ParseError(line_no, p.column, "parameter '" + p.text + "' is not a variable");
        }
        params.push_back(*x);
      }
      c.expect(Tok::equals, "'='");
      Term body = parse_term_expr(c, resolver_for(g, nullptr, line_no));
      expect_end(c);
      g.add_rule(Rule{*lhs, std::move(params), std::move(body)});
    }
  }
  return g;
}

std::string render(const Scheme& g) {
  std::ostringstream out;
  auto decls = [&](std::vector<Symbol> syms) {
    std::sort(syms.begin(), syms.end(),
              [](const Symbol& a, const Symbol& b) { return a.name() < b.name(); });
    for (const Symbol& s : syms) {
      out << to_string(s.kind()) << ' ' << s.name() << " : " << s.type().to_string() << '\n';
    }
  };
  decls(g.terminals());
  decls(g.nonterminals());
  decls(g.variables());
  std::vector<std::string> inert = g.inert();
  std::sort(inert.begin(), inert.end());
  for (const auto& name : inert) out << "inert " << name << '\n';
  if (!g.start_name().empty()) out << "start " << g.start_name() << '\n';

  // Rules follow the declaration order of their non-terminals.
  std::vector<const Rule*> ordered;
  std::vector<bool> done(g.rules().size(), false);
  for (const Symbol& f : g.nonterminals()) {
    for (std::size_t i = 0; i < g.rules().size(); ++i) {
      if (!done[i] && g.rules()[i].lhs.name() == f.name()) {
        ordered.push_back(&g.rules()[i]);
        done[i] = true;
      }
    }
  }
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    if (!done[i]) ordered.push_back(&g.rules()[i]);
  }
  for (const Rule* r : ordered) {
    out << "rule " << r->lhs.name();
    for (const Symbol& x : r->params) out << ' ' << x.name();
    out << " = " << r->body.to_string() << '\n';
  }
  return out.str();
}

Type parse_type(std::string_view text) {
  Cursor c(lex_line(text, 1), 1);
  Type t = parse_type_expr(c);
  expect_end(c);
  return t;
}

Term parse_term(std::string_view text, const Scheme& g) {
  Cursor c(lex_line(text, 1), 1);
  Term t = parse_term_expr(c, resolver_for(g, nullptr, 1));
  expect_end(c);
  return t;
}

namespace {

PartialTree parse_tree_expr(Cursor& c, const Scheme& g, bool allow_args);

PartialTree parse_tree_atom(Cursor& c, const Scheme& g) {
  if (c.at(Tok::lparen)) {
    c.next();
    PartialTree t = parse_tree_expr(c, g, true);
    c.expect(Tok::rparen, "')'");
    return t;
  }
  return parse_tree_expr(c, g, false);
}

PartialTree parse_tree_expr(Cursor& c, const Scheme& g, bool allow_args) {
  const Token t = c.next();
  if (t.kind == Tok::bottom) return PartialTree::bottom();
  if (t.kind != Tok::ident) c.fail(t, "expected a tree");
  const Symbol* s = g.find(t.text);
  if (!s || !s->is_terminal()) {
    throw ParseError(c.line(), t.column, "'" + t.text + "' is not a terminal");
  }
  std::vector<PartialTree> children;
  if (allow_args) {
    while (c.at(Tok::ident) || c.at(Tok::lparen) || c.at(Tok::bottom)) {
      children.push_back(parse_tree_atom(c, g));
    }
  }
  try {
    return PartialTree::node(*s, std::move(children));
  } catch (const TypeMismatch& e) {
    throw ParseError(c.line(), t.column, e.what());
  }
}

}  // namespace

PartialTree parse_tree(std::string_view text, const Scheme& g) {
  Cursor c(lex_line(text, 1), 1);
  PartialTree t = parse_tree_expr(c, g, true);
  expect_end(c);
  return t;
}

}  // namespace hors
