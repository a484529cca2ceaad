#include "ltpal/parser.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace ltpal {

ParseError::ParseError(std::string message, int line, int column, std::set<std::string> expected)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Ident, Slot, Colon, Comma, LParen, RParen, LBrack, RBrack, LBrace, RBrace, Not, And, Or, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

bool ident_char(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c >= 0x80) return true;
  if (std::isspace(c) || !std::isprint(c)) return false;
  if (std::string_view(":,()[]{}!&|$").find(static_cast<char>(c)) != std::string_view::npos) return false;
  if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') return false;
  return true;
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), line, col});
    i += len;
    col += static_cast<int>(len);
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    switch (c) {
      case ':': push(Tok::Colon, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '!': push(Tok::Not, 1); continue;
      case '&': push(Tok::And, 1); continue;
      case '|': push(Tok::Or, 1); continue;
      default: break;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      push(Tok::Arrow, 2);
      continue;
    }
    if (c == '$') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1 || s[i + 1] == '0') throw ParseError("placeholder must be $1, $2, ...", line, col);
      push(Tok::Slot, j - i);
      continue;
    }
    if (!ident_char(s, i)) throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
    std::size_t j = i;
    while (j < s.size() && ident_char(s, j)) ++j;
    push(Tok::Ident, j - i);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(std::string_view w) {
  return w == "X" || w == "F" || w == "G" || w == "U" || w == "R" || w == "W" || w == "true" || w == "false";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  TemporalFormula parse_all() {
    auto f = implication();
    if (peek().kind != Tok::End) fail({"end of input", "'->'", "'|'", "'&'"});
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool ident_is(std::string_view word, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == word;
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const auto& t = peek();
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw ParseError("expected " + list + ", found " + describe(t), t.line, t.column, std::move(expected));
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail({what});
    return take();
  }

  void temporal_allowed(const Token& op) const {
    if (epistemic_depth_ > 0)
      throw LevelError("temporal operator '" + op.text + "' inside epistemic scope", op.line, op.column);
  }

  PalFormula require_pal(const TemporalFormula& f) const {
    // Temporal operators are rejected under K/D/[ ] before we get here.
    return *f.as_pal();
  }

  TemporalFormula implication() {
    auto lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      take();
      return timplies(lhs, implication());
    }
    return lhs;
  }

  TemporalFormula disjunction() {
    auto lhs = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      lhs = tor(lhs, conjunction());
    }
    return lhs;
  }

  TemporalFormula conjunction() {
    auto lhs = unary();
    while (peek().kind == Tok::And) {
      take();
      lhs = tand(lhs, unary());
    }
    return lhs;
  }

  TemporalFormula scoped_unary() {
    ++epistemic_depth_;
    auto f = unary();
    --epistemic_depth_;
    return f;
  }

  AgentId agent_name() {
    if (peek().kind != Tok::Ident) fail({"agent id"});
    return take().text;
  }

  TemporalFormula unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      take();
      return tnot(unary());
    }
    if (t.kind == Tok::LBrack) {
      take();
      ++epistemic_depth_;
      auto psi = implication();
      expect(Tok::RBrack, "']'");
      auto body = unary();
      --epistemic_depth_;
      return leaf(announce(require_pal(psi), require_pal(body)));
    }
    if (t.kind == Tok::Ident && peek(1).kind == Tok::LBrace && (t.text == "K" || t.text == "D")) {
      bool is_k = t.text == "K";
      take();
      take();
      std::vector<AgentId> agents{agent_name()};
      while (!is_k && peek().kind == Tok::Comma) {
        take();
        agents.push_back(agent_name());
      }
      expect(Tok::RBrace, is_k ? "'}'" : "',' or '}'");
      auto sub = require_pal(scoped_unary());
      return leaf(is_k ? knows(agents.front(), sub) : dist(std::move(agents), sub));
    }
    if (t.kind == Tok::Ident && peek(1).kind != Tok::Colon && (t.text == "X" || t.text == "F" || t.text == "G")) {
      Token op = take();
      temporal_allowed(op);
      auto sub = unary();
      if (op.text == "X") return next(sub);
      if (op.text == "F") return eventually(sub);
      return globally(sub);
    }
    return primary();
  }

  TemporalFormula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      take();
      auto lhs = implication();
      if (peek().kind == Tok::Ident && (ident_is("U") || ident_is("R") || ident_is("W")) &&
          peek(1).kind != Tok::Colon) {
        Token op = take();
        temporal_allowed(op);
        auto rhs = implication();
        expect(Tok::RParen, "')'");
        if (op.text == "U") return until(lhs, rhs);
        if (op.text == "R") return release(lhs, rhs);
        return weak_until(lhs, rhs);
      }
      if (peek().kind != Tok::RParen) fail({"')'", "'U'", "'R'", "'W'", "'->'", "'|'", "'&'"});
      take();
      return lhs;
    }
    if (t.kind == Tok::Slot) {
      Token s = take();
      int k = 0;
      try {
        k = std::stoi(s.text.substr(1));
      } catch (const std::exception&) {
        throw ParseError("placeholder index too large", s.line, s.column);
      }
      return leaf(slot(k));
    }
    if (t.kind == Tok::Ident) {
      if (peek(1).kind == Tok::Colon) {
        Token data = take();
        take();
        if (peek().kind != Tok::Ident) fail({"class id"});
        Token cls = take();
        return leaf(prop(data.text, cls.text));
      }
      if (t.text == "true" || t.text == "false") return leaf(take().text == "true" ? top() : bottom());
      if (!is_keyword(t.text)) {
        Token p = take();
        return leaf(prop(p.text, p.text));
      }
    }
    fail({"atom", "placeholder", "'true'", "'false'", "'('", "'!'", "'['", "'K{'", "'D{'", "'X'", "'F'", "'G'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int epistemic_depth_ = 0;
};

}  // namespace

TemporalFormula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

PalFormula parse_pal(std::string_view text) {
  auto f = parse_formula(text);
  if (const auto* p = f.as_pal()) return *p;
  throw LevelError("expected a PAL formula without temporal operators", 1, 1);
}

Atom parse_atom(std::string_view text) {
  auto f = parse_pal(text);
  if (const auto* p = std::get_if<pal::Prop>(&f.node().v)) return p->atom;
  throw ParseError("expected an atom such as x:Cat, got '" + std::string(text) + "'", 1, 1);
}

}  // namespace ltpal
