#include <cctype>
#include <charconv>
#include <map>

#include "fsv/frontend.hpp"

namespace fsv {

namespace {

enum class Tok : uint8_t {
  Word,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Dot,
  Semi,
  Assign,
  Arrow,
  IffTok,
  Amp,
  Pipe,
  Tilde,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::size_t begin, std::size_t end, std::string t = {}) {
    out.push_back(Token{kind, std::move(t), {begin, end}});
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (text.substr(i, 3) == "<->") {
      push(Tok::IffTok, start, i += 3);
      continue;
    }
    if (text.substr(i, 2) == "->") {
      push(Tok::Arrow, start, i += 2);
      continue;
    }
    // unicode aliases for the connectives and predicates
    if (text.substr(i, 2) == "\xC2\xAC") {
      push(Tok::Tilde, start, i += 2);
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\x88") {
      push(Tok::Word, start, i += 3, "in");
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x89\x88") {
      push(Tok::Word, start, i += 3, "eq");
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\x80") {
      push(Tok::Word, start, i += 3, "forall");
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\x83") {
      push(Tok::Word, start, i += 3, "exists");
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\xA7") {
      push(Tok::Amp, start, i += 3);
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x88\xA8") {
      push(Tok::Pipe, start, i += 3);
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x86\x92") {
      push(Tok::Arrow, start, i += 3);
      continue;
    }
    if (text.substr(i, 3) == "\xE2\x86\x94") {
      push(Tok::IffTok, start, i += 3);
      continue;
    }
    switch (c) {
      case '(':
        push(Tok::LParen, start, ++i);
        continue;
      case ')':
        push(Tok::RParen, start, ++i);
        continue;
      case '{':
        push(Tok::LBrace, start, ++i);
        continue;
      case '}':
        push(Tok::RBrace, start, ++i);
        continue;
      case ':':
        push(Tok::Colon, start, ++i);
        continue;
      case ',':
        push(Tok::Comma, start, ++i);
        continue;
      case '.':
        push(Tok::Dot, start, ++i);
        continue;
      case ';':
        push(Tok::Semi, start, ++i);
        continue;
      case '=':
        push(Tok::Assign, start, ++i);
        continue;
      case '&':
        push(Tok::Amp, start, ++i);
        continue;
      case '|':
        push(Tok::Pipe, start, ++i);
        continue;
      case '~':
        push(Tok::Tilde, start, ++i);
        continue;
      default:
        break;
    }
    if (word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && word_char(text[j])) ++j;
      push(Tok::Word, start, j, std::string(text.substr(i, j - i)));
      i = j;
      continue;
    }
    throw ParseError("unexpected character", {start, start + 1});
  }
  push(Tok::End, text.size(), text.size());
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "let" || w == "in" || w == "eq" || w == "forall" || w == "exists" || w == "hat" ||
         w == "univ";
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, NameStore& store)
      : tokens_(lex(text)), store_(store) {}

  ParsedFormula parse_input() {
    ParsedFormula out;
    while (peek().kind == Tok::Word && peek().text == "let") {
      advance();
      Token name = expect(Tok::Word, "name");
      if (is_keyword(name.text)) throw ParseError("reserved word used as name", name.span);
      expect(Tok::Assign, "'='");
      NameId id = parse_ground_term();
      expect(Tok::Semi, "';'");
      lets_[name.text] = id;
      out.lets.emplace_back(name.text, id);
    }
    out.formula = parse_formula_top();
    expect(Tok::End, "end of input");
    return out;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  NameStore& store_;
  std::map<std::string, NameId> lets_;

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind)
      throw ParseError("expected " + what, peek().span, what);
    Token t = peek();
    advance();
    return t;
  }

  FormulaPtr parse_formula_top() { return parse_iff(); }

  FormulaPtr parse_iff() {
    FormulaPtr lhs = parse_imp();
    while (peek().kind == Tok::IffTok) {
      advance();
      FormulaPtr rhs = parse_imp();
      lhs = f_and(f_implies(lhs, rhs), f_implies(rhs, lhs));
    }
    return lhs;
  }

  FormulaPtr parse_imp() {
    FormulaPtr lhs = parse_or();
    if (peek().kind == Tok::Arrow) {
      advance();
      return f_implies(lhs, parse_imp());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (peek().kind == Tok::Pipe) {
      advance();
      lhs = f_or(lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (peek().kind == Tok::Amp) {
      advance();
      lhs = f_and(lhs, parse_unary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (peek().kind == Tok::Tilde) {
      advance();
      return f_not(parse_unary());
    }
    if (peek().kind == Tok::Word && (peek().text == "forall" || peek().text == "exists")) {
      bool universal = peek().text == "forall";
      advance();
      Token var = expect(Tok::Word, "variable");
      if (is_keyword(var.text)) throw ParseError("reserved word used as variable", var.span);
      if (peek().kind == Tok::Word && peek().text == "in") {
        advance();
        Term range = parse_term();
        expect(Tok::Dot, "'.'");
        FormulaPtr body = parse_formula_top();
        return universal ? f_bforall(var.text, range, body) : f_bexists(var.text, range, body);
      }
      expect(Tok::Dot, "'.'");
      FormulaPtr body = parse_formula_top();
      return universal ? f_forall(var.text, body) : f_exists(var.text, body);
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    if (peek().kind == Tok::LParen) {
      advance();
      FormulaPtr f = parse_formula_top();
      expect(Tok::RParen, "')'");
      return f;
    }
    Term lhs = parse_term();
    Token rel = expect(Tok::Word, "'in' or 'eq'");
    if (rel.text == "in") return f_member(lhs, parse_term());
    if (rel.text == "eq") return f_equal(lhs, parse_term());
    throw ParseError("expected 'in' or 'eq'", rel.span, "in|eq");
  }

  Term parse_term() {
    const Token& t = peek();
    if (t.kind == Tok::LBrace) return Term::constant(parse_name_literal());
    if (t.kind == Tok::Word && t.text == "hat") {
      advance();
      expect(Tok::LParen, "'('");
      Hf h = parse_set_literal();
      expect(Tok::RParen, "')'");
      return Term::constant(store_.hat_embed(h));
    }
    if (t.kind == Tok::Word && t.text == "univ") {
      advance();
      expect(Tok::LParen, "'('");
      Token num = expect(Tok::Word, "rank bound");
      unsigned k = 0;
      auto [p, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), k);
      if (ec != std::errc{} || p != num.text.data() + num.text.size())
        throw ParseError("expected a rank bound", num.span);
      expect(Tok::RParen, "')'");
      return Term::constant(store_.universal_name(k));
    }
    if (t.kind == Tok::Word) {
      if (is_keyword(t.text)) throw ParseError("reserved word used as term", t.span);
      advance();
      auto it = lets_.find(t.text);
      if (it != lets_.end()) return Term::constant(it->second);
      return Term::variable(t.text);
    }
    throw ParseError("expected a term", t.span, "term");
  }

  NameId parse_ground_term() {
    Term t = parse_term();
    if (t.kind != Term::Kind::Constant)
      throw ParseError("let binding needs a ground term", peek().span);
    return t.name;
  }

  NameId parse_name_literal() {
    expect(Tok::LBrace, "'{'");
    std::vector<std::pair<NameId, Element>> entries;
    if (peek().kind == Tok::RBrace) {
      advance();
      return store_.empty_name();
    }
    while (true) {
      Term child = parse_term();
      if (child.kind != Term::Kind::Constant)
        throw ParseError("name literal entries need ground children", peek().span);
      expect(Tok::Colon, "':'");
      Token value = expect(Tok::Word, "element label");
      auto e = store_.algebra().find(value.text);
      if (!e) throw ParseError("unknown element label '" + value.text + "'", value.span);
      entries.emplace_back(child.name, *e);
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBrace, "'}'");
      break;
    }
    return store_.make_name(std::move(entries));
  }

  Hf parse_set_literal() {
    expect(Tok::LBrace, "'{'");
    Hf out;
    if (peek().kind == Tok::RBrace) {
      advance();
      return out;
    }
    while (true) {
      out.elems.push_back(parse_set_literal());
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBrace, "'}'");
      break;
    }
    out.canonicalize();
    return out;
  }
};

int formula_prec(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Member:
    case Formula::Kind::Equal:
      return 7;
    case Formula::Kind::Not:
      return 6;
    case Formula::Kind::And:
      return 5;
    case Formula::Kind::Or:
      return 4;
    case Formula::Kind::Implies:
      return 3;
    case Formula::Kind::Iff:
      return 2;
    default:
      return 1;  // quantifiers: the body extends to the end
  }
}

std::string print_term(const Term& t, const NameStore& store) {
  return t.kind == Term::Kind::Variable ? t.var : store.to_string(t.name);
}

std::string print_formula(const FormulaPtr& f, const NameStore& store, int min_prec) {
  std::string s;
  switch (f->kind) {
    case Formula::Kind::Member:
      s = print_term(f->t1, store) + " in " + print_term(f->t2, store);
      break;
    case Formula::Kind::Equal:
      s = print_term(f->t1, store) + " eq " + print_term(f->t2, store);
      break;
    case Formula::Kind::And:
      s = print_formula(f->a, store, 5) + " & " + print_formula(f->b, store, 6);
      break;
    case Formula::Kind::Or:
      s = print_formula(f->a, store, 4) + " | " + print_formula(f->b, store, 5);
      break;
    case Formula::Kind::Implies:
      s = print_formula(f->a, store, 4) + " -> " + print_formula(f->b, store, 3);
      break;
    case Formula::Kind::Iff:
      s = print_formula(f->a, store, 3) + " <-> " + print_formula(f->b, store, 3);
      break;
    case Formula::Kind::Not:
      // negation stacks print bare; anything else gets explicit parens
      if (f->a->kind == Formula::Kind::Not)
        s = "~" + print_formula(f->a, store, 0);
      else
        s = "~(" + print_formula(f->a, store, 0) + ")";
      return s;  // never needs extra parens
    case Formula::Kind::Forall:
      s = "forall " + f->var + ". " + print_formula(f->a, store, 0);
      break;
    case Formula::Kind::Exists:
      s = "exists " + f->var + ". " + print_formula(f->a, store, 0);
      break;
    case Formula::Kind::BoundedForall:
      s = "forall " + f->var + " in " + print_term(f->t2, store) + ". " +
          print_formula(f->a, store, 0);
      break;
    case Formula::Kind::BoundedExists:
      s = "exists " + f->var + " in " + print_term(f->t2, store) + ". " +
          print_formula(f->a, store, 0);
      break;
  }
  if (formula_prec(f->kind) < min_prec) return "(" + s + ")";
  return s;
}

}  // namespace

ParsedFormula parse_formula_input(std::string_view text, NameStore& store) {
  return FormulaParser(text, store).parse_input();
}

FormulaPtr parse_formula(std::string_view text, NameStore& store) {
  return parse_formula_input(text, store).formula;
}

std::string pretty_print(const FormulaPtr& f, const NameStore& store) {
  if (!f) throw Error("empty formula");
  return print_formula(f, store, 0);
}

namespace {

class PropParser {
 public:
  explicit PropParser(std::string_view text) : tokens_(lex(text)) {
    for (const Token& t : tokens_)
      if (t.kind == Tok::Word) {
        if (std::find(vars_.begin(), vars_.end(), t.text) == vars_.end()) vars_.push_back(t.text);
      }
    formula_.emplace(vars_);
  }

  PropFormula parse() {
    int root = parse_imp();
    if (peek().kind != Tok::End) throw ParseError("expected end of input", peek().span);
    formula_->set_root(root);
    return std::move(*formula_);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> vars_;
  std::optional<PropFormula> formula_;

  const Token& peek() const { return tokens_[std::min(pos_, tokens_.size() - 1)]; }
  void advance() {
    if (pos_ < tokens_.size() - 1) ++pos_;
  }

  int parse_imp() {
    int lhs = parse_or();
    if (peek().kind == Tok::Arrow) {
      advance();
      int rhs = parse_imp();
      return formula_->add_imp(lhs, rhs);
    }
    return lhs;
  }

  int parse_or() {
    int lhs = parse_and();
    while (peek().kind == Tok::Pipe) {
      advance();
      lhs = formula_->add_or(lhs, parse_and());
    }
    return lhs;
  }

  int parse_and() {
    int lhs = parse_unary();
    while (peek().kind == Tok::Amp) {
      advance();
      lhs = formula_->add_and(lhs, parse_unary());
    }
    return lhs;
  }

  int parse_unary() {
    if (peek().kind == Tok::Tilde) {
      advance();
      return formula_->add_not(parse_unary());
    }
    if (peek().kind == Tok::LParen) {
      advance();
      int f = parse_imp();
      if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().span, ")");
      advance();
      return f;
    }
    if (peek().kind == Tok::Word) {
      const std::string& w = peek().text;
      auto it = std::find(vars_.begin(), vars_.end(), w);
      advance();
      return formula_->add_var(static_cast<int>(it - vars_.begin()));
    }
    throw ParseError("expected a propositional formula", peek().span);
  }
};

int prop_prec(PropFormula::Kind k) {
  switch (k) {
    case PropFormula::Kind::Var:
      return 7;
    case PropFormula::Kind::Not:
      return 6;
    case PropFormula::Kind::And:
      return 5;
    case PropFormula::Kind::Or:
      return 4;
    case PropFormula::Kind::Imp:
      return 3;
  }
  return 0;
}

std::string print_prop(const PropFormula& f, int idx, int min_prec) {
  const auto& nd = f.nodes()[idx];
  std::string s;
  switch (nd.kind) {
    case PropFormula::Kind::Var:
      s = f.var_names()[nd.var];
      break;
    case PropFormula::Kind::Not:
      return "~" + print_prop(f, nd.a, 6);
    case PropFormula::Kind::And:
      s = print_prop(f, nd.a, 5) + " & " + print_prop(f, nd.b, 6);
      break;
    case PropFormula::Kind::Or:
      s = print_prop(f, nd.a, 4) + " | " + print_prop(f, nd.b, 5);
      break;
    case PropFormula::Kind::Imp:
      s = print_prop(f, nd.a, 4) + " -> " + print_prop(f, nd.b, 3);
      break;
  }
  if (prop_prec(nd.kind) < min_prec) return "(" + s + ")";
  return s;
}

}  // namespace

PropFormula parse_prop_formula(std::string_view text) { return PropParser(text).parse(); }

std::string pretty_print_prop(const PropFormula& f) {
  if (f.root() < 0) throw Error("formula has no root");
  return print_prop(f, f.root(), 0);
}

}  // namespace fsv
