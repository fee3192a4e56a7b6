// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/parser.hpp"

#include <cassert>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "gapslice/typecheck.hpp"

namespace gapslice {

ParseError::ParseError(std::string file, SourceSpan span, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(span.line) + ":" +
                         std::to_string(span.col) + ": " + message),
      span_(span) {}

namespace {

enum class Tok : uint8_t {
  Eof, Ident, IntLit,
  // keywords
  KwProtocol, KwSort, KwConst, KwVar, KwInit, KwAction, KwLemma, KwRequire,
  KwWith, KwIn, KwNotIn, KwSubseteq, KwCup, KwCap, KwSetminus, KwForall,
  KwExists, KwTrue, KwFalse, KwBool, KwInt, KwSet, KwOf, KwTuple, KwFn,
  KwTemplate, KwPred, KwMaxLiterals, KwIntRange,
  // punctuation / operators
  LParen, RParen, LBrace, RBrace, LBracket, RBracket, LTuple, RTuple,
  Comma, Semi, Colon, Prime, Assign, Arrow, MapsTo,
  Eq, Ne, Lt, Le, Gt, Ge, Implies, AndOp, OrOp, NotOp, Plus, Minus,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  int64_t ival = 0;
  SourceSpan span;
};

const std::unordered_map<std::string_view, Tok>& keyword_map() {
  static const std::unordered_map<std::string_view, Tok> kw = {
      {"protocol", Tok::KwProtocol}, {"sort", Tok::KwSort},
      {"const", Tok::KwConst},       {"var", Tok::KwVar},
      {"init", Tok::KwInit},         {"action", Tok::KwAction},
      {"lemma", Tok::KwLemma},       {"require", Tok::KwRequire},
      {"with", Tok::KwWith},         {"in", Tok::KwIn},
      {"notin", Tok::KwNotIn},       {"subseteq", Tok::KwSubseteq},
      {"cup", Tok::KwCup},           {"cap", Tok::KwCap},
      {"setminus", Tok::KwSetminus}, {"forall", Tok::KwForall},
      {"exists", Tok::KwExists},     {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},       {"bool", Tok::KwBool},
      {"int", Tok::KwInt},           {"set", Tok::KwSet},
      {"of", Tok::KwOf},             {"tuple", Tok::KwTuple},
      {"fn", Tok::KwFn},             {"template", Tok::KwTemplate},
      {"pred", Tok::KwPred},         {"maxliterals", Tok::KwMaxLiterals},
      {"intrange", Tok::KwIntRange},
  };
  return kw;
}

/// Hand-written lexer. Math symbols (UTF-8) and their ASCII spellings lex
/// to the same tokens, so both notations are accepted everywhere.
class Lexer {
 public:
  Lexer(std::string_view text, std::string file)
      : text_(text), file_(std::move(file)) {}

  const std::string& file() const { return file_; }

  Token next() {
    skip_trivia();
    Token t;
    t.span = {line_, col_};
    if (pos_ >= text_.size()) {
      t.kind = Tok::Eof;
      return t;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance();
      std::string_view word = text_.substr(start, pos_ - start);
      auto it = keyword_map().find(word);
      if (it != keyword_map().end()) {
        t.kind = it->second;
      } else {
        t.kind = Tok::Ident;
      }
      t.text = std::string(word);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      t.kind = Tok::IntLit;
      t.text = std::string(text_.substr(start, pos_ - start));
      t.ival = std::stoll(t.text);
      return t;
    }
    // Unicode operator aliases.
    if (static_cast<unsigned char>(c) >= 0x80) {
      static const struct { const char* utf8; Tok tok; } kUni[] = {
          {"∀", Tok::KwForall},  {"∃", Tok::KwExists},
          {"∈", Tok::KwIn},      {"∉", Tok::KwNotIn},
          {"⊆", Tok::KwSubseteq},{"∪", Tok::KwCup},
          {"∩", Tok::KwCap},     {"∖", Tok::KwSetminus},
          {"∧", Tok::AndOp},     {"∨", Tok::OrOp},
          {"¬", Tok::NotOp},     {"⇒", Tok::Implies},
          {"↦", Tok::MapsTo},    {"⟨", Tok::LTuple},
          {"⟩", Tok::RTuple},    {"≠", Tok::Ne},
          {"≤", Tok::Le},        {"≥", Tok::Ge},
          {"∅", Tok::LBrace},    // ∅ handled below as {} pair
      };
      for (const auto& u : kUni) {
        size_t len = std::strlen(u.utf8);
        if (text_.substr(pos_, len) == u.utf8) {
          if (std::string_view(u.utf8) == "∅") {
            // Empty-set symbol expands to "{}": emit LBrace now and queue
            // the closing brace.
            advance_bytes(len);
            t.kind = Tok::LBrace;
            pending_rbrace_ = true;
            return t;
          }
          advance_bytes(len);
          t.kind = u.tok;
          return t;
        }
      }
      err(t.span, "unrecognized character");
    }
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ';': t.kind = Tok::Semi; return t;
      case '\'': t.kind = Tok::Prime; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case '=':
        if (eat('>')) { t.kind = Tok::Implies; return t; }
        t.kind = Tok::Eq; return t;
      case '!':
        if (eat('=')) { t.kind = Tok::Ne; return t; }
        err(t.span, "expected '=' after '!'");
      case '<':
        if (eat('<')) { t.kind = Tok::LTuple; return t; }
        if (eat('=')) { t.kind = Tok::Le; return t; }
        t.kind = Tok::Lt; return t;
      case '>':
        if (eat('>')) { t.kind = Tok::RTuple; return t; }
        if (eat('=')) { t.kind = Tok::Ge; return t; }
        t.kind = Tok::Gt; return t;
      case ':':
        if (eat('=')) { t.kind = Tok::Assign; return t; }
        t.kind = Tok::Colon; return t;
      case '-':
        if (eat('>')) { t.kind = Tok::Arrow; return t; }
        t.kind = Tok::Minus; return t;
      case '|':
        if (eat('-') && eat('>')) { t.kind = Tok::MapsTo; return t; }
        err(t.span, "expected '|->'");
      case '/':
        if (eat('\\')) { t.kind = Tok::AndOp; return t; }
        err(t.span, "expected '\\' after '/'");
      case '\\':
        if (eat('/')) { t.kind = Tok::OrOp; return t; }
        err(t.span, "expected '/' after '\\'");
      case '~': t.kind = Tok::NotOp; return t;
      default:
        err(t.span, std::string("unrecognized character '") + c + "'");
    }
    return t;  // unreachable
  }

 private:
  [[noreturn]] void err(SourceSpan s, const std::string& m) { throw ParseError(file_, s, m); }

  void skip_trivia() {
    if (pending_rbrace_) return;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance_bytes(size_t n) {
    for (size_t i = 0; i < n; ++i) advance();
  }

 public:
  bool take_pending_rbrace() {
    if (pending_rbrace_) {
      pending_rbrace_ = false;
      return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  std::string file_;
  size_t pos_ = 0;
  uint32_t line_ = 1, col_ = 1;
  bool pending_rbrace_ = false;
};

class Parser {
 public:
  Parser(std::string_view text, std::string file) : lex_(text, std::move(file)) {
    bump();
  }

  // --- protocol files -----------------------------------------------------

  TransitionSystem parse_spec_file() {
    TransitionSystem sys;
    expect(Tok::KwProtocol, "expected 'protocol'");
    sys.name = expect_ident("protocol name");
    bool saw_init = false;
    while (cur_.kind != Tok::Eof) {
      switch (cur_.kind) {
        case Tok::KwSort: {
          bump();
          sys.sorts.push_back(expect_ident("sort name"));
          eat(Tok::Semi);
          break;
        }
        case Tok::KwConst: {
          bump();
          ConstDecl d;
          d.name = expect_ident("constant name");
          expect(Tok::Colon, "expected ':' in constant declaration");
          d.type = parse_type();
          sys.consts.push_back(std::move(d));
          eat(Tok::Semi);
          break;
        }
        case Tok::KwVar: {
          bump();
          VarDecl d;
          d.name = expect_ident("variable name");
          expect(Tok::Colon, "expected ':' in variable declaration");
          d.type = parse_type();
          sys.vars.push_back(std::move(d));
          eat(Tok::Semi);
          break;
        }
        case Tok::KwInit: {
          if (saw_init) err("duplicate init block");
          saw_init = true;
          bump();
          expect(Tok::LBrace, "expected '{' after 'init'");
          while (cur_.kind != Tok::RBrace) {
            InitClause c;
            std::string vname = expect_ident("variable name in init clause");
            auto vi = lookup_var(sys, vname);
            c.var = vi;
            if (cur_.kind == Tok::KwIn) {
              c.choice = true;
              bump();
            } else {
              expect(Tok::Eq, "expected '=' or 'in' in init clause");
            }
            c.expr = parse_expr();
            expect(Tok::Semi, "expected ';' after init clause");
            sys.inits.push_back(std::move(c));
          }
          bump();
          break;
        }
        case Tok::KwAction: {
          bump();
          ActionDecl a;
          a.name = expect_ident("action name");
          expect(Tok::LParen, "expected '(' after action name");
          while (cur_.kind != Tok::RParen) {
            if (!a.params.empty()) expect(Tok::Comma, "expected ',' between parameters");
            Param p;
            p.name = expect_ident("parameter name");
            expect(Tok::Colon, "expected ':' in parameter");
            p.domain = expect_ident("parameter domain");
            a.params.push_back(std::move(p));
          }
          bump();
          expect(Tok::LBrace, "expected '{' to open action body");
          if (cur_.kind == Tok::KwRequire) {
            bump();
            a.require = parse_expr();
            expect(Tok::Semi, "expected ';' after require clause");
          }
          while (cur_.kind != Tok::RBrace) {
            std::string vname = expect_ident("updated variable name");
            auto vi = lookup_var(sys, vname);
            expect(Tok::Prime, "expected ''' after updated variable");
            expect(Tok::Eq, "expected '=' in update");
            Expr rhs = parse_expr();
            expect(Tok::Semi, "expected ';' after update");
            for (const auto& [v, _] : a.updates)
              if (v == vi) err("variable '" + vname + "' updated twice in action '" + a.name + "'");
            a.updates.emplace_back(vi, std::move(rhs));
          }
          bump();
          sys.actions.push_back(std::move(a));
          break;
        }
        case Tok::KwLemma: {
          bump();
          LemmaDecl l;
          l.name = expect_ident("lemma name");
          expect(Tok::Eq, "expected '=' after lemma name");
          l.body = parse_expr();
          eat(Tok::Semi);
          sys.lemmas.push_back(std::move(l));
          break;
        }
        default:
          err("expected a declaration (sort/const/var/init/action/lemma)");
      }
    }
    if (!saw_init) err("protocol has no init block");
    if (sys.actions.empty()) err("protocol has no actions");
    return sys;
  }

  // --- grammar files ------------------------------------------------------

  Grammar parse_grammar_file() {
    Grammar g;
    bool saw_maxlit = false;
    while (cur_.kind != Tok::Eof) {
      switch (cur_.kind) {
        case Tok::KwTemplate: {
          bump();
          QuantTemplate t;
          if (cur_.kind != Tok::Semi) {
            bool exists = false;
            // leading quantifier keyword is required; later entries keep the
            // current kind unless a new keyword flips it
            if (cur_.kind == Tok::KwForall) {
              bump();
            } else if (cur_.kind == Tok::KwExists) {
              exists = true;
              bump();
            } else {
              err("expected 'forall' or 'exists' in template");
            }
            while (true) {
              QuantTemplate::Entry e;
              e.exists = exists;
              e.binder.var = expect_ident("template binder name");
              expect(Tok::KwIn, "expected 'in' in template binder");
              e.binder.domain = expect_ident("template binder domain");
              t.entries.push_back(std::move(e));
              if (!eat(Tok::Comma)) break;
              if (cur_.kind == Tok::KwForall) {
                exists = false;
                bump();
              } else if (cur_.kind == Tok::KwExists) {
                exists = true;
                bump();
              }
            }
          }
          expect(Tok::Semi, "expected ';' after template");
          g.templates.push_back(std::move(t));
          break;
        }
        case Tok::KwPred: {
          bump();
          g.preds.push_back(parse_expr());
          expect(Tok::Semi, "expected ';' after pred");
          break;
        }
        case Tok::KwMaxLiterals: {
          if (saw_maxlit) err("duplicate maxliterals");
          saw_maxlit = true;
          bump();
          if (cur_.kind != Tok::IntLit) err("expected integer after maxliterals");
          g.max_literals = static_cast<uint32_t>(cur_.ival);
          bump();
          eat(Tok::Semi);
          break;
        }
        default:
          err("expected 'template', 'pred' or 'maxliterals'");
      }
    }
    if (g.templates.empty()) err("grammar declares no template");
    if (g.preds.empty()) err("grammar declares no predicates");
    if (g.max_literals == 0) err("maxliterals must be at least 1");
    return g;
  }

  // --- instance files -----------------------------------------------------

  struct RawInstance {
    std::vector<Instance::SortDef> sorts;
    std::vector<std::pair<std::string, Expr>> consts;
    std::vector<std::pair<std::string, std::pair<int64_t, int64_t>>> ranges;
  };

  RawInstance parse_instance_file() {
    RawInstance raw;
    while (cur_.kind != Tok::Eof) {
      switch (cur_.kind) {
        case Tok::KwSort: {
          bump();
          Instance::SortDef s;
          s.name = expect_ident("sort name");
          expect(Tok::Eq, "expected '=' in sort definition");
          expect(Tok::LBrace, "expected '{'");
          while (cur_.kind != Tok::RBrace) {
            if (!s.elems.empty()) expect(Tok::Comma, "expected ',' between sort elements");
            s.elems.push_back(expect_ident("sort element"));
          }
          bump();
          eat(Tok::Semi);
          raw.sorts.push_back(std::move(s));
          break;
        }
        case Tok::KwConst: {
          bump();
          std::string name = expect_ident("constant name");
          expect(Tok::Eq, "expected '=' in constant definition");
          Expr e = parse_expr();
          eat(Tok::Semi);
          raw.consts.emplace_back(std::move(name), std::move(e));
          break;
        }
        case Tok::KwIntRange: {
          bump();
          std::string name = expect_ident("range name");
          int64_t lo = expect_int("range lower bound");
          int64_t hi = expect_int("range upper bound");
          eat(Tok::Semi);
          raw.ranges.emplace_back(std::move(name), std::make_pair(lo, hi));
          break;
        }
        default:
          err("expected 'sort', 'const' or 'intrange'");
      }
    }
    return raw;
  }

  Expr parse_expr_only() {
    Expr e = parse_expr();
    if (cur_.kind != Tok::Eof) err("trailing input after expression");
    return e;
  }

  const std::string& file() const { return lex_.file(); }

 private:
  // --- expression ladder ---------------------------------------------------

  Expr parse_expr() { return parse_quantified(); }

  Expr parse_quantified() {
    if (cur_.kind != Tok::KwForall && cur_.kind != Tok::KwExists) return parse_implies();
    bool exists = cur_.kind == Tok::KwExists;
    SourceSpan span = cur_.span;
    bump();
    Expr node = make_expr(exists ? ExprNode::Op::Exists : ExprNode::Op::Forall, span);
    while (true) {
      Binder b;
      b.var = expect_ident("quantifier binder name");
      expect(Tok::KwIn, "expected 'in' in quantifier binder");
      b.domain = expect_ident("quantifier domain");
      node->binders.push_back(std::move(b));
      if (eat(Tok::Comma)) {
        if (cur_.kind == Tok::KwForall || cur_.kind == Tok::KwExists) {
          // Kind flips mid-prefix: the rest becomes a nested quantifier.
          node->children.push_back(parse_quantified());
          return node;
        }
        continue;
      }
      break;
    }
    expect(Tok::Colon, "expected ':' after quantifier binders");
    node->children.push_back(parse_quantified());
    return node;
  }

  Expr parse_implies() {
    Expr lhs = parse_or();
    if (cur_.kind == Tok::Implies) {
      SourceSpan span = cur_.span;
      bump();
      Expr node = make_expr(ExprNode::Op::Implies, span);
      node->children.push_back(std::move(lhs));
      node->children.push_back(parse_implies());  // right-assoc
      return node;
    }
    return lhs;
  }

  Expr parse_or() {
    Expr first = parse_and();
    if (cur_.kind != Tok::OrOp) return first;
    Expr node = make_expr(ExprNode::Op::Or, cur_.span);
    node->children.push_back(std::move(first));
    while (eat(Tok::OrOp)) node->children.push_back(parse_and());
    return node;
  }

  Expr parse_and() {
    Expr first = parse_not();
    if (cur_.kind != Tok::AndOp) return first;
    Expr node = make_expr(ExprNode::Op::And, cur_.span);
    node->children.push_back(std::move(first));
    while (eat(Tok::AndOp)) node->children.push_back(parse_not());
    return node;
  }

  Expr parse_not() {
    if (cur_.kind == Tok::NotOp) {
      SourceSpan span = cur_.span;
      bump();
      Expr node = make_expr(ExprNode::Op::Not, span);
      node->children.push_back(parse_not());
      return node;
    }
    return parse_cmp();
  }

  Expr parse_cmp() {
    Expr lhs = parse_with();
    ExprNode::Op op;
    switch (cur_.kind) {
      case Tok::Eq: op = ExprNode::Op::Eq; break;
      case Tok::Ne: op = ExprNode::Op::Ne; break;
      case Tok::Lt: op = ExprNode::Op::Lt; break;
      case Tok::Le: op = ExprNode::Op::Le; break;
      case Tok::Gt: op = ExprNode::Op::Gt; break;
      case Tok::Ge: op = ExprNode::Op::Ge; break;
      case Tok::KwIn: op = ExprNode::Op::In; break;
      case Tok::KwNotIn: op = ExprNode::Op::NotIn; break;
      case Tok::KwSubseteq: op = ExprNode::Op::Subseteq; break;
      default: return lhs;
    }
    SourceSpan span = cur_.span;
    bump();
    Expr node = make_expr(op, span);
    node->children.push_back(std::move(lhs));
    node->children.push_back(parse_with());
    return node;
  }

  Expr parse_with() {
    Expr e = parse_add();
    while (cur_.kind == Tok::KwWith) {
      SourceSpan span = cur_.span;
      bump();
      expect(Tok::LBracket, "expected '[' after 'with'");
      Expr idx = parse_expr();
      expect(Tok::RBracket, "expected ']' in update");
      expect(Tok::Assign, "expected ':=' in update");
      Expr val = parse_add();
      Expr node = make_expr(ExprNode::Op::FnUpdate, span);
      node->children = {std::move(e), std::move(idx), std::move(val)};
      e = std::move(node);
    }
    return e;
  }

  Expr parse_add() {
    Expr e = parse_app();
    while (true) {
      ExprNode::Op op;
      switch (cur_.kind) {
        case Tok::KwCup: op = ExprNode::Op::Union; break;
        case Tok::KwCap: op = ExprNode::Op::Intersect; break;
        case Tok::KwSetminus: op = ExprNode::Op::Setminus; break;
        case Tok::Plus: op = ExprNode::Op::Add; break;
        case Tok::Minus: op = ExprNode::Op::Sub; break;
        default: return e;
      }
      SourceSpan span = cur_.span;
      bump();
      Expr node = make_expr(op, span);
      node->children.push_back(std::move(e));
      node->children.push_back(parse_app());
      e = std::move(node);
    }
  }

  Expr parse_app() {
    Expr e = parse_primary();
    while (cur_.kind == Tok::LBracket) {
      SourceSpan span = cur_.span;
      bump();
      Expr idx = parse_expr();
      expect(Tok::RBracket, "expected ']' after index");
      Expr node = make_expr(ExprNode::Op::FnApp, span);
      node->children = {std::move(e), std::move(idx)};
      e = std::move(node);
    }
    if (cur_.kind == Tok::Prime)
      err("primed variables may only appear as update targets");
    return e;
  }

  Expr parse_primary() {
    SourceSpan span = cur_.span;
    switch (cur_.kind) {
      case Tok::KwTrue:
      case Tok::KwFalse: {
        Expr node = make_expr(ExprNode::Op::BoolLit, span);
        node->bval = cur_.kind == Tok::KwTrue;
        bump();
        return node;
      }
      case Tok::IntLit: {
        Expr node = make_expr(ExprNode::Op::IntLit, span);
        node->ival = cur_.ival;
        bump();
        return node;
      }
      case Tok::Minus: {
        bump();
        if (cur_.kind != Tok::IntLit) err("expected integer after unary '-'");
        Expr node = make_expr(ExprNode::Op::IntLit, span);
        node->ival = -cur_.ival;
        bump();
        return node;
      }
      case Tok::Ident: {
        // Name resolution happens in the type checker; the parser only
        // records the identifier.
        Expr node = make_expr(ExprNode::Op::AtomLit, span);
        node->name = cur_.text;
        bump();
        return node;
      }
      case Tok::LParen: {
        bump();
        Expr e = parse_expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::LTuple: {
        bump();
        Expr node = make_expr(ExprNode::Op::TupleExpr, span);
        if (cur_.kind != Tok::RTuple) {
          node->children.push_back(parse_expr());
          while (eat(Tok::Comma)) node->children.push_back(parse_expr());
        }
        expect(Tok::RTuple, "expected '>>'");
        return node;
      }
      case Tok::LBrace: {
        bump();
        if (lex_.take_pending_rbrace()) {  // the ∅ symbol
          return make_expr(ExprNode::Op::SetEnum, span);
        }
        // Distinguish `{ x in S : p }` (comprehension) from an enumeration.
        if (cur_.kind == Tok::Ident && peek_is_comprehension()) {
          Expr node = make_expr(ExprNode::Op::SetComp, span);
          Binder b;
          b.var = expect_ident("comprehension binder");
          expect(Tok::KwIn, "expected 'in'");
          b.domain = expect_ident("comprehension domain");
          expect(Tok::Colon, "expected ':'");
          node->binders.push_back(std::move(b));
          node->children.push_back(parse_expr());
          expect(Tok::RBrace, "expected '}'");
          return node;
        }
        Expr node = make_expr(ExprNode::Op::SetEnum, span);
        if (cur_.kind != Tok::RBrace) {
          node->children.push_back(parse_expr());
          while (eat(Tok::Comma)) node->children.push_back(parse_expr());
        }
        expect(Tok::RBrace, "expected '}'");
        return node;
      }
      case Tok::LBracket: {
        bump();
        Expr node = make_expr(ExprNode::Op::FnLit, span);
        Binder b;
        b.var = expect_ident("function literal binder");
        expect(Tok::KwIn, "expected 'in'");
        b.domain = expect_ident("function literal domain");
        expect(Tok::MapsTo, "expected '|->'");
        node->binders.push_back(std::move(b));
        node->children.push_back(parse_expr());
        expect(Tok::RBracket, "expected ']'");
        return node;
      }
      default:
        err("expected an expression");
    }
    return nullptr;  // unreachable
  }

  /// After '{' and with cur_ == Ident: is this `x in S :` ?
  bool peek_is_comprehension() {
    Lexer saved = lex_;
    Token t1 = lex_.next();
    if (t1.kind != Tok::KwIn) {
      lex_ = saved;
      return false;
    }
    Token t2 = lex_.next();
    Token t3 = lex_.next();
    bool yes = t2.kind == Tok::Ident && t3.kind == Tok::Colon;
    lex_ = saved;
    return yes;
  }

  Type parse_type() {
    switch (cur_.kind) {
      case Tok::KwBool:
        bump();
        return Type::boolean();
      case Tok::KwInt: {
        bump();
        std::string range = expect_ident("integer range name");
        return Type::int_range(std::move(range));
      }
      case Tok::KwSet: {
        bump();
        expect(Tok::KwOf, "expected 'of' after 'set'");
        return Type::set_of(parse_type());
      }
      case Tok::KwTuple: {
        bump();
        expect(Tok::LParen, "expected '(' after 'tuple'");
        std::vector<Type> parts;
        parts.push_back(parse_type());
        while (eat(Tok::Comma)) parts.push_back(parse_type());
        expect(Tok::RParen, "expected ')'");
        return Type::tuple_of(std::move(parts));
      }
      case Tok::KwFn: {
        bump();
        std::string domain = expect_ident("function domain sort");
        expect(Tok::Arrow, "expected '->' in function type");
        return Type::fn_of(std::move(domain), parse_type());
      }
      case Tok::Ident: {
        std::string n = cur_.text;
        bump();
        return Type::sort(std::move(n));
      }
      default:
        err("expected a type");
    }
    return Type::boolean();  // unreachable
  }

  // --- helpers --------------------------------------------------------------

  uint32_t lookup_var(const TransitionSystem& sys, const std::string& n) {
    for (uint32_t i = 0; i < sys.vars.size(); ++i)
      if (sys.vars[i].name == n) return i;
    err("unknown variable '" + n + "'");
    return 0;  // unreachable
  }

  void bump() { cur_ = lex_.next(); }

  bool eat(Tok k) {
    if (cur_.kind == k) {
      bump();
      return true;
    }
    return false;
  }

  void expect(Tok k, const std::string& msg) {
    if (cur_.kind != k) err(msg);
    bump();
  }

  std::string expect_ident(const std::string& what) {
    if (cur_.kind != Tok::Ident) err("expected " + what);
    std::string n = cur_.text;
    bump();
    return n;
  }

  int64_t expect_int(const std::string& what) {
    bool neg = eat(Tok::Minus);
    if (cur_.kind != Tok::IntLit) err("expected " + what);
    int64_t v = cur_.ival;
    bump();
    return neg ? -v : v;
  }

  [[noreturn]] void err(const std::string& msg) {
    throw ParseError(lex_.file(), cur_.span, msg);
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

TransitionSystem parse_spec(std::string_view text, const std::string& filename) {
  Parser p(text, filename);
  TransitionSystem sys = p.parse_spec_file();
  sys.typecheck(filename);
  return sys;
}

Grammar parse_grammar(std::string_view text, const TransitionSystem& sys,
                      const std::string& filename) {
  Parser p(text, filename);
  Grammar g = p.parse_grammar_file();
  detail::typecheck_grammar(g, sys, filename);
  return g;
}

Instance parse_instance(std::string_view text, const TransitionSystem& sys,
                        const std::string& filename) {
  Parser p(text, filename);
  auto raw = p.parse_instance_file();
  return detail::bind_instance(raw.sorts, raw.consts, raw.ranges, sys, filename);
}

Expr parse_lemma_body(std::string_view text, const TransitionSystem& sys,
                      const std::string& filename) {
  Parser p(text, filename);
  Expr e = p.parse_expr_only();
  detail::typecheck_lemma_body(e, sys, filename);
  return e;
}

}  // namespace gapslice
