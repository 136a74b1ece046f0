#include "epinarr/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <vector>

#include "epinarr/numfmt.hpp"

namespace epinarr {

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Semicolon,
  Comma,
  Colon,
  Equals,
  At,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  OpReactant,    // <<
  OpProduct,     // >>
  OpActivator,   // (+)
  OpInhibitor,   // (-)
  OpModifier,    // (.)
  Cooperation,   // <*>
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

const char* token_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semicolon: return "';'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::At: return "'@'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::OpReactant: return "'<<'";
    case Tok::OpProduct: return "'>>'";
    case Tok::OpActivator: return "'(+)'";
    case Tok::OpInhibitor: return "'(-)'";
    case Tok::OpModifier: return "'(.)'";
    case Tok::Cooperation: return "'<*>'";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(const std::string& source) : src_(source) {
    // UTF-8 byte-order mark, if any
    if (src_.size() >= 3 && src_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(int line, int col, const std::string& msg) {
    throw ParseError(line, col, msg);
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if (c == '\r') {
      if (peek() == '\n') ++pos_;
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() != '\0' && peek() != '\n' && peek() != '\r') advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.column = col_;
    char c = peek();
    if (c == '\0') {
      t.kind = Tok::End;
      return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        word.push_back(advance());
      t.kind = Tok::Ident;
      t.text = std::move(word);
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (std::isdigit(static_cast<unsigned char>(peek())))
        num.push_back(advance());
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        num.push_back(advance());
        while (std::isdigit(static_cast<unsigned char>(peek())))
          num.push_back(advance());
      }
      if (peek() == 'e' || peek() == 'E') {
        size_t digitAt = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
        if (std::isdigit(static_cast<unsigned char>(peek(digitAt)))) {
          num.push_back(advance());
          if (peek() == '+' || peek() == '-') num.push_back(advance());
          while (std::isdigit(static_cast<unsigned char>(peek())))
            num.push_back(advance());
        }
      }
      double value = 0.0;
      if (!parse_double(num, value))
        fail(t.line, t.column, "malformed number \"" + num + "\"");
      t.kind = Tok::Number;
      t.text = std::move(num);
      t.number = value;
      return t;
    }

    // Multi-character operators; role operators are single three-character
    // tokens with no interior whitespace.
    if (c == '(' && peek(2) == ')') {
      char mid = peek(1);
      if (mid == '+' || mid == '-' || mid == '.') {
        advance();
        advance();
        advance();
        t.kind = mid == '+'   ? Tok::OpActivator
                 : mid == '-' ? Tok::OpInhibitor
                              : Tok::OpModifier;
        return t;
      }
    }
    if (c == '<' && peek(1) == '*' && peek(2) == '>') {
      advance();
      advance();
      advance();
      t.kind = Tok::Cooperation;
      return t;
    }
    if (c == '<' && peek(1) == '<') {
      advance();
      advance();
      t.kind = Tok::OpReactant;
      return t;
    }
    if (c == '>' && peek(1) == '>') {
      advance();
      advance();
      t.kind = Tok::OpProduct;
      return t;
    }

    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ';': t.kind = Tok::Semicolon; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '=': t.kind = Tok::Equals; return t;
      case '@': t.kind = Tok::At; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '^': t.kind = Tok::Caret; return t;
      default:
        fail(t.line, t.column,
             std::string("unexpected character '") + c + "'");
    }
    return t;  // unreachable
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// A NAME = ... statement before classification: either a prefix list
// (species component) or an expression (rate / parameter).
struct RawDefinition {
  std::string name;
  int line = 1;
  int column = 1;
  bool isComponent = false;
  std::vector<Prefix> prefixes;
  ExprPtr expr;
  bool exprIsLiteral = false;  // plain (possibly negated) numeric literal
  double literal = 0.0;
};

struct Pos {
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(const std::string& source) : tokens_(Lexer(source).run()) {}

  Model parse_model() {
    Model model;
    std::vector<RawDefinition> defs;
    bool named = false;

    while (!at(Tok::End)) {
      const Token& t = cur();
      if (t.kind != Tok::Ident)
        fail(t, "expected a statement", "identifier");

      if (t.text == "model" && peek_kind(1) == Tok::Ident) {
        if (named)
          fail(t, "model already named; only one 'model' statement allowed");
        advance();
        model.name = expect(Tok::Ident, "model name").text;
        expect(Tok::Semicolon, "';'");
        named = true;
      } else if (t.text == "location" && peek_kind(1) == Tok::Ident) {
        const Token& nameTok = tokens_[index_ + 1];
        Location loc = parse_location();
        note_definition(locationPos_, loc.name, nameTok, "location");
        model.locations.push_back(std::move(loc));
      } else if (t.text == "event" && peek_kind(1) == Tok::Ident) {
        const Token& nameTok = tokens_[index_ + 1];
        Event ev = parse_event();
        note_definition(eventPos_, ev.name, nameTok, "event");
        model.events.push_back(std::move(ev));
      } else if (peek_kind(1) == Tok::Equals) {
        defs.push_back(parse_definition());
      } else {
        // Anything else starting with an identifier is the system
        // equation, which must be the last statement.
        parse_system_equation(model);
        break;
      }
    }
    if (!at(Tok::End)) fail(cur(), "unexpected input after the system equation");

    classify_definitions(model, defs);
    return model;
  }

  ExprPtr parse_standalone_expr() {
    ExprPtr e = parse_expr();
    if (!at(Tok::End)) fail(cur(), "unexpected input after expression");
    return e;
  }

 private:
  const Token& cur() const { return tokens_[index_]; }

  Tok peek_kind(size_t ahead) const {
    size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i].kind : Tok::End;
  }

  bool at(Tok k) const { return cur().kind == k; }

  const Token& advance() { return tokens_[index_++]; }

  // Errors at end-of-input point at the last real token instead, so the
  // position always lies on source text ("(" reports column 1, not 2).
  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         std::string expected = {}) {
    int line = t.line;
    int column = t.column;
    if (t.kind == Tok::End && index_ > 0) {
      line = tokens_[index_ - 1].line;
      column = tokens_[index_ - 1].column;
    }
    throw ParseError(line, column, msg, std::move(expected));
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (!at(kind))
      fail(cur(), std::string("found ") + token_name(cur().kind), what);
    return advance();
  }

  void note_definition(std::map<std::string, Pos>& seen,
                       const std::string& name, const Token& tok,
                       const char* what) {
    auto [it, inserted] = seen.emplace(name, Pos{tok.line, tok.column});
    if (!inserted)
      fail(tok, std::string("duplicate ") + what + " \"" + name +
                    "\" (first defined at " + std::to_string(it->second.line) +
                    ":" + std::to_string(it->second.column) + ")");
  }

  // location NAME [in NAME] : size = EXPR, type = (compartment|membrane) ;
  Location parse_location() {
    advance();  // location
    Location loc;
    loc.name = expect(Tok::Ident, "location name").text;
    if (at(Tok::Ident) && cur().text == "in") {
      advance();
      loc.parent = expect(Tok::Ident, "parent location name").text;
    }
    expect(Tok::Colon, "':'");
    const Token& sizeKw = expect(Tok::Ident, "'size'");
    if (sizeKw.text != "size") fail(sizeKw, "expected 'size'", "'size'");
    expect(Tok::Equals, "'='");
    loc.size = parse_expr();
    expect(Tok::Comma, "','");
    const Token& typeKw = expect(Tok::Ident, "'type'");
    if (typeKw.text != "type") fail(typeKw, "expected 'type'", "'type'");
    expect(Tok::Equals, "'='");
    const Token& kind = expect(Tok::Ident, "'compartment' or 'membrane'");
    if (kind.text == "compartment") {
      loc.kind = LocationKind::Compartment;
    } else if (kind.text == "membrane") {
      loc.kind = LocationKind::Membrane;
    } else {
      fail(kind, "unknown location type \"" + kind.text + "\"",
           "'compartment' or 'membrane'");
    }
    expect(Tok::Semicolon, "';'");
    return loc;
  }

  // event NAME at NUMBER { NAME = EXPR (, NAME = EXPR)* }
  Event parse_event() {
    advance();  // event
    Event ev;
    ev.name = expect(Tok::Ident, "event name").text;
    const Token& atKw = expect(Tok::Ident, "'at'");
    if (atKw.text != "at") fail(atKw, "expected 'at'", "'at'");
    ev.triggerTime = expect(Tok::Number, "trigger time").number;
    expect(Tok::LBrace, "'{'");
    for (;;) {
      EventAssignment a;
      a.target = expect(Tok::Ident, "assignment target").text;
      expect(Tok::Equals, "'='");
      a.value = parse_expr();
      ev.assignments.push_back(std::move(a));
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return ev;
  }

  // NAME = (prefix list | expression) ;
  RawDefinition parse_definition() {
    RawDefinition def;
    const Token& name = advance();
    def.name = name.text;
    def.line = name.line;
    def.column = name.column;
    advance();  // =

    if (at(Tok::LParen) && peek_kind(1) == Tok::RParen) {
      // "NAME = ();" — a species component taking part in no reaction.
      advance();
      advance();
      def.isComponent = true;
    } else if (looks_like_prefix()) {
      def.isComponent = true;
      def.prefixes.push_back(parse_prefix(def.name));
      while (at(Tok::Plus)) {
        advance();
        def.prefixes.push_back(parse_prefix(def.name));
      }
    } else {
      def.expr = parse_expr();
      def.exprIsLiteral = literal_value(def.expr, def.literal);
    }
    expect(Tok::Semicolon, "';'");
    return def;
  }

  // A prefix starts "( IDENT ," which no expression can.
  bool looks_like_prefix() const {
    return at(Tok::LParen) && peek_kind(1) == Tok::Ident &&
           peek_kind(2) == Tok::Comma;
  }

  // ( NAME , INT ) op NAME  — the trailing name repeats the component.
  Prefix parse_prefix(const std::string& componentName) {
    Prefix p;
    expect(Tok::LParen, "'('");
    p.action = expect(Tok::Ident, "action name").text;
    expect(Tok::Comma, "','");
    const Token& stoich = expect(Tok::Number, "stoichiometry");
    double k = stoich.number;
    if (k < 1.0 || k != static_cast<double>(static_cast<long long>(k)))
      fail(stoich, "stoichiometry must be a positive integer");
    p.stoichiometry = static_cast<int>(k);
    expect(Tok::RParen, "')'");
    switch (cur().kind) {
      case Tok::OpReactant: p.role = Role::Reactant; break;
      case Tok::OpProduct: p.role = Role::Product; break;
      case Tok::OpActivator: p.role = Role::Activator; break;
      case Tok::OpInhibitor: p.role = Role::Inhibitor; break;
      case Tok::OpModifier: p.role = Role::GenericModifier; break;
      default:
        fail(cur(), std::string("found ") + token_name(cur().kind),
             "a role operator (<<, >>, (+), (-), (.))");
    }
    advance();
    const Token& subject = expect(Tok::Ident, "species name");
    if (subject.text != componentName)
      fail(subject, "prefix subject \"" + subject.text +
                        "\" does not match the component being defined (\"" +
                        componentName + "\")");
    return p;
  }

  // COMP (<*> COMP)*  where COMP := NAME [@ NAME] [ '[' NUMBER ']' ]
  void parse_system_equation(Model& model) {
    std::map<std::string, Pos> seen;
    for (;;) {
      const Token& nameTok = cur();
      SpeciesInstance inst;
      inst.species = expect(Tok::Ident, "species name").text;
      if (at(Tok::At)) {
        advance();
        inst.location = expect(Tok::Ident, "location name").text;
      }
      if (at(Tok::LBracket)) {
        advance();
        inst.initialAmount = expect(Tok::Number, "initial amount").number;
        inst.amountExplicit = true;
        expect(Tok::RBracket, "']'");
      }
      note_definition(seen, inst.global_id(), nameTok, "species instance");
      model.systemEquation.push_back(std::move(inst));
      if (at(Tok::Cooperation)) {
        advance();
        continue;
      }
      break;
    }
  }

  // Expression grammar:
  //   additive := term (('+'|'-') term)*
  //   term     := factor (('*'|'/') factor)*
  //   factor   := '-' factor | power
  //   power    := atom ('^' factor)?
  //   atom     := NUMBER | IDENT | '(' additive ')'
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Expr::Op op = at(Tok::Plus) ? Expr::Op::Add : Expr::Op::Sub;
      advance();
      lhs = Expr::make_binary(op, std::move(lhs), parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Expr::Op op = at(Tok::Star) ? Expr::Op::Mul : Expr::Op::Div;
      advance();
      lhs = Expr::make_binary(op, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    if (at(Tok::Minus)) {
      advance();
      return Expr::negate(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (at(Tok::Caret)) {
      advance();
      return Expr::make_binary(Expr::Op::Pow, std::move(base), parse_factor());
    }
    return base;
  }

  ExprPtr parse_atom() {
    if (at(Tok::Number)) return Expr::make_number(advance().number);
    if (at(Tok::Ident)) return Expr::make_symbol(advance().text);
    if (at(Tok::LParen)) {
      advance();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail(cur(), std::string("found ") + token_name(cur().kind),
         "a number, identifier, or '('");
  }

  static bool literal_value(const ExprPtr& e, double& out) {
    if (e->is_number()) {
      out = e->number;
      return true;
    }
    if (e->is_negation() && e->rhs->is_number()) {
      out = -e->rhs->number;
      return true;
    }
    return false;
  }

  // NAME = EXPR is a functional rate iff NAME is used as a prefix action
  // anywhere in the file; a numeric literal is a parameter; any other
  // expression is a derived parameter, a constant over the plain numeric
  // parameters of the file plus derived parameters defined above it.
  void classify_definitions(Model& model, std::vector<RawDefinition>& defs) {
    std::set<std::string> actions;
    for (const auto& def : defs)
      for (const auto& p : def.prefixes) actions.insert(p.action);

    Env env;
    for (const auto& def : defs)
      if (!def.isComponent && def.exprIsLiteral && !actions.count(def.name))
        env[def.name] = def.literal;

    std::map<std::string, Pos> componentPos;
    std::map<std::string, Pos> valuePos;  // parameters and rates together

    for (auto& def : defs) {
      const Token tok{Tok::Ident, def.name, 0.0, def.line, def.column};
      if (def.isComponent) {
        note_definition(componentPos, def.name, tok, "species component");
        SpeciesComponent comp;
        comp.name = def.name;
        comp.prefixes = std::move(def.prefixes);
        for (size_t i = 0; i < comp.prefixes.size(); ++i)
          for (size_t j = i + 1; j < comp.prefixes.size(); ++j)
            if (comp.prefixes[i].action == comp.prefixes[j].action)
              throw ParseError(def.line, def.column,
                               "species \"" + comp.name +
                                   "\" has two prefixes for action \"" +
                                   comp.prefixes[i].action + "\"");
        model.speciesComponents.push_back(std::move(comp));
      } else if (actions.count(def.name)) {
        note_definition(valuePos, def.name, tok, "definition");
        model.functionalRates.push_back(FunctionalRate{def.name, def.expr});
      } else if (def.exprIsLiteral) {
        note_definition(valuePos, def.name, tok, "definition");
        model.parameters.push_back(Parameter{def.name, def.literal, {}});
      } else {
        note_definition(valuePos, def.name, tok, "definition");
        double value = 0.0;
        try {
          value = eval_expr(def.expr, env);
        } catch (const UnboundSymbol& e) {
          throw ParseError(def.line, def.column,
                           "derived parameter \"" + def.name +
                               "\" references \"" + e.name +
                               "\", which is not a defined parameter");
        } catch (const EvalError& e) {
          throw ParseError(def.line, def.column,
                           "derived parameter \"" + def.name +
                               "\" cannot be evaluated: " + e.what());
        }
        model.parameters.push_back(Parameter{def.name, value, {}});
        env[def.name] = value;
      }
    }
  }

  std::vector<Token> tokens_;
  size_t index_ = 0;
  std::map<std::string, Pos> locationPos_;
  std::map<std::string, Pos> eventPos_;
};

}  // namespace

Model parse_model(const std::string& source) {
  return Parser(source).parse_model();
}

ExprPtr parse_expr(const std::string& source) {
  return Parser(source).parse_standalone_expr();
}

}  // namespace epinarr
