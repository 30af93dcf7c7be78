#include "ciot/dsl/parser.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace ciot::dsl {

namespace {

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const std::string& file)
      : toks_(tokens), file_(file) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End)
      throw Error("E_PARSE", "token list must end with an end-of-input token");
  }

  SourceAst parse_model() {
    SourceAst ast;
    ast.file = file_;
    while (!at_end()) {
      if (check_keyword("payload")) {
        ast.payloads.push_back(parse_payload());
      } else if (check_keyword("interface")) {
        ast.interfaces.push_back(parse_interface());
      } else if (check_keyword("component")) {
        ast.components.push_back(parse_component());
      } else if (check_keyword("instance")) {
        ast.instances.push_back(parse_instance());
      } else {
        error();
      }
    }
    return ast;
  }

  Expr parse_standalone_expr() {
    Expr e = parse_expr();
    if (!at_end()) error();
    return e;
  }

 private:
  // -- token cursor -------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == TokenKind::End; }

  const Token& consume() {
    const Token& t = cur();
    prev_end_ = SourceLoc{t.line, t.end_column()};
    expected_.clear();
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  bool check_keyword(std::string_view kw) {
    if (cur().is_keyword(kw)) return true;
    expected_.insert("'" + std::string(kw) + "'");
    return false;
  }
  bool check_punct(std::string_view p) {
    if (cur().is_punct(p)) return true;
    expected_.insert("'" + std::string(p) + "'");
    return false;
  }
  bool check_kind(TokenKind k) {
    if (cur().kind == k) return true;
    expected_.insert(to_string(k));
    return false;
  }

  bool accept_keyword(std::string_view kw) {
    if (!check_keyword(kw)) return false;
    consume();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!check_punct(p)) return false;
    consume();
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) error();
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) error();
  }

  Name expect_identifier() {
    if (!check_kind(TokenKind::Identifier)) error();
    const Token& t = consume();
    return Name{t.text, span_of(t)};
  }

  /// Field names may reuse keywords (`payload.state`).
  Name expect_field_name() {
    if (cur().kind == TokenKind::Keyword) {
      const Token& t = consume();
      return Name{t.text, span_of(t)};
    }
    return expect_identifier();
  }

  Name expect_type_name() {
    for (auto kw : {"int", "float", "bool", "string"}) {
      if (check_keyword(kw)) {
        const Token& t = consume();
        return Name{t.text, span_of(t)};
      }
    }
    return expect_identifier();
  }

  static SourceSpan span_of(const Token& t) {
    return SourceSpan{{t.line, t.column}, {t.line, t.end_column()}};
  }
  SourceLoc here() const { return SourceLoc{cur().line, cur().column}; }
  SourceSpan span_from(SourceLoc begin) const { return SourceSpan{begin, prev_end_}; }

  [[noreturn]] void error() {
    const Token& t = cur();
    std::ostringstream msg;
    msg << "expected ";
    if (expected_.size() > 1) msg << "one of ";
    bool first = true;
    for (const auto& e : expected_) {
      msg << (first ? "" : ", ") << e;
      first = false;
    }
    if (t.kind == TokenKind::End)
      msg << "; found end of input";
    else
      msg << "; found '" << t.text << "'";
    Diagnostic d{"E_PARSE", Severity::Error, msg.str(), {t.line, t.column}, file_};
    throw Error("E_PARSE", format_diagnostic(d), {d});
  }

  // -- declarations -------------------------------------------------------

  PayloadAst parse_payload() {
    SourceLoc begin = here();
    expect_keyword("payload");
    PayloadAst p;
    p.name = expect_identifier();
    expect_punct("{");
    while (!accept_punct("}")) {
      SourceLoc fbegin = here();
      FieldAst f;
      f.name = expect_field_name();
      expect_punct(":");
      f.type = expect_type_name();
      f.span = span_from(fbegin);
      p.fields.push_back(std::move(f));
      if (!accept_punct(";")) accept_punct(",");
    }
    p.span = span_from(begin);
    return p;
  }

  InterfaceAst parse_interface() {
    SourceLoc begin = here();
    expect_keyword("interface");
    InterfaceAst i;
    i.name = expect_identifier();
    expect_punct("{");
    while (!accept_punct("}")) {
      SourceLoc obegin = here();
      expect_keyword("op");
      OperationAst op;
      op.name = expect_identifier();
      expect_punct("(");
      op.payload = expect_identifier();
      expect_punct(")");
      accept_punct(";");
      op.span = span_from(obegin);
      i.operations.push_back(std::move(op));
    }
    i.span = span_from(begin);
    return i;
  }

  InstanceAst parse_instance() {
    SourceLoc begin = here();
    expect_keyword("instance");
    InstanceAst inst;
    inst.name = expect_identifier();
    expect_punct(":");
    inst.component = expect_identifier();
    expect_punct(";");
    inst.span = span_from(begin);
    return inst;
  }

  ComponentAst parse_component() {
    SourceLoc begin = here();
    expect_keyword("component");
    ComponentAst c;
    c.name = expect_identifier();
    if (accept_punct(":")) {
      static const std::set<std::string> kinds = {"IoTElement", "Board", "VirtualEntity"};
      if (cur().kind != TokenKind::Identifier || !kinds.count(cur().text)) {
        for (const auto& k : kinds) expected_.insert("'" + k + "'");
        error();
      }
      c.kind = expect_identifier();
    }
    expect_punct("{");
    while (!accept_punct("}")) parse_member(c);
    c.span = span_from(begin);
    return c;
  }

  StateMachineAst& machine_of(ComponentAst& c, SourceLoc begin) {
    if (!c.machine) {
      c.machine.emplace();
      c.machine->span = SourceSpan{begin, begin};
    }
    return *c.machine;
  }

  void parse_member(ComponentAst& c) {
    SourceLoc begin = here();
    if (check_keyword("property")) {
      c.properties.push_back(parse_property());
    } else if (check_keyword("port")) {
      c.ports.push_back(parse_port());
    } else if (check_keyword("part")) {
      consume();
      PartAst p;
      p.name = expect_identifier();
      expect_punct(":");
      p.component = expect_identifier();
      expect_punct(";");
      p.span = span_from(begin);
      c.parts.push_back(std::move(p));
    } else if (check_keyword("connect")) {
      consume();
      ConnectorAst conn;
      conn.a = parse_endpoint();
      expect_keyword("to");
      conn.b = parse_endpoint();
      expect_punct(";");
      conn.span = span_from(begin);
      c.connectors.push_back(std::move(conn));
    } else if (check_keyword("incoming") || check_keyword("outgoing") ||
               (check_keyword("generic") && peek(1).is_keyword("event"))) {
      c.events.push_back(parse_event());
    } else if (check_keyword("send") || check_keyword("receive") || check_keyword("generic")) {
      c.actions.push_back(parse_action());
    } else if (check_keyword("statemachine")) {
      consume();
      auto& sm = machine_of(c, begin);
      expect_punct("{");
      while (!accept_punct("}")) {
        if (check_keyword("transition")) {
          sm.transitions.push_back(parse_transition());
        } else if (check_keyword("initial") || check_keyword("state")) {
          sm.states.push_back(parse_state());
        } else {
          error();
        }
      }
      sm.span.end = prev_end_;
    } else if (check_keyword("initial") || check_keyword("state")) {
      // States and transitions may also appear directly in the component
      // body; they join the component's single machine.
      auto& sm = machine_of(c, begin);
      sm.states.push_back(parse_state());
      sm.span.end = prev_end_;
    } else if (check_keyword("transition")) {
      auto& sm = machine_of(c, begin);
      sm.transitions.push_back(parse_transition());
      sm.span.end = prev_end_;
    } else {
      error();
    }
  }

  Value parse_literal() {
    if (accept_keyword("true")) return Value(true);
    if (accept_keyword("false")) return Value(false);
    if (check_kind(TokenKind::String)) return Value(unescape_string_token(consume().text));
    bool negative = accept_punct("-");
    if (check_kind(TokenKind::Integer)) {
      const Token& t = cur();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{}) {
        expected_.insert("integer in 64-bit range");
        error();
      }
      consume();
      return Value(negative ? -v : v);
    }
    if (check_kind(TokenKind::Float)) {
      double v = std::stod(consume().text);
      return Value(negative ? -v : v);
    }
    error();
  }

  PropertyAst parse_property() {
    SourceLoc begin = here();
    expect_keyword("property");
    PropertyAst p;
    p.name = expect_identifier();
    expect_punct(":");
    p.type = expect_type_name();
    expect_punct("=");
    p.initial = parse_literal();
    expect_punct(";");
    p.span = span_from(begin);
    return p;
  }

  std::vector<Name> parse_name_list() {
    std::vector<Name> out;
    out.push_back(expect_identifier());
    while (accept_punct(",")) out.push_back(expect_identifier());
    return out;
  }

  PortAst parse_port() {
    SourceLoc begin = here();
    expect_keyword("port");
    PortAst p;
    p.name = expect_identifier();
    if (accept_keyword("provides")) p.provided = parse_name_list();
    if (accept_keyword("requires")) p.required = parse_name_list();
    expect_punct(";");
    p.span = span_from(begin);
    return p;
  }

  EndpointAst parse_endpoint() {
    EndpointAst e;
    if (check_keyword("self")) {
      const Token& t = consume();
      e.instance = Name{t.text, span_of(t)};
    } else {
      e.instance = expect_identifier();
    }
    expect_punct(".");
    e.port = expect_identifier();
    return e;
  }

  void parse_port_and_payload(std::optional<Name>& port, std::optional<Name>& payload) {
    if (accept_keyword("on")) port = expect_identifier();
    if (accept_punct("(")) {
      payload = expect_identifier();
      expect_punct(")");
    }
  }

  EventAst parse_event() {
    SourceLoc begin = here();
    EventAst e;
    if (accept_keyword("incoming")) {
      e.direction = EventDirection::Incoming;
    } else if (accept_keyword("outgoing")) {
      e.direction = EventDirection::Outgoing;
    } else {
      expect_keyword("generic");
      e.direction = EventDirection::Generic;
    }
    expect_keyword("event");
    e.name = expect_identifier();
    parse_port_and_payload(e.port, e.payload);
    expect_keyword("does");
    e.action = expect_identifier();
    expect_punct(";");
    e.span = span_from(begin);
    return e;
  }

  ActionAst parse_action() {
    SourceLoc begin = here();
    ActionAst a;
    if (accept_keyword("send")) {
      a.kind = ActionKind::SendPayload;
    } else if (accept_keyword("receive")) {
      a.kind = ActionKind::ReceivePayload;
    } else {
      expect_keyword("generic");
      a.kind = ActionKind::Generic;
    }
    expect_keyword("action");
    a.name = expect_identifier();
    parse_port_and_payload(a.port, a.payload);
    if (!accept_punct(";")) {
      expect_punct("{");
      while (!accept_punct("}")) a.effects.push_back(parse_assignment());
    }
    a.span = span_from(begin);
    return a;
  }

  AssignmentAst parse_assignment() {
    SourceLoc begin = here();
    AssignmentAst a;
    if (accept_keyword("payload")) {
      a.to_payload = true;
      expect_punct(".");
      a.path.push_back(expect_field_name());
      while (accept_punct(".")) a.path.push_back(expect_field_name());
    } else {
      a.path.push_back(expect_identifier());
    }
    expect_punct("=");
    a.value = parse_expr();
    expect_punct(";");
    a.span = span_from(begin);
    return a;
  }

  StateAst parse_state() {
    SourceLoc begin = here();
    StateAst s;
    s.initial = accept_keyword("initial");
    expect_keyword("state");
    s.name = expect_identifier();
    if (!accept_punct(";")) {
      expect_punct("{");
      while (!accept_punct("}")) {
        std::vector<Name>* list = nullptr;
        if (accept_keyword("entry")) {
          list = &s.entry;
        } else if (accept_keyword("exit")) {
          list = &s.exit;
        } else if (accept_keyword("continuous")) {
          list = &s.continuous;
        } else {
          error();
        }
        for (auto& n : parse_name_list()) list->push_back(std::move(n));
        expect_punct(";");
      }
    }
    s.span = span_from(begin);
    return s;
  }

  TransitionAst parse_transition() {
    SourceLoc begin = here();
    expect_keyword("transition");
    TransitionAst t;
    t.source = expect_identifier();
    expect_punct("->");
    t.target = expect_identifier();
    if (accept_keyword("when")) t.trigger = expect_identifier();
    if (accept_punct("[")) {
      t.guard = parse_expr();
      expect_punct("]");
    }
    expect_punct(";");
    t.span = span_from(begin);
    return t;
  }

  // -- expressions --------------------------------------------------------
  //   or  := and { "or" and }
  //   and := not { "and" not }
  //   not := "not" not | cmp
  //   cmp := add [ cmpop add ]
  //   add := neg { ("+"|"-") neg }
  //   neg := "-" neg | primary

  Expr parse_expr() {
    Expr lhs = parse_and();
    while (check_keyword("or")) {
      SourceLoc loc = here();
      consume();
      lhs = Expr::make_binary(ExprOp::Or, std::move(lhs), parse_and(), loc);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (check_keyword("and")) {
      SourceLoc loc = here();
      consume();
      lhs = Expr::make_binary(ExprOp::And, std::move(lhs), parse_not(), loc);
    }
    return lhs;
  }

  Expr parse_not() {
    if (check_keyword("not")) {
      SourceLoc loc = here();
      consume();
      return Expr::make_unary(ExprOp::Not, parse_not(), loc);
    }
    return parse_comparison();
  }

  Expr parse_comparison() {
    Expr lhs = parse_additive();
    static constexpr std::pair<std::string_view, ExprOp> ops[] = {
        {"==", ExprOp::Eq}, {"!=", ExprOp::Ne}, {"<", ExprOp::Lt},
        {"<=", ExprOp::Le}, {">", ExprOp::Gt}, {">=", ExprOp::Ge},
    };
    for (auto [sym, op] : ops) {
      if (check_punct(sym)) {
        SourceLoc loc = here();
        consume();
        return Expr::make_binary(op, std::move(lhs), parse_additive(), loc);
      }
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_negation();
    for (;;) {
      ExprOp op;
      if (check_punct("+")) {
        op = ExprOp::Add;
      } else if (check_punct("-")) {
        op = ExprOp::Sub;
      } else {
        return lhs;
      }
      SourceLoc loc = here();
      consume();
      lhs = Expr::make_binary(op, std::move(lhs), parse_negation(), loc);
    }
  }

  Expr parse_negation() {
    if (check_punct("-")) {
      SourceLoc loc = here();
      consume();
      return Expr::make_unary(ExprOp::Neg, parse_negation(), loc);
    }
    return parse_primary();
  }

  Expr parse_primary() {
    SourceLoc loc = here();
    if (accept_punct("(")) {
      Expr inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    if (accept_keyword("payload")) {
      std::vector<std::string> path;
      expect_punct(".");
      path.push_back(expect_field_name().text);
      while (accept_punct(".")) path.push_back(expect_field_name().text);
      return Expr::make_payload(std::move(path), loc);
    }
    if (check_kind(TokenKind::Identifier)) return Expr::make_property(consume().text, loc);
    if (check_keyword("true") || check_keyword("false") || check_kind(TokenKind::String) ||
        check_kind(TokenKind::Integer) || check_kind(TokenKind::Float)) {
      return Expr::make_literal(parse_literal(), loc);
    }
    error();
  }

  const std::vector<Token>& toks_;
  const std::string& file_;
  std::size_t pos_ = 0;
  SourceLoc prev_end_{1, 1};
  std::set<std::string> expected_;
};

}  // namespace

SourceAst parse(const std::vector<Token>& tokens, const std::string& file) {
  return Parser(tokens, file).parse_model();
}

SourceAst parse_source(std::string_view source, const std::string& file) {
  return parse(tokenize(source, file), file);
}

Expr parse_expression(std::string_view source) {
  auto tokens = tokenize(source);
  return Parser(tokens, {}).parse_standalone_expr();
}

}  // namespace ciot::dsl
