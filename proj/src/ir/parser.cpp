#include <cctype>
#include <charconv>
#include <stdexcept>

#include "oblint/ir.hpp"

namespace oblint::ir {
namespace {

enum class Tok { Ident, Local, Global, Int, Punct, Marker, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

struct ParseError {
  SourceLoc loc;
  std::string message;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '#';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        t.text = take_while(ident_char);
      } else if (c == '%' || c == '@') {
        advance();
        t.kind = c == '%' ? Tok::Local : Tok::Global;
        t.text = take_while(ident_char);
        if (t.text.empty()) throw ParseError{t.loc, std::string("syntax error: expected name after '") + c + "'"};
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Tok::Int;
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc()) throw ParseError{t.loc, "syntax error: integer literal out of range"};
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Tok::Punct;
        t.text = "->";
        advance();
        advance();
      } else if (c == '!') {
        advance();
        std::string tag = take_while(ident_char);
        if (tag != "t") throw ParseError{t.loc, "syntax error: unknown marker '!" + tag + "'"};
        t.kind = Tok::Marker;
        t.text = "!t";
      } else if (std::string_view("(){}[],:=").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance();
      } else {
        throw ParseError{t.loc, std::string("syntax error: unexpected character '") + c + "'"};
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  template <typename Pred>
  std::string take_while(Pred pred) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && pred(src_[pos_])) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Type parse_lone_type() {
    Type t = parse_type();
    if (peek().kind != Tok::End) fail(peek(), "end of type");
    return t;
  }

  Module parse() {
    Module m;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_ident("global"))
        m.globals.push_back(parse_global());
      else if (is_ident("extern"))
        m.externs.push_back(parse_extern());
      else if (is_ident("fn"))
        m.functions.push_back(parse_function());
      else
        throw ParseError{t.loc, "syntax error: expected 'global', 'extern' or 'fn', found '" +
                                    t.text + "'"};
    }
    return m;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool is_ident(std::string_view s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError{t.loc, "syntax error: expected " + what + ", found " + found};
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "'" + std::string(p) + "'");
    next();
  }
  void expect_keyword(std::string_view k) {
    if (!is_ident(k)) fail(peek(), "'" + std::string(k) + "'");
    next();
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail(peek(), what);
    return next().text;
  }
  std::string expect_local() {
    if (peek().kind != Tok::Local) fail(peek(), "value name");
    return next().text;
  }
  std::int64_t expect_int() {
    if (peek().kind != Tok::Int) fail(peek(), "integer");
    return next().value;
  }

  Type parse_type() {
    const Token t = peek();
    if (t.kind == Tok::Ident) {
      next();
      if (t.text == "i1") return Type::i1();
      if (t.text == "i8") return Type::i8();
      if (t.text == "i32") return Type::i32();
      if (t.text == "i64") return Type::i64();
      if (t.text == "ptr") return Type::ptr();
      if (t.text == "void") return Type::void_();
      throw ParseError{t.loc, "malformed type: unknown type '" + t.text + "'"};
    }
    if (is_punct("[")) {
      next();
      const Token n = peek();
      if (n.kind != Tok::Int) throw ParseError{n.loc, "malformed type: expected array length"};
      next();
      if (n.value <= 0) throw ParseError{n.loc, "malformed type: array length must be positive"};
      if (!is_ident("x")) throw ParseError{peek().loc, "malformed type: expected 'x' in array type"};
      next();
      Type elem = parse_type();
      if (elem.is_void()) throw ParseError{n.loc, "malformed type: void array element"};
      expect_punct("]");
      return Type::array(std::move(elem), static_cast<std::uint64_t>(n.value));
    }
    if (is_punct("{")) {
      next();
      std::vector<Type> fields;
      if (is_punct("}")) throw ParseError{t.loc, "malformed type: aggregate needs at least one field"};
      for (;;) {
        Type f = parse_type();
        if (f.is_void()) throw ParseError{t.loc, "malformed type: void aggregate field"};
        fields.push_back(std::move(f));
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
      expect_punct("}");
      return Type::aggregate(std::move(fields));
    }
    throw ParseError{t.loc, "malformed type: expected a type, found '" + t.text + "'"};
  }

  Init parse_init() {
    Init init;
    if (peek().kind == Tok::Int) {
      init.leaf = next().value;
      return init;
    }
    std::string close;
    if (is_punct("["))
      close = "]";
    else if (is_punct("{"))
      close = "}";
    else
      fail(peek(), "initializer");
    next();
    for (;;) {
      init.items.push_back(parse_init());
      if (is_punct(",")) {
        next();
        continue;
      }
      break;
    }
    expect_punct(close);
    return init;
  }

  Global parse_global() {
    Global g;
    g.loc = peek().loc;
    expect_keyword("global");
    if (peek().kind != Tok::Global) fail(peek(), "global name");
    g.name = next().text;
    expect_punct(":");
    g.type = parse_type();
    if (is_ident("blinded")) {
      next();
      g.blinded = true;
    }
    if (is_punct("=")) {
      next();
      g.init = parse_init();
    }
    return g;
  }

  Extern parse_extern() {
    Extern e;
    e.loc = peek().loc;
    expect_keyword("extern");
    e.name = expect_ident("extern name");
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        e.params.push_back(parse_type());
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct("->");
    e.ret = parse_type();
    return e;
  }

  Function parse_function() {
    Function f;
    f.loc = peek().loc;
    expect_keyword("fn");
    f.name = expect_ident("function name");
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        Param p;
        p.name = expect_local();
        expect_punct(":");
        p.type = parse_type();
        if (is_ident("blinded")) {
          next();
          p.blinded = true;
        }
        f.params.push_back(std::move(p));
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct("->");
    f.ret = parse_type();
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind != Tok::Ident || !is_punct(":", 1)) fail(peek(), "block label");
      Block b;
      b.label = next().text;
      next();
      while (!is_punct("}") && !(peek().kind == Tok::Ident && is_punct(":", 1))) {
        if (peek().kind == Tok::End) fail(peek(), "'}'");
        b.insts.push_back(parse_instruction());
      }
      f.blocks.push_back(std::move(b));
    }
    expect_punct("}");
    if (f.blocks.empty()) throw ParseError{f.loc, "syntax error: function '" + f.name + "' has no blocks"};
    return f;
  }

  Operand parse_operand() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Local: return ValueRef{next().text};
      case Tok::Global: return GlobalRef{next().text};
      case Tok::Int: return Const{next().value};
      default: fail(t, "operand");
    }
  }

  Instruction parse_instruction() {
    Instruction inst;
    inst.loc = peek().loc;
    if (peek().kind == Tok::Local) {
      inst.result = next().text;
      expect_punct("=");
    }
    const Token kw = peek();
    if (kw.kind != Tok::Ident) fail(kw, "instruction");
    next();
    const std::string& k = kw.text;
    if (k == "alloca") {
      inst.op = Opcode::Alloca;
      inst.type = parse_type();
      if (is_punct(",")) {
        next();
        const Token n = peek();
        std::int64_t c = expect_int();
        if (c <= 0) throw ParseError{n.loc, "syntax error: alloca count must be positive"};
        inst.count = static_cast<std::uint64_t>(c);
      }
    } else if (k == "load") {
      inst.op = Opcode::Load;
      inst.type = parse_type();
      expect_punct(",");
      inst.operands.push_back(parse_operand());
    } else if (k == "store") {
      inst.op = Opcode::Store;
      inst.type = parse_type();
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.operands.push_back(parse_operand());
    } else if (k == "addr") {
      inst.op = Opcode::Addr;
      inst.type = parse_type();
      expect_punct(",");
      inst.operands.push_back(parse_operand());
      do {
        expect_punct(",");
        inst.operands.push_back(parse_operand());
      } while (is_punct(","));
    } else if (auto b = parse_binop(k)) {
      inst.op = Opcode::Binop;
      inst.binop = *b;
      inst.type = parse_type();
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.operands.push_back(parse_operand());
    } else if (k == "icmp") {
      inst.op = Opcode::Icmp;
      const Token pt = peek();
      auto p = pt.kind == Tok::Ident ? parse_pred(pt.text) : std::nullopt;
      if (!p) fail(pt, "comparison predicate");
      next();
      inst.pred = *p;
      inst.type = parse_type();
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.operands.push_back(parse_operand());
    } else if (k == "select") {
      inst.op = Opcode::Select;
      inst.type = parse_type();
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.operands.push_back(parse_operand());
    } else if (k == "cast") {
      inst.op = Opcode::Cast;
      inst.type = parse_type();
      inst.operands.push_back(parse_operand());
      expect_keyword("to");
      inst.to_type = parse_type();
    } else if (k == "phi") {
      inst.op = Opcode::Phi;
      inst.type = parse_type();
      for (;;) {
        expect_punct("[");
        inst.operands.push_back(parse_operand());
        expect_punct(",");
        inst.labels.push_back(expect_ident("predecessor label"));
        expect_punct("]");
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    } else if (k == "call") {
      inst.op = Opcode::Call;
      inst.type = parse_type();
      inst.callee = expect_ident("call target");
      expect_punct("(");
      if (!is_punct(")")) {
        for (;;) {
          inst.operands.push_back(parse_operand());
          if (is_punct(",")) {
            next();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
    } else if (k == "br") {
      inst.op = Opcode::Br;
      inst.operands.push_back(parse_operand());
      expect_punct(",");
      inst.labels.push_back(expect_ident("label"));
      expect_punct(",");
      inst.labels.push_back(expect_ident("label"));
    } else if (k == "jmp") {
      inst.op = Opcode::Jmp;
      inst.labels.push_back(expect_ident("label"));
    } else if (k == "ret") {
      inst.op = Opcode::Ret;
      Tok nk = peek().kind;
      if (nk == Tok::Local || nk == Tok::Global || nk == Tok::Int)
        inst.operands.push_back(parse_operand());
    } else {
      throw ParseError{kw.loc, "unknown instruction kind '" + k + "'"};
    }
    if (peek().kind == Tok::Marker) next();
    return inst;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_module(std::string_view source) {
  ParseResult result;
  try {
    Parser p(Lexer(source).run());
    result.module = p.parse();
  } catch (const ParseError& e) {
    Diagnostic d;
    d.loc = e.loc;
    d.message = e.message;
    result.diagnostics.push_back(std::move(d));
  }
  return result;
}

std::optional<Type> parse_type(std::string_view text) {
  try {
    Parser p(Lexer(text).run());
    return p.parse_lone_type();
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

}  // namespace oblint::ir
