#include "omtbits/smtlib.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace omtbits {

namespace {

bool simple_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) ||
         std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    std::vector<SExpr> stack;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const SourceLoc loc = here();
      const char c = text_[pos_];
      if (c == '(') {
        advance();
        SExpr list;
        list.kind = SExpr::Kind::List;
        list.loc = loc;
        stack.push_back(std::move(list));
      } else if (c == ')') {
        advance();
        if (stack.empty()) throw ParseError(loc, "unexpected ')'");
        SExpr done = std::move(stack.back());
        stack.pop_back();
        emit(std::move(done), stack, out);
      } else {
        emit(atom(loc), stack, out);
      }
    }
    if (!stack.empty())
      throw ParseError(here(), "unexpected end of input: '(' opened at " +
                                   std::to_string(stack.back().loc.line) + ":" +
                                   std::to_string(stack.back().loc.column) +
                                   " is never closed");
    return out;
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static void emit(SExpr e, std::vector<SExpr>& stack, std::vector<SExpr>& out) {
    if (stack.empty())
      out.push_back(std::move(e));
    else
      stack.back().items.push_back(std::move(e));
  }

  SExpr atom(SourceLoc loc) {
    SExpr e;
    e.loc = loc;
    const char c = text_[pos_];
    if (c == '|') {
      advance();
      while (pos_ < text_.size() && text_[pos_] != '|') {
        e.text.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError(here(), "unterminated quoted symbol");
      advance();
      e.kind = SExpr::Kind::Symbol;
      return e;
    }
    if (c == '"') {
      advance();
      for (;;) {
        if (pos_ >= text_.size()) throw ParseError(here(), "unterminated string literal");
        if (text_[pos_] == '"') {
          advance();
          if (pos_ < text_.size() && text_[pos_] == '"') {
            e.text.push_back('"');
            advance();
            continue;
          }
          break;
        }
        e.text.push_back(text_[pos_]);
        advance();
      }
      e.kind = SExpr::Kind::String;
      return e;
    }
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == ';' || d == '"' || d == '|')
        break;
      e.text.push_back(d);
      advance();
    }
    if (e.text.empty()) throw ParseError(loc, std::string("unexpected character '") + c + "'");
    if (e.text[0] == '#') {
      if (e.text.size() > 2 && e.text[1] == 'b' &&
          e.text.find_first_not_of("01", 2) == std::string::npos) {
        e.kind = SExpr::Kind::Binary;
      } else if (e.text.size() > 2 && e.text[1] == 'x' &&
                 std::all_of(e.text.begin() + 2, e.text.end(), [](char h) {
                   return std::isxdigit(static_cast<unsigned char>(h));
                 })) {
        e.kind = SExpr::Kind::Hex;
      } else {
        throw ParseError(loc, "malformed literal '" + e.text + "'");
      }
    } else if (e.text[0] == ':') {
      e.kind = SExpr::Kind::Keyword;
    } else if (std::isdigit(static_cast<unsigned char>(e.text[0]))) {
      if (e.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(loc, "malformed numeral '" + e.text + "'");
      e.kind = SExpr::Kind::Numeral;
    } else {
      if (!std::all_of(e.text.begin(), e.text.end(), simple_symbol_char))
        throw ParseError(loc, "malformed symbol '" + e.text + "'");
      e.kind = SExpr::Kind::Symbol;
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string sexpr_text(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::String: {
      std::string s = "\"";
      for (char c : e.text) {
        if (c == '"') s.push_back('"');
        s.push_back(c);
      }
      return s + "\"";
    }
    case SExpr::Kind::List: {
      std::string s = "(";
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) s.push_back(' ');
        s += sexpr_text(e.items[i]);
      }
      return s + ")";
    }
    default: return e.text;
  }
}

const std::set<std::string>& unsupported_ops() {
  static const std::set<std::string> ops = {
      "fp.add", "fp.sub", "fp.mul", "fp.div", "fp.fma", "fp.sqrt", "fp.rem",
      "fp.roundToIntegral", "fp.to_ubv", "fp.to_sbv", "fp.to_real", "to_fp",
      "to_fp_unsigned", "bvudiv", "bvurem", "bvsdiv", "bvsrem", "bvsmod",
      "bvashr", "forall", "exists"};
  return ops;
}

class Parser {
 public:
  Script run(std::string_view text) {
    for (const SExpr& e : Lexer(text).read_all()) command(e);
    return std::move(script_);
  }

 private:
  struct Macro {
    std::vector<std::pair<std::string, Sort>> params;
    Sort sort;
    SExpr body;
  };

  [[noreturn]] static void fail(const SExpr& e, const std::string& what) {
    throw ParseError(e.loc, what);
  }

  static const std::string& symbol(const SExpr& e, const char* what) {
    if (e.kind != SExpr::Kind::Symbol) fail(e, std::string("expected ") + what);
    return e.text;
  }

  static unsigned numeral(const SExpr& e) {
    if (e.kind != SExpr::Kind::Numeral) fail(e, "expected a numeral");
    try {
      return static_cast<unsigned>(std::stoul(e.text));
    } catch (const std::exception&) {
      fail(e, "numeral out of range");
    }
  }

  static void arity(const SExpr& e, std::size_t n) {
    if (e.items.size() != n)
      fail(e, "'" + sexpr_text(e.items.at(0)) + "' expects " +
                  std::to_string(n - 1) + " argument(s)");
  }

  Sort sort(const SExpr& e) {
    try {
      if (e.kind == SExpr::Kind::Symbol) {
        if (e.text == "Bool") return Sort::boolean();
        if (e.text == "Float16") return Sort::floating(FpSort(5, 11));
        if (e.text == "Float32") return Sort::floating(FpSort(8, 24));
        if (e.text == "Float64") return Sort::floating(FpSort(11, 53));
        if (e.text == "Float128") return Sort::floating(FpSort(15, 113));
      } else if (e.kind == SExpr::Kind::List && e.items.size() >= 3 &&
                 e.items[0].is_symbol("_")) {
        const std::string& head = e.items[1].text;
        if (head == "BitVec" && e.items.size() == 3)
          return Sort::bitvec(numeral(e.items[2]));
        if ((head == "FloatingPoint" || head == "FP") && e.items.size() == 4)
          return Sort::floating(FpSort(numeral(e.items[2]), numeral(e.items[3])));
      }
    } catch (const SortError& err) {
      fail(e, err.what());
    }
    fail(e, "unsupported sort " + sexpr_text(e));
  }

  const TermRef* lookup_scoped(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return &f->second;
    return nullptr;
  }

  TermRef app(const SExpr& at, Op op, std::vector<TermRef> args,
              std::vector<unsigned> indices = {}) {
    try {
      return mk_app(op, std::move(args), std::move(indices), at.loc);
    } catch (const SortError& err) {
      fail(at, err.what());
    }
  }

  // Chainable predicates: (op a b c) = (and (op a b) (op b c)).
  TermRef chain(const SExpr& at, Op op, const std::vector<TermRef>& args) {
    if (args.size() < 2) fail(at, std::string("'") + op_name(op) + "' needs at least 2 arguments");
    if (args.size() == 2) return app(at, op, args);
    std::vector<TermRef> parts;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      parts.push_back(app(at, op, {args[i], args[i + 1]}));
    return app(at, Op::And, std::move(parts));
  }

  TermRef left_assoc(const SExpr& at, Op op, const std::vector<TermRef>& args) {
    if (args.size() < 2) fail(at, std::string("'") + op_name(op) + "' needs at least 2 arguments");
    TermRef acc = app(at, op, {args[0], args[1]});
    for (std::size_t i = 2; i < args.size(); ++i) acc = app(at, op, {acc, args[i]});
    return acc;
  }

  TermRef indexed_constant(const SExpr& e) {
    const SExpr& head = e.items.at(1);
    const std::string& name = head.text;
    if (name.rfind("bv", 0) == 0 && name.size() > 2 &&
        name.find_first_not_of("0123456789", 2) == std::string::npos) {
      if (e.items.size() != 3) fail(e, "expected (_ bvN width)");
      const unsigned w = numeral(e.items[2]);
      if (w == 0) fail(e, "bit-vector width must be positive");
      return mk_bv(BvConst::from_value(BvSort(w), BigInt(name.substr(2))));
    }
    if (name == "+oo" || name == "-oo" || name == "+zero" || name == "-zero" ||
        name == "NaN") {
      if (e.items.size() != 4) fail(e, "expected (_ " + name + " ebits sbits)");
      FpSort s = [&] {
        try {
          return FpSort(numeral(e.items[2]), numeral(e.items[3]));
        } catch (const SortError& err) {
          fail(e, err.what());
        }
      }();
      if (name == "+oo") return mk_fp(fp_pos_inf(s));
      if (name == "-oo") return mk_fp(fp_neg_inf(s));
      if (name == "+zero") return mk_fp(fp_pos_zero(s));
      if (name == "-zero") return mk_fp(fp_neg_zero(s));
      return mk_fp(canonical_nan(s));
    }
    fail(e, "unsupported indexed identifier '" + name + "'");
  }

  TermRef term(const SExpr& e) {
    switch (e.kind) {
      case SExpr::Kind::Binary:
      case SExpr::Kind::Hex: return mk_bv(parse_bv_literal(e.text));
      case SExpr::Kind::Symbol: {
        if (const TermRef* t = lookup_scoped(e.text)) return *t;
        if (e.text == "true") return mk_bool(true);
        if (e.text == "false") return mk_bool(false);
        if (auto it = consts_.find(e.text); it != consts_.end())
          return mk_var(e.text, it->second);
        if (auto it = macros_.find(e.text); it != macros_.end()) {
          if (!it->second.params.empty()) fail(e, "macro '" + e.text + "' needs arguments");
          return term(it->second.body);
        }
        fail(e, "unknown symbol '" + e.text + "'");
      }
      case SExpr::Kind::List: break;
      default: fail(e, "unsupported term " + sexpr_text(e));
    }
    if (e.items.empty()) fail(e, "empty application");
    const SExpr& head = e.items[0];

    if (head.is_symbol("_")) return indexed_constant(e);
    if (head.kind == SExpr::Kind::List) {
      if (head.items.size() >= 2 && head.items[0].is_symbol("_")) {
        const std::string& name = head.items[1].text;
        if (name == "extract") {
          if (head.items.size() != 4) fail(head, "expected (_ extract i j)");
          arity(e, 2);
          return app(e, Op::Extract, {term(e.items[1])},
                     {numeral(head.items[2]), numeral(head.items[3])});
        }
        if (name == "zero_extend" || name == "sign_extend") {
          if (head.items.size() != 3) fail(head, "expected (_ " + name + " k)");
          arity(e, 2);
          const unsigned k = numeral(head.items[2]);
          TermRef x = term(e.items[1]);
          if (!x->sort.is_bv()) fail(e, name + " expects a bit-vector");
          if (k == 0) return x;
          TermRef ext;
          if (name == "zero_extend") {
            ext = mk_bv(BvConst(Bits(k, 0)));
          } else {
            const unsigned msb = x->sort.width() - 1;
            TermRef sign = app(e, Op::Extract, {x}, {msb, msb});
            ext = sign;
            for (unsigned i = 1; i < k; ++i) ext = app(e, Op::Concat, {sign, ext});
          }
          return app(e, Op::Concat, {ext, x});
        }
        fail(head, "unsupported operator '" + name + "'");
      }
      fail(head, "unsupported application head");
    }
    const std::string& name = symbol(head, "an operator");

    if (name == "let") {
      arity(e, 3);
      if (e.items[1].kind != SExpr::Kind::List) fail(e.items[1], "expected let bindings");
      std::map<std::string, TermRef> frame;
      for (const SExpr& b : e.items[1].items) {
        if (b.kind != SExpr::Kind::List || b.items.size() != 2)
          fail(b, "malformed let binding");
        frame[symbol(b.items[0], "a binding name")] = term(b.items[1]);
      }
      scopes_.push_back(std::move(frame));
      TermRef body = term(e.items[2]);
      scopes_.pop_back();
      return body;
    }
    if (name == "!") {
      if (e.items.size() < 2) fail(e, "malformed annotation");
      return term(e.items[1]);
    }

    if (name == "distinct" && !macros_.count(name)) return distinct(e);

    if (unsupported_ops().count(name) && !macros_.count(name))
      fail(head, "unsupported operator '" + name + "'");

    std::vector<TermRef> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));

    if (auto it = macros_.find(name); it != macros_.end() && !lookup_scoped(name)) {
      const Macro& m = it->second;
      if (args.size() != m.params.size())
        fail(e, "macro '" + name + "' expects " + std::to_string(m.params.size()) +
                    " argument(s)");
      std::map<std::string, TermRef> frame;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!(args[i]->sort == m.params[i].second))
          fail(e.items[i + 1], "argument sort " + args[i]->sort.to_string() +
                                   " does not match parameter '" + m.params[i].first + "'");
        frame[m.params[i].first] = args[i];
      }
      // Macro bodies only see their parameters and global declarations.
      auto saved = std::move(scopes_);
      scopes_.clear();
      scopes_.push_back(std::move(frame));
      TermRef body = term(m.body);
      scopes_ = std::move(saved);
      return body;
    }

    if (name == "fp") {
      if (args.size() != 3) fail(e, "'fp' expects 3 arguments");
      TermRef t = app(e, Op::FpFromBv, args);
      if (std::all_of(args.begin(), args.end(),
                      [](const TermRef& a) { return a->op == Op::BvConst; })) {
        Bits bits;
        for (const auto& a : args) bits.insert(bits.end(), a->bits.begin(), a->bits.end());
        return mk_fp(FpBits(t->sort.fp_sort(), bits));
      }
      return t;
    }
    const auto op = op_from_name(name);
    if (!op) fail(head, "unknown operator '" + name + "'");

    switch (*op) {
      case Op::Eq:
      case Op::FpEq:
      case Op::FpLt:
      case Op::FpLeq:
      case Op::FpGt:
      case Op::FpGeq:
      case Op::BvUlt: case Op::BvUle: case Op::BvUgt: case Op::BvUge:
      case Op::BvSlt: case Op::BvSle: case Op::BvSgt: case Op::BvSge:
        if (*op == Op::Eq || *op == Op::FpEq || *op == Op::FpLt ||
            *op == Op::FpLeq || *op == Op::FpGt || *op == Op::FpGeq)
          return chain(e, *op, args);
        return app(e, *op, args);
      case Op::And:
      case Op::Or:
        if (args.empty()) return mk_bool(*op == Op::And);
        if (args.size() == 1) return args[0];
        return app(e, *op, args);
      case Op::Xor:
      case Op::BvAnd: case Op::BvOr: case Op::BvXor: case Op::BvAdd:
      case Op::BvMul: case Op::Concat:
        return left_assoc(e, *op, args);
      case Op::Implies: {
        if (args.size() < 2) fail(e, "'=>' needs at least 2 arguments");
        TermRef acc = args.back();
        for (std::size_t i = args.size() - 1; i-- > 0;) acc = app(e, Op::Implies, {args[i], acc});
        return acc;
      }
      default: return app(e, *op, args);
    }
  }

  TermRef distinct(const SExpr& e) {
    std::vector<TermRef> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
    if (args.size() < 2) fail(e, "'distinct' needs at least 2 arguments");
    std::vector<TermRef> parts;
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = i + 1; j < args.size(); ++j)
        parts.push_back(app(e, Op::Not, {app(e, Op::Eq, {args[i], args[j]})}));
    return parts.size() == 1 ? parts[0] : app(e, Op::And, std::move(parts));
  }

  void declare(const SExpr& at, const std::string& name, Sort s) {
    if (consts_.count(name) || macros_.count(name))
      fail(at, "symbol '" + name + "' already declared");
    consts_.emplace(name, s);
    Command c;
    c.kind = Command::Kind::DeclareConst;
    c.name = name;
    c.sort = s;
    c.loc = at.loc;
    script_.commands.push_back(std::move(c));
  }

  std::string fresh_cost_name() {
    std::string name = "cost";
    while (consts_.count(name) || macros_.count(name))
      name = "cost!" + std::to_string(++fresh_counter_);
    return name;
  }

  void objective(const SExpr& e, bool maximize) {
    if (e.items.size() < 2) fail(e, "objective term missing");
    if (have_objective_) fail(e, "only one objective per script is supported");
    Signedness sign = Signedness::Unsigned;
    bool explicit_sign = false;
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const SExpr& attr = e.items[i];
      if (attr.kind == SExpr::Kind::Keyword && attr.text == ":signed") {
        sign = Signedness::Signed;
      } else if (attr.kind == SExpr::Kind::Keyword && attr.text == ":unsigned") {
        sign = Signedness::Unsigned;
      } else {
        fail(attr, "unsupported objective attribute '" + sexpr_text(attr) + "'");
      }
      explicit_sign = true;
    }
    TermRef t = term(e.items[1]);
    if (!t->sort.is_bv() && !t->sort.is_fp())
      fail(e.items[1], "objective must be a bit-vector or floating-point term");
    if (t->sort.is_fp() && explicit_sign)
      fail(e, "signedness attributes only apply to bit-vector objectives");
    std::string name;
    if (t->op == Op::Var) {
      name = t->name;
    } else {
      // cost = f(...) normalization.
      name = fresh_cost_name();
      declare(e, name, t->sort);
      Command a;
      a.kind = Command::Kind::Assert;
      a.term = app(e, Op::Eq, {mk_var(name, t->sort), t});
      a.loc = e.loc;
      script_.commands.push_back(std::move(a));
    }
    Command c;
    c.kind = maximize ? Command::Kind::Maximize : Command::Kind::Minimize;
    c.name = name;
    c.sort = t->sort;
    c.sign = sign;
    c.loc = e.loc;
    script_.commands.push_back(std::move(c));
    have_objective_ = true;
  }

  void command(const SExpr& e) {
    if (e.kind != SExpr::Kind::List || e.items.empty())
      fail(e, "expected a command");
    const std::string& name = symbol(e.items[0], "a command name");
    Command c;
    c.loc = e.loc;
    if (name == "set-option" || name == "set-info") {
      if (e.items.size() < 2 || e.items[1].kind != SExpr::Kind::Keyword)
        fail(e, "expected a keyword");
      c.kind = name == "set-option" ? Command::Kind::SetOption : Command::Kind::SetInfo;
      c.name = e.items[1].text;
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        if (i > 2) c.value.push_back(' ');
        c.value += sexpr_text(e.items[i]);
      }
    } else if (name == "set-logic") {
      arity(e, 2);
      c.kind = Command::Kind::SetLogic;
      c.name = symbol(e.items[1], "a logic name");
    } else if (name == "declare-const") {
      arity(e, 3);
      declare(e, symbol(e.items[1], "a constant name"), sort(e.items[2]));
      return;
    } else if (name == "declare-fun") {
      arity(e, 4);
      if (e.items[2].kind != SExpr::Kind::List || !e.items[2].items.empty())
        fail(e.items[2], "only 0-ary declare-fun is supported");
      declare(e, symbol(e.items[1], "a function name"), sort(e.items[3]));
      return;
    } else if (name == "define-fun") {
      arity(e, 5);
      const std::string& fname = symbol(e.items[1], "a function name");
      if (consts_.count(fname) || macros_.count(fname))
        fail(e.items[1], "symbol '" + fname + "' already declared");
      if (e.items[2].kind != SExpr::Kind::List) fail(e.items[2], "expected parameter list");
      Macro m{{}, sort(e.items[3]), e.items[4]};
      std::map<std::string, TermRef> frame;
      for (const SExpr& p : e.items[2].items) {
        if (p.kind != SExpr::Kind::List || p.items.size() != 2) fail(p, "malformed parameter");
        const std::string& pname = symbol(p.items[0], "a parameter name");
        const Sort ps = sort(p.items[1]);
        m.params.emplace_back(pname, ps);
        frame[pname] = mk_var(pname, ps);
      }
      scopes_.push_back(std::move(frame));
      TermRef body = term(m.body);
      scopes_.pop_back();
      if (!(body->sort == m.sort))
        fail(e.items[4], "body sort " + body->sort.to_string() +
                             " does not match declared " + m.sort.to_string());
      c.kind = Command::Kind::DefineFun;
      c.name = fname;
      c.sort = m.sort;
      c.params = m.params;
      c.term = body;
      macros_.emplace(fname, std::move(m));
    } else if (name == "assert") {
      arity(e, 2);
      c.kind = Command::Kind::Assert;
      c.term = term(e.items[1]);
      if (!c.term->sort.is_bool()) fail(e.items[1], "assertion is not Bool");
    } else if (name == "minimize" || name == "maximize") {
      objective(e, name == "maximize");
      return;
    } else if (name == "check-sat") {
      arity(e, 1);
      c.kind = Command::Kind::CheckSat;
    } else if (name == "get-model") {
      arity(e, 1);
      c.kind = Command::Kind::GetModel;
    } else if (name == "get-objectives") {
      arity(e, 1);
      c.kind = Command::Kind::GetObjectives;
    } else if (name == "exit") {
      arity(e, 1);
      c.kind = Command::Kind::Exit;
    } else {
      fail(e.items[0], "unsupported command '" + name + "'");
    }
    script_.commands.push_back(std::move(c));
  }

  std::map<std::string, Sort> consts_;
  std::map<std::string, Macro> macros_;
  std::vector<std::map<std::string, TermRef>> scopes_;
  bool have_objective_ = false;
  int fresh_counter_ = 0;
  Script script_;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Lexer(text).read_all(); }

Script parse_script(std::string_view text) { return Parser().run(text); }

std::string print_script(const Script& script) {
  std::ostringstream os;
  for (const Command& c : script.commands) {
    switch (c.kind) {
      case Command::Kind::SetOption:
      case Command::Kind::SetInfo:
        os << (c.kind == Command::Kind::SetOption ? "(set-option " : "(set-info ")
           << c.name;
        if (!c.value.empty()) os << ' ' << c.value;
        os << ")\n";
        break;
      case Command::Kind::SetLogic: os << "(set-logic " << c.name << ")\n"; break;
      case Command::Kind::DeclareConst:
        os << "(declare-const " << quote_symbol(c.name) << ' ' << c.sort.to_string() << ")\n";
        break;
      case Command::Kind::DefineFun:
        os << "(define-fun " << quote_symbol(c.name) << " (";
        for (std::size_t i = 0; i < c.params.size(); ++i)
          os << (i ? " " : "") << '(' << quote_symbol(c.params[i].first) << ' '
             << c.params[i].second.to_string() << ')';
        os << ") " << c.sort.to_string() << ' ' << to_smt2(c.term) << ")\n";
        break;
      case Command::Kind::Assert: os << "(assert " << to_smt2(c.term) << ")\n"; break;
      case Command::Kind::Minimize:
      case Command::Kind::Maximize:
        os << (c.kind == Command::Kind::Minimize ? "(minimize " : "(maximize ")
           << quote_symbol(c.name);
        if (c.sort.is_bv() && c.sign == Signedness::Signed) os << " :signed";
        os << ")\n";
        break;
      case Command::Kind::CheckSat: os << "(check-sat)\n"; break;
      case Command::Kind::GetModel: os << "(get-model)\n"; break;
      case Command::Kind::GetObjectives: os << "(get-objectives)\n"; break;
      case Command::Kind::Exit: os << "(exit)\n"; break;
    }
  }
  return os.str();
}

bool same_script(const Script& a, const Script& b) {
  if (a.commands.size() != b.commands.size()) return false;
  for (std::size_t i = 0; i < a.commands.size(); ++i) {
    const Command& x = a.commands[i];
    const Command& y = b.commands[i];
    if (x.kind != y.kind || x.name != y.name || x.value != y.value ||
        !(x.sort == y.sort) || x.params != y.params || x.sign != y.sign ||
        bool(x.term) != bool(y.term) || (x.term && !same_term(x.term, y.term)))
      return false;
  }
  return true;
}

Problem problem_before(const Script& script, std::size_t end) {
  Problem p;
  for (std::size_t i = 0; i < std::min(end, script.commands.size()); ++i) {
    const Command& c = script.commands[i];
    switch (c.kind) {
      case Command::Kind::DeclareConst: p.declarations.emplace_back(c.name, c.sort); break;
      case Command::Kind::Assert: p.assertions.push_back(c.term); break;
      case Command::Kind::Minimize:
      case Command::Kind::Maximize:
        p.objective = Objective{c.name, c.sort,
                                c.kind == Command::Kind::Minimize ? Direction::Minimize
                                                                  : Direction::Maximize,
                                c.sign};
        break;
      default: break;
    }
  }
  return p;
}

std::string format_value(const Sort& sort, const Bits& bits) {
  if (sort.is_bool()) return bits.at(0) ? "true" : "false";
  if (sort.is_bv()) return format_bv_literal(bits);
  return to_smt2(mk_fp(FpBits(sort.fp_sort(), bits)));
}


namespace {

std::string value_comment(const Sort& sort, const Bits& bits, Signedness sign) {
  if (sort.is_bool()) return "";
  if (sort.is_fp()) return fp_value(FpBits(sort.fp_sort(), bits)).to_string();
  return bv_value(BvConst(bits), sign).str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out;
}

struct SatOutcome {
  sat::Status status;
  Assignment model;
};

SatOutcome plain_check(const Problem& problem, const InterpretOptions& options) {
  sat::Solver solver;
  Blaster blaster(solver);
  load_problem(problem, blaster);
  if (options.config.timeout)
    solver.set_deadline(sat::Solver::Clock::now() + *options.config.timeout);
  SatOutcome out{solver.solve({}), {}};
  if (out.status == sat::Status::Sat) {
    for (const auto& [name, var] : blaster.map().vars()) {
      Bits bits;
      for (Lit l : var.bits) bits.push_back(solver.model_value(l) ? 1 : 0);
      out.model.emplace(name, std::move(bits));
    }
  }
  return out;
}

void dump_cnf(const Problem& problem, const std::string& path) {
  sat::Solver solver;
  Blaster blaster(solver);
  load_problem(problem, blaster);
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  solver.dump_dimacs(os);
}

}  // namespace

void interpret(const Script& script, const InterpretOptions& options,
               std::ostream& out) {
  std::optional<Assignment> model;
  std::optional<std::string> objectives;
  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    const Command& c = script.commands[i];
    if (c.kind == Command::Kind::Exit) break;
    try {
      switch (c.kind) {
        case Command::Kind::CheckSat: {
          const Problem problem = problem_before(script, i);
          model.reset();
          objectives.reset();
          if (options.dump_cnf) dump_cnf(problem, *options.dump_cnf);
          if (!problem.objective) {
            const auto start = std::chrono::steady_clock::now();
            SatOutcome r = plain_check(problem, options);
            out << sat::to_string(r.status) << '\n';
            if (r.status == sat::Status::Sat) model = std::move(r.model);
            if (options.stats)
              out << "smt_calls=1 wall_ms="
                  << std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count()
                  << '\n';
            break;
          }
          const OptResult r = optimize(problem, options.config);
          const bool have_model = r.status == OptStatus::Optimum ||
                                  r.status == OptStatus::NanOnly || !r.model.empty();
          out << (r.status == OptStatus::Unsat ? "unsat"
                  : have_model                 ? "sat"
                                               : "unknown")
              << '\n';
          if (have_model) {
            model = r.model;
            std::string line = "(objectives (" + quote_symbol(problem.objective->name) +
                               ' ' + r.value_string() + ')';
            if (r.partial || r.status == OptStatus::Unknown) line += " :partial";
            objectives = line + ')';
            out << *objectives << '\n';
          }
          if (options.stats)
            out << "smt_calls=" << r.stats.smt_calls
                << " wall_ms=" << static_cast<std::int64_t>(r.stats.wall_ms) << '\n';
          break;
        }
        case Command::Kind::GetModel: {
          if (!model) throw Error("no model available");
          const Problem problem = problem_before(script, i);
          out << "(model\n";
          for (const auto& [name, sort] : problem.declarations) {
            auto it = model->find(name);
            if (it == model->end()) continue;
            const Signedness sign =
                problem.objective && problem.objective->name == name
                    ? problem.objective->sign
                    : Signedness::Unsigned;
            out << "  (define-fun " << quote_symbol(name) << " () " << sort.to_string()
                << ' ' << format_value(sort, it->second) << ')';
            const std::string v = value_comment(sort, it->second, sign);
            if (!v.empty()) out << " ; " << v;
            out << '\n';
          }
          out << ")\n";
          break;
        }
        case Command::Kind::GetObjectives:
          if (!objectives) throw Error("no objective values available");
          out << *objectives << '\n';
          break;
        default: break;
      }
    } catch (const Error& err) {
      out << "(error \"command " << i + 1 << ": " << escape(err.what()) << "\")\n";
    }
  }
}

}  // namespace omtbits
