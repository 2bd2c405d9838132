#pragma once

// SMT-LIB v2 subset with OMT extensions: declare-const, 0-ary declare-fun,
// define-fun macros, let, assert, (minimize t [:signed]), (maximize ...),
// check-sat, get-model, get-objectives, set-option, set-info, set-logic, exit.

#include "omtbits/engines.h"
#include "omtbits/term.h"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omtbits {

struct SExpr {
  enum class Kind { Symbol, Keyword, Numeral, Binary, Hex, String, List };
  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;
  SourceLoc loc;

  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
};

/// Reads every top-level s-expression. Throws ParseError with line:column.
std::vector<SExpr> read_sexprs(std::string_view text);

struct Command {
  enum class Kind {
    SetOption, SetInfo, SetLogic, DeclareConst, DefineFun, Assert, Minimize,
    Maximize, CheckSat, GetModel, GetObjectives, Exit,
  };
  Kind kind = Kind::CheckSat;
  std::string name;   // symbol, option/info keyword, or logic
  std::string value;  // option/info value, verbatim
  Sort sort = Sort::boolean();
  std::vector<std::pair<std::string, Sort>> params;  // define-fun
  TermRef term;                                      // assert / define-fun body
  Signedness sign = Signedness::Unsigned;            // minimize / maximize
  SourceLoc loc;
};

struct Script {
  std::vector<Command> commands;
};

Script parse_script(std::string_view text);
std::string print_script(const Script& script);
bool same_script(const Script& a, const Script& b);

/// Problem formed by the commands before index `end`.
Problem problem_before(const Script& script, std::size_t end);

struct InterpretOptions {
  EngineConfig config;
  bool stats = false;
  std::optional<std::string> dump_cnf;
};

/// Runs the script, writing the line-oriented result grammar to `out`:
///   sat | unsat | unknown
///   (objectives (<name> <value>))
///   (model
///     (define-fun <name> () <sort> <pattern>) ; <value>
///   )
///   smt_calls=<k> wall_ms=<t>          (with stats)
/// Engine failures are reported as (error "...") with the command index.
void interpret(const Script& script, const InterpretOptions& options,
               std::ostream& out);

/// SMT-LIB rendering of a model value of the given sort.
std::string format_value(const Sort& sort, const Bits& bits);

}  // namespace omtbits
