#include "omtbits/term.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace omtbits {

FpSort Sort::fp_sort() const {
  if (!is_fp()) throw SortError("not a floating-point sort: " + to_string());
  return FpSort(a_, b_);
}

std::string Sort::to_string() const {
  switch (kind_) {
    case Kind::Bool: return "Bool";
    case Kind::BitVec: return "(_ BitVec " + std::to_string(a_) + ")";
    case Kind::Float: return omtbits::to_string(FpSort(a_, b_));
  }
  return "?";
}

namespace {

struct OpInfo {
  Op op;
  const char* name;
};

constexpr OpInfo kOps[] = {
    {Op::Var, "<var>"},         {Op::True, "true"},
    {Op::False, "false"},       {Op::BvConst, "<bv>"},
    {Op::FpConst, "<fp>"},      {Op::Not, "not"},
    {Op::And, "and"},           {Op::Or, "or"},
    {Op::Xor, "xor"},           {Op::Implies, "=>"},
    {Op::Ite, "ite"},           {Op::Eq, "="},
    {Op::Concat, "concat"},     {Op::Extract, "extract"},
    {Op::BvNot, "bvnot"},       {Op::BvAnd, "bvand"},
    {Op::BvOr, "bvor"},         {Op::BvXor, "bvxor"},
    {Op::BvXnor, "bvxnor"},     {Op::BvNeg, "bvneg"},
    {Op::BvAdd, "bvadd"},       {Op::BvSub, "bvsub"},
    {Op::BvMul, "bvmul"},       {Op::BvShl, "bvshl"},
    {Op::BvLshr, "bvlshr"},     {Op::BvUlt, "bvult"},
    {Op::BvUle, "bvule"},       {Op::BvUgt, "bvugt"},
    {Op::BvUge, "bvuge"},       {Op::BvSlt, "bvslt"},
    {Op::BvSle, "bvsle"},       {Op::BvSgt, "bvsgt"},
    {Op::BvSge, "bvsge"},       {Op::FpFromBv, "fp"},
    {Op::FpEq, "fp.eq"},        {Op::FpLt, "fp.lt"},
    {Op::FpLeq, "fp.leq"},      {Op::FpGt, "fp.gt"},
    {Op::FpGeq, "fp.geq"},      {Op::FpIsNaN, "fp.isNaN"},
    {Op::FpIsInfinite, "fp.isInfinite"}, {Op::FpIsZero, "fp.isZero"},
    {Op::FpIsNormal, "fp.isNormal"},     {Op::FpIsSubnormal, "fp.isSubnormal"},
    {Op::FpIsNegative, "fp.isNegative"}, {Op::FpIsPositive, "fp.isPositive"},
    {Op::FpNeg, "fp.neg"},      {Op::FpAbs, "fp.abs"},
    {Op::FpMin, "fp.min"},      {Op::FpMax, "fp.max"},
};

}  // namespace

const char* op_name(Op op) {
  for (const auto& info : kOps)
    if (info.op == op) return info.name;
  return "?";
}

std::optional<Op> op_from_name(const std::string& name) {
  for (const auto& info : kOps) {
    if (info.op == Op::Var || info.op == Op::True || info.op == Op::False ||
        info.op == Op::BvConst || info.op == Op::FpConst)
      continue;
    if (name == info.name) return info.op;
  }
  return std::nullopt;
}

TermRef mk_var(const std::string& name, Sort sort) {
  return std::make_shared<const Term>(Term{Op::Var, sort, {}, {}, name, {}, {}});
}

TermRef mk_bool(bool value) {
  static const TermRef t = std::make_shared<const Term>(
      Term{Op::True, Sort::boolean(), {}, {}, {}, {}, {}});
  static const TermRef f = std::make_shared<const Term>(
      Term{Op::False, Sort::boolean(), {}, {}, {}, {}, {}});
  return value ? t : f;
}

TermRef mk_bv(const BvConst& c) {
  return std::make_shared<const Term>(
      Term{Op::BvConst, Sort::bitvec(c.width()), {}, {}, {}, c.bits(), {}});
}

TermRef mk_fp(const FpBits& c) {
  return std::make_shared<const Term>(
      Term{Op::FpConst, Sort::floating(c.sort()), {}, {}, {}, c.bits(), {}});
}

namespace {

[[noreturn]] void sort_error(Op op, const std::vector<TermRef>& args,
                             const std::string& why) {
  std::string expr = std::string("(") + op_name(op);
  for (const auto& a : args) expr += " " + to_smt2(a);
  expr += ")";
  throw SortError("ill-sorted " + expr + ": " + why);
}

Sort check_sort(Op op, const std::vector<TermRef>& args,
                const std::vector<unsigned>& indices) {
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      sort_error(op, args, "wrong number of arguments");
  };
  auto all_bool = [&] {
    for (const auto& a : args)
      if (!a->sort.is_bool()) sort_error(op, args, "expected Bool arguments");
  };
  auto same_bv = [&] {
    for (const auto& a : args)
      if (!a->sort.is_bv() || !(a->sort == args[0]->sort))
        sort_error(op, args, "expected bit-vectors of equal width");
  };
  auto same_fp = [&] {
    for (const auto& a : args)
      if (!a->sort.is_fp() || !(a->sort == args[0]->sort))
        sort_error(op, args, "expected floating-points of equal sort");
  };
  const std::size_t many = static_cast<std::size_t>(-1);

  switch (op) {
    case Op::Not: arity(1, 1); all_bool(); return Sort::boolean();
    case Op::And:
    case Op::Or: arity(1, many); all_bool(); return Sort::boolean();
    case Op::Xor:
    case Op::Implies: arity(2, 2); all_bool(); return Sort::boolean();
    case Op::Ite:
      arity(3, 3);
      if (!args[0]->sort.is_bool()) sort_error(op, args, "condition must be Bool");
      if (!(args[1]->sort == args[2]->sort)) sort_error(op, args, "branch sorts differ");
      return args[1]->sort;
    case Op::Eq:
      arity(2, 2);
      if (!(args[0]->sort == args[1]->sort)) sort_error(op, args, "operand sorts differ");
      return Sort::boolean();
    case Op::Concat:
      arity(2, 2);
      for (const auto& a : args)
        if (!a->sort.is_bv()) sort_error(op, args, "expected bit-vectors");
      return Sort::bitvec(args[0]->sort.width() + args[1]->sort.width());
    case Op::Extract: {
      arity(1, 1);
      if (!args[0]->sort.is_bv()) sort_error(op, args, "expected a bit-vector");
      if (indices.size() != 2 || indices[0] < indices[1] ||
          indices[0] >= args[0]->sort.width())
        sort_error(op, args, "bad extract indices");
      return Sort::bitvec(indices[0] - indices[1] + 1);
    }
    case Op::BvNot:
    case Op::BvNeg: arity(1, 1); same_bv(); return args[0]->sort;
    case Op::BvAnd: case Op::BvOr: case Op::BvXor: case Op::BvXnor:
    case Op::BvAdd: case Op::BvSub: case Op::BvMul: case Op::BvShl:
    case Op::BvLshr:
      arity(2, 2); same_bv(); return args[0]->sort;
    case Op::BvUlt: case Op::BvUle: case Op::BvUgt: case Op::BvUge:
    case Op::BvSlt: case Op::BvSle: case Op::BvSgt: case Op::BvSge:
      arity(2, 2); same_bv(); return Sort::boolean();
    case Op::FpFromBv: {
      arity(3, 3);
      for (const auto& a : args)
        if (!a->sort.is_bv()) sort_error(op, args, "expected bit-vector fields");
      if (args[0]->sort.width() != 1) sort_error(op, args, "sign field must be 1 bit");
      const unsigned e = args[1]->sort.width();
      const unsigned s = args[2]->sort.width() + 1;
      if (e < 2) sort_error(op, args, "exponent field needs at least 2 bits");
      return Sort::floating(FpSort(e, s));
    }
    case Op::FpEq: case Op::FpLt: case Op::FpLeq: case Op::FpGt: case Op::FpGeq:
      arity(2, 2); same_fp(); return Sort::boolean();
    case Op::FpIsNaN: case Op::FpIsInfinite: case Op::FpIsZero:
    case Op::FpIsNormal: case Op::FpIsSubnormal: case Op::FpIsNegative:
    case Op::FpIsPositive:
      arity(1, 1); same_fp(); return Sort::boolean();
    case Op::FpNeg:
    case Op::FpAbs: arity(1, 1); same_fp(); return args[0]->sort;
    case Op::FpMin:
    case Op::FpMax: arity(2, 2); same_fp(); return args[0]->sort;
    case Op::Var: case Op::True: case Op::False: case Op::BvConst:
    case Op::FpConst:
      break;
  }
  sort_error(op, args, "not an application operator");
}

}  // namespace

TermRef mk_app(Op op, std::vector<TermRef> args, std::vector<unsigned> indices,
               SourceLoc loc) {
  Sort sort = check_sort(op, args, indices);
  return std::make_shared<const Term>(
      Term{op, sort, std::move(args), std::move(indices), {}, {}, loc});
}

std::string quote_symbol(const std::string& name) {
  const auto simple_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) ||
           std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
  };
  const bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) &&
                      std::all_of(name.begin(), name.end(), simple_char);
  return simple ? name : "|" + name + "|";
}

namespace {

void print(const TermRef& t, std::ostream& os) {
  switch (t->op) {
    case Op::Var: os << quote_symbol(t->name); return;
    case Op::True: os << "true"; return;
    case Op::False: os << "false"; return;
    case Op::BvConst: os << format_bv_literal(t->bits); return;
    case Op::FpConst: {
      const unsigned e = t->sort.fp_sort().ebits;
      os << "(fp " << format_bv_literal(Bits(t->bits.begin(), t->bits.begin() + 1))
         << ' '
         << format_bv_literal(Bits(t->bits.begin() + 1, t->bits.begin() + 1 + e))
         << ' ' << format_bv_literal(Bits(t->bits.begin() + 1 + e, t->bits.end()))
         << ')';
      return;
    }
    case Op::Extract:
      os << "((_ extract " << t->indices[0] << ' ' << t->indices[1] << ") ";
      print(t->args[0], os);
      os << ')';
      return;
    default: break;
  }
  os << '(' << op_name(t->op);
  for (const auto& a : t->args) {
    os << ' ';
    print(a, os);
  }
  os << ')';
}

}  // namespace

std::string to_smt2(const TermRef& t) {
  std::ostringstream os;
  print(t, os);
  return os.str();
}

bool same_term(const TermRef& a, const TermRef& b) {
  if (a == b) return true;
  if (a->op != b->op || !(a->sort == b->sort) || a->name != b->name ||
      a->bits != b->bits || a->indices != b->indices ||
      a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_term(a->args[i], b->args[i])) return false;
  return true;
}

void collect_vars(const TermRef& t,
                  std::vector<std::pair<std::string, Sort>>& out) {
  std::set<const Term*> visited;
  std::function<void(const TermRef&)> walk = [&](const TermRef& n) {
    if (!visited.insert(n.get()).second) return;
    if (n->op == Op::Var) {
      const bool known = std::any_of(out.begin(), out.end(), [&](const auto& p) {
        return p.first == n->name;
      });
      if (!known) out.emplace_back(n->name, n->sort);
    }
    for (const auto& a : n->args) walk(a);
  };
  walk(t);
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Assignment& env) : env_(env) {}

  Bits eval(const TermRef& t) {
    if (auto it = memo_.find(t.get()); it != memo_.end()) return it->second;
    Bits r = compute(*t);
    memo_.emplace(t.get(), r);
    return r;
  }

 private:
  static Bits of(bool b) { return Bits{static_cast<std::uint8_t>(b ? 1 : 0)}; }

  bool b(const TermRef& t) { return eval(t)[0] != 0; }
  BigInt u(const TermRef& t) {
    const Bits v = eval(t);
    return bits_to_unsigned(v, 0, v.size());
  }
  BigInt s(const TermRef& t) {
    return bv_value(BvConst(eval(t)), Signedness::Signed);
  }
  FpBits f(const TermRef& t) { return FpBits(t->sort.fp_sort(), eval(t)); }
  Bits wrap(const BigInt& v, unsigned w) {
    return BvConst::from_value(BvSort(w), v).bits();
  }

  Bits compute(const Term& t) {
    const auto& a = t.args;
    const unsigned w = t.sort.width();
    switch (t.op) {
      case Op::Var: {
        auto it = env_.find(t.name);
        if (it == env_.end()) throw Error("evaluate: unassigned variable " + t.name);
        if (it->second.size() != w)
          throw Error("evaluate: wrong width for variable " + t.name);
        return it->second;
      }
      case Op::True: return of(true);
      case Op::False: return of(false);
      case Op::BvConst:
      case Op::FpConst: return t.bits;
      case Op::Not: return of(!b(a[0]));
      case Op::And: {
        bool r = true;
        for (const auto& x : a) r = b(x) && r;
        return of(r);
      }
      case Op::Or: {
        bool r = false;
        for (const auto& x : a) r = b(x) || r;
        return of(r);
      }
      case Op::Xor: return of(b(a[0]) != b(a[1]));
      case Op::Implies: return of(!b(a[0]) || b(a[1]));
      case Op::Ite: return b(a[0]) ? eval(a[1]) : eval(a[2]);
      case Op::Eq: return of(eval(a[0]) == eval(a[1]));
      case Op::Concat: {
        Bits r = eval(a[0]);
        const Bits lo = eval(a[1]);
        r.insert(r.end(), lo.begin(), lo.end());
        return r;
      }
      case Op::Extract: {
        const Bits v = eval(a[0]);
        const unsigned n = static_cast<unsigned>(v.size());
        // SMT-LIB indices count from the LSB.
        return Bits(v.begin() + (n - 1 - t.indices[0]),
                    v.begin() + (n - t.indices[1]));
      }
      case Op::BvNot: {
        Bits v = eval(a[0]);
        for (auto& x : v) x ^= 1;
        return v;
      }
      case Op::BvAnd: case Op::BvOr: case Op::BvXor: case Op::BvXnor: {
        const Bits x = eval(a[0]), y = eval(a[1]);
        Bits r(w);
        for (unsigned i = 0; i < w; ++i) {
          switch (t.op) {
            case Op::BvAnd: r[i] = x[i] & y[i]; break;
            case Op::BvOr: r[i] = x[i] | y[i]; break;
            case Op::BvXor: r[i] = x[i] ^ y[i]; break;
            default: r[i] = (x[i] ^ y[i]) ^ 1; break;
          }
        }
        return r;
      }
      case Op::BvNeg: return wrap(-u(a[0]), w);
      case Op::BvAdd: return wrap(u(a[0]) + u(a[1]), w);
      case Op::BvSub: return wrap(u(a[0]) - u(a[1]), w);
      case Op::BvMul: return wrap(u(a[0]) * u(a[1]), w);
      case Op::BvShl: {
        const BigInt sh = u(a[1]);
        if (sh >= w) return Bits(w, 0);
        return wrap(u(a[0]) << sh.convert_to<unsigned>(), w);
      }
      case Op::BvLshr: {
        const BigInt sh = u(a[1]);
        if (sh >= w) return Bits(w, 0);
        return wrap(u(a[0]) >> sh.convert_to<unsigned>(), w);
      }
      case Op::BvUlt: return of(u(a[0]) < u(a[1]));
      case Op::BvUle: return of(u(a[0]) <= u(a[1]));
      case Op::BvUgt: return of(u(a[0]) > u(a[1]));
      case Op::BvUge: return of(u(a[0]) >= u(a[1]));
      case Op::BvSlt: return of(s(a[0]) < s(a[1]));
      case Op::BvSle: return of(s(a[0]) <= s(a[1]));
      case Op::BvSgt: return of(s(a[0]) > s(a[1]));
      case Op::BvSge: return of(s(a[0]) >= s(a[1]));
      case Op::FpFromBv: {
        Bits r = eval(a[0]);
        for (int i = 1; i < 3; ++i) {
          const Bits v = eval(a[i]);
          r.insert(r.end(), v.begin(), v.end());
        }
        return r;
      }
      case Op::FpEq: return of(fp_eq(f(a[0]), f(a[1])));
      case Op::FpLt: return of(fp_lt(f(a[0]), f(a[1])));
      case Op::FpLeq: return of(fp_leq(f(a[0]), f(a[1])));
      case Op::FpGt: return of(fp_gt(f(a[0]), f(a[1])));
      case Op::FpGeq: return of(fp_geq(f(a[0]), f(a[1])));
      case Op::FpIsNaN: return of(fp_classify(f(a[0])) == FpClass::NaN);
      case Op::FpIsInfinite: {
        const auto c = fp_classify(f(a[0]));
        return of(c == FpClass::PosInf || c == FpClass::NegInf);
      }
      case Op::FpIsZero: {
        const auto c = fp_classify(f(a[0]));
        return of(c == FpClass::PosZero || c == FpClass::NegZero);
      }
      case Op::FpIsNormal: return of(fp_classify(f(a[0])) == FpClass::Normal);
      case Op::FpIsSubnormal: return of(fp_classify(f(a[0])) == FpClass::Subnormal);
      case Op::FpIsNegative: {
        const FpBits x = f(a[0]);
        return of(fp_classify(x) != FpClass::NaN && x.sign());
      }
      case Op::FpIsPositive: {
        const FpBits x = f(a[0]);
        return of(fp_classify(x) != FpClass::NaN && !x.sign());
      }
      case Op::FpNeg: {
        Bits v = eval(a[0]);
        v[0] ^= 1;
        return v;
      }
      case Op::FpAbs: {
        Bits v = eval(a[0]);
        v[0] = 0;
        return v;
      }
      case Op::FpMin:
      case Op::FpMax: return min_max(t.op == Op::FpMin, f(a[0]), f(a[1]));
    }
    throw Error("evaluate: unhandled operator");
  }

  // NaN operands are ignored; among equal zeros min picks -0 and max +0.
  static Bits min_max(bool is_min, const FpBits& x, const FpBits& y) {
    const bool x_nan = fp_classify(x) == FpClass::NaN;
    const bool y_nan = fp_classify(y) == FpClass::NaN;
    if (x_nan) return y.bits();
    if (y_nan) return x.bits();
    if (is_min ? fp_lt(y, x) : fp_lt(x, y)) return y.bits();
    if (fp_eq(x, y) && x.bits() != y.bits()) {
      // Only the two zeros are fp_eq with different patterns.
      Bits r = x.bits();
      r[0] = is_min ? (x.sign() || y.sign()) : (x.sign() && y.sign());
      return r;
    }
    return x.bits();
  }

  const Assignment& env_;
  std::unordered_map<const Term*, Bits> memo_;
};

}  // namespace

Bits evaluate(const TermRef& t, const Assignment& env) {
  return Evaluator(env).eval(t);
}

bool evaluate_bool(const TermRef& t, const Assignment& env) {
  if (!t->sort.is_bool()) throw SortError("evaluate_bool on non-Bool term");
  return evaluate(t, env)[0] != 0;
}

}  // namespace omtbits
