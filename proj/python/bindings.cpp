#include "omtbits/engines.h"
#include "omtbits/error.h"
#include "omtbits/fp.h"
#include "omtbits/oracle.h"
#include "omtbits/smtlib.h"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace omtbits;

namespace {

Bits parse_bits(const std::string& s) {
  Bits out;
  for (char c : s) {
    if (c == '0' || c == '1') out.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != ' ' && c != '_') throw Error(std::string("invalid bit character '") + c + "'");
  }
  return out;
}

std::string show_bits(const Bits& b) {
  std::string s;
  for (auto x : b) s += x ? '1' : '0';
  return s;
}

EngineConfig make_config(const std::optional<std::string>& engine, const Problem& problem,
                         bool bp, bool pi, bool so, std::pair<long, long> rho,
                         std::optional<double> timeout) {
  EngineConfig c;
  if (engine) {
    const auto e = parse_engine(*engine);
    if (!e) throw Error("unknown engine '" + *engine + "'");
    c.engine = *e;
  } else {
    c.engine = problem.objective && problem.objective->sort.is_bv() ? EngineKind::ObvBs
                                                                    : EngineKind::OfpBs;
  }
  c.enhancements = {bp, pi, so};
  if (rho.second == 0) throw Error("rho denominator is zero");
  c.rho = Rational(BigInt(rho.first), BigInt(rho.second));
  if (timeout) c.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(*timeout * 1000));
  c.validate();
  return c;
}

py::dict result_dict(const OptResult& r) {
  py::dict d;
  d["status"] = to_string(r.status);
  d["partial"] = r.partial;
  d["value"] = r.value_string();
  d["bits"] = r.optimum_bits ? py::cast(show_bits(*r.optimum_bits)) : py::none();
  d["smt_calls"] = r.stats.smt_calls;
  d["wall_ms"] = r.stats.wall_ms;
  py::list traj;
  for (const auto& rec : r.trajectory.records) {
    py::dict t;
    t["bit"] = rec.bit;
    t["target"] = rec.target;
    t["satisfiable"] = rec.satisfiable;
    t["solver_called"] = rec.solver_called;
    t["attractor"] = show_bits(rec.attractor);
    traj.append(t);
  }
  d["trajectory"] = traj;
  py::dict model;
  for (const auto& [name, bits] : r.model) model[py::str(name)] = show_bits(bits);
  d["model"] = model;
  return d;
}

Problem load(const std::string& text) { return problem_of(parse_script(text)); }

}  // namespace

PYBIND11_MODULE(_omtbits, m) {
  m.doc() = "Bit-level optimization over floating-point and bit-vector objectives";

  auto base = py::register_exception<Error>(m, "OmtError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def(
      "optimize",
      [](const std::string& text, std::optional<std::string> engine, bool bp, bool pi, bool so,
         std::pair<long, long> rho, std::optional<double> timeout) {
        const Problem p = load(text);
        const EngineConfig c = make_config(engine, p, bp, pi, so, rho, timeout);
        OptResult r;
        {
          py::gil_scoped_release release;
          r = optimize(p, c);
        }
        return result_dict(r);
      },
      py::arg("script"), py::arg("engine") = py::none(), py::arg("bp") = false,
      py::arg("pi") = false, py::arg("so") = false, py::arg("rho") = std::pair<long, long>{1, 2},
      py::arg("timeout") = py::none(),
      "Optimizes the objective of an SMT-LIB script and returns a result dict.");

  m.def(
      "run_script",
      [](const std::string& text, std::optional<std::string> engine, bool bp, bool pi, bool so,
         std::pair<long, long> rho, std::optional<double> timeout, bool stats) {
        const Script s = parse_script(text);
        InterpretOptions opts;
        opts.config = make_config(engine, problem_of(s), bp, pi, so, rho, timeout);
        opts.stats = stats;
        std::ostringstream os;
        interpret(s, opts, os);
        return os.str();
      },
      py::arg("script"), py::arg("engine") = py::none(), py::arg("bp") = false,
      py::arg("pi") = false, py::arg("so") = false, py::arg("rho") = std::pair<long, long>{1, 2},
      py::arg("timeout") = py::none(), py::arg("stats") = false,
      "Runs every command of a script and returns the textual output.");

  m.def(
      "brute_force",
      [](const std::string& text, unsigned max_width) {
        const OracleResult r = brute_force_opt(load(text), max_width);
        py::dict d;
        d["status"] = to_string(r.status);
        d["bits"] = r.bits ? py::cast(show_bits(*r.bits)) : py::none();
        d["candidates_tested"] = r.candidates_tested;
        return d;
      },
      py::arg("script"), py::arg("max_width") = 16);

  m.def(
      "verify_optimum",
      [](const std::string& text, const std::string& bits) {
        return verify_optimum(load(text), parse_bits(bits));
      },
      py::arg("script"), py::arg("bits"));

  m.def(
      "fp_value",
      [](unsigned e, unsigned s, const std::string& bits) {
        return fp_value(FpBits(FpSort(e, s), parse_bits(bits))).to_string();
      },
      py::arg("ebits"), py::arg("sbits"), py::arg("bits"));

  m.def(
      "fp_class",
      [](unsigned e, unsigned s, const std::string& bits) {
        return std::string(to_string(fp_classify(FpBits(FpSort(e, s), parse_bits(bits)))));
      },
      py::arg("ebits"), py::arg("sbits"), py::arg("bits"));

  m.def(
      "dynamic_attractor",
      [](unsigned e, unsigned s, const std::string& prefix, bool maximize) {
        const FpSort sort(e, s);
        const auto a = update_dynamic_attractor(
            sort, PrefixAssignment(sort.width(), parse_bits(prefix)),
            maximize ? Direction::Maximize : Direction::Minimize);
        return show_bits(a.pattern.bits());
      },
      py::arg("ebits"), py::arg("sbits"), py::arg("prefix"), py::arg("maximize") = false);

  m.def(
      "generate",
      [](std::uint64_t seed, const std::string& sort, unsigned count, const std::string& profile) {
        std::vector<std::pair<std::string, std::string>> out;
        for (auto& inst : generate_instances(seed, parse_sort_spec(sort), count, profile))
          out.emplace_back(std::move(inst.name), std::move(inst.text));
        return out;
      },
      py::arg("seed"), py::arg("sort"), py::arg("count"), py::arg("profile") = "mixed");

  m.def(
      "bench",
      [](const std::vector<std::filesystem::path>& files, const std::string& configs,
         unsigned jobs, std::optional<double> timeout) {
        BenchOptions opts;
        opts.instances = files;
        opts.configs = parse_configs(configs);
        opts.jobs = jobs;
        if (timeout)
          opts.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(*timeout * 1000));
        std::vector<BenchRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_bench(opts);
        }
        std::ostringstream os;
        write_csv(os, rows);
        return os.str();
      },
      py::arg("files"), py::arg("configs") = "ofp-bs,ofp-bs+pi,omt-lin,omt-bin",
      py::arg("jobs") = 1, py::arg("timeout") = py::none(),
      "Runs the benchmark and returns the CSV text.");
}
