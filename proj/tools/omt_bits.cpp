#include "omtbits/oracle.h"
#include "omtbits/smtlib.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace omtbits;

namespace {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos)
      return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    const std::string frac = text.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::string whole = text.substr(0, dot);
    return Rational(BigInt((whole.empty() ? "0" : whole) + frac), den);
  } catch (const std::exception&) {
    throw Error("malformed rational '" + text + "'");
  }
}

std::chrono::milliseconds seconds_to_ms(double s) {
  if (s <= 0) throw Error("timeout must be positive");
  return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<fs::path> list_instances(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".smt2") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omt-bits: optimization of bit-vector and floating-point objectives"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve an SMT-LIB script with an objective");
  std::string file, engine_name, rho_text = "1/2", dump_cnf;
  bool bp = false, pi = false, so = false, stats = false;
  double timeout_s = 0;
  solve->add_option("file", file, "SMT-LIB script")->required();
  solve->add_option("--engine", engine_name,
                    "ofp-bs | obv-bs | omt-lin | omt-bin (default: by objective sort)")
      ->check(CLI::IsMember({"ofp-bs", "obv-bs", "omt-lin", "omt-bin"}));
  solve->add_flag("--bp", bp, "branch on objective bits first, MSB first");
  solve->add_flag("--pi", pi, "initialize objective bit phases to the attractor");
  solve->add_flag("--so", so, "restrict --bp/--pi to bits whose direction is settled");
  solve->add_option("--rho", rho_text, "binary-search pivot ratio in (0,1)");
  solve->add_option("--timeout", timeout_s, "seconds");
  solve->add_flag("--stats", stats, "print smt_calls and wall_ms");
  solve->add_option("--dump-cnf", dump_cnf, "write the DIMACS encoding to this path");

  auto* gen = app.add_subcommand("gen", "Generate random instances");
  std::uint64_t seed = 1;
  std::string sort_spec = "(3 5)", profile = "mixed", out_dir;
  unsigned count = 10;
  gen->add_option("--seed", seed);
  gen->add_option("--sort", sort_spec, "\"(e s)\" floating point or \"(w)\" bit-vector");
  gen->add_option("--count", count);
  gen->add_option("--profile", profile, "mixed | nan-heavy | chain");
  gen->add_option("--out", out_dir)->required();

  auto* bench = app.add_subcommand("bench", "Run engine configurations over a directory");
  std::string bench_dir, configs = "ofp-bs,ofp-bs+pi,omt-lin,omt-bin", csv_path;
  unsigned jobs = 1;
  std::uint64_t bench_seed = 1;
  double bench_timeout_s = 10;
  bench->add_option("--dir", bench_dir)->required();
  bench->add_option("--configs", configs, "comma separated, e.g. ofp-bs+pi,omt-bin+bp");
  bench->add_option("--seed", bench_seed,
                    "seed for the default instance set written when --dir has none");
  bench->add_option("--jobs", jobs);
  bench->add_option("--timeout", bench_timeout_s, "seconds per run");
  bench->add_option("--out", csv_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const Script script = parse_script(read_file(file));
      InterpretOptions opts;
      const Problem problem = problem_of(script);
      if (!engine_name.empty()) {
        opts.config.engine = *parse_engine(engine_name);
      } else if (problem.objective) {
        opts.config.engine =
            problem.objective->sort.is_fp() ? EngineKind::OfpBs : EngineKind::ObvBs;
      }
      opts.config.enhancements = {bp, pi, so};
      opts.config.rho = parse_rational(rho_text);
      if (timeout_s > 0) opts.config.timeout = seconds_to_ms(timeout_s);
      opts.config.validate();
      opts.stats = stats;
      if (!dump_cnf.empty()) opts.dump_cnf = dump_cnf;
      interpret(script, opts, std::cout);
    } else if (*gen) {
      const auto instances =
          generate_instances(seed, parse_sort_spec(sort_spec), count, profile);
      write_instances(out_dir, instances);
      std::cout << "wrote " << instances.size() << " instances to " << out_dir << "\n";
    } else if (*bench) {
      BenchOptions opts;
      opts.instances = list_instances(bench_dir);
      if (opts.instances.empty()) {
        write_instances(bench_dir,
                        generate_instances(bench_seed, Sort::floating(FpSort(3, 5)), 20, "mixed"));
        opts.instances = list_instances(bench_dir);
      }
      opts.configs = parse_configs(configs);
      opts.jobs = jobs;
      opts.timeout = seconds_to_ms(bench_timeout_s);
      const auto rows = run_bench(opts);
      std::ofstream csv(csv_path);
      if (!csv) throw Error("cannot write " + csv_path);
      write_csv(csv, rows);
      write_summary(std::cout, rows);
      for (const auto& r : rows)
        if (r.status == "error")
          std::cerr << r.instance << " [" << config_label(r.config) << "]: " << r.detail << "\n";
    }
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
