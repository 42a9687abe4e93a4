// Command-line front end: norms, witnesses, experiments, verification
// suites and the Kalton-Peck map.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osnorm/osnorm.hpp"

namespace {

using namespace osnorm;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::vector<double> parse_reals(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_real(s));
  return out;
}

// Expands "2..8" into 2,3,...,8; plain integers pass through.
std::vector<int> parse_ns(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& s : items) {
    try {
      if (auto dots = s.find(".."); dots != std::string::npos) {
        const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
      } else {
        out.push_back(std::stoi(s));
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad value for --n: '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-level norms for operator space structures on sequence spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string budget_path;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget_path, "Optimizer budget JSON (default: $OSNORM_BUDGET)");

  auto* norm = app.add_subcommand("norm", "Evaluate a norm interval");
  std::string structure, input;
  norm->add_option("--structure", structure, "Structure spec, e.g. interp:(min:p=2,max:p=2,theta=0.5)")->required();
  norm->add_option("--input", input, "MatrixSeq JSON file ('-' for stdin)")->required();

  auto* wit = app.add_subcommand("witness", "Print a witness as JSON");
  std::string kind;
  int wn = 1;
  wit->add_option("kind", kind, "xn, yn, an or un")->required()->check(CLI::IsMember({"xn", "yn", "an", "un"}));
  wit->add_option("--n", wn, "Size")->required();

  auto* exp = app.add_subcommand("experiment", "Run a named experiment and write CSV");
  std::string exp_name, out_path;
  std::vector<std::string> ns, ps, thetas;
  double c_C = 1.0, c_T = 1.0;
  bool derived = false;
  exp->add_option("name", exp_name, "Experiment name")->required();
  exp->add_option("--n", ns, "Sizes (list or lo..hi)");
  exp->add_option("--p", ps, "Exponents (e.g. 1 4/3 2 4)");
  exp->add_option("--theta", thetas, "Interpolation parameters");
  exp->add_option("--c-C", c_C, "GROWTH54 constant c_C");
  exp->add_option("--c-T", c_T, "GROWTH54 constant c_T");
  exp->add_flag("--derived", derived, "GROWTH48: add derived-space rows for n <= 8");
  exp->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* ver = app.add_subcommand("verify", "Run verification suites; exit 1 on failure");
  std::string suite = "all";
  double tol = 0.02;
  ver->add_option("--suite", suite, "lemmas, ruan, growth or all")
      ->check(CLI::IsMember({"lemmas", "ruan", "growth", "all"}));
  ver->add_option("--tol", tol, "Relative tolerance for optimization-backed checks");

  auto* kp = app.add_subcommand("kp", "Kalton-Peck map");
  std::string op, x_path, y_path, p_text = "2";
  int samples = 100;
  kp->add_option("--op", op, "map, quasinorm or probe")->required()->check(CLI::IsMember({"map", "quasinorm", "probe"}));
  kp->add_option("--x", x_path, "FinSeq JSON file for x");
  kp->add_option("--y", y_path, "FinSeq JSON file for y");
  kp->add_option("--p", p_text, "Exponent");
  kp->add_option("--samples", samples, "Probe samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Budget budget;
    if (budget_path.empty())
      if (const char* env = std::getenv("OSNORM_BUDGET"); env && *env) budget_path = env;
    if (!budget_path.empty()) budget = json_io::budget_from_json(read_file(budget_path));
    budget.seed = seed;

    if (*norm) {
      const Structure s = parse_structure(structure);
      const MatrixSeq x = json_io::matrix_seq_from_json(read_file(input));
      std::cout << json_io::to_json(evaluate(s, x, budget)) << "\n";
    } else if (*wit) {
      if (wn < 1) throw ParameterError("--n must be positive");
      if (kind == "xn") std::cout << json_io::to_json(x_witness(wn)) << "\n";
      else if (kind == "yn") std::cout << json_io::to_json(y_witness(wn)) << "\n";
      else if (kind == "an") std::cout << json_io::to_json(a_witness(wn)) << "\n";
      else std::cout << json_io::to_json(u_witness(wn)) << "\n";
    } else if (*exp) {
      experiments::ExperimentParams params;
      params.ns = parse_ns(ns);
      params.ps = parse_reals(ps);
      params.thetas = parse_reals(thetas);
      params.seed = seed;
      params.budget = budget;
      params.jobs = jobs;
      params.c_C = c_C;
      params.c_T = c_T;
      params.derived_rows = derived;
      write_output(out_path, experiments::to_csv(experiments::run(exp_name, params)));
    } else if (*ver) {
      if (!(tol > 0.0)) throw ParameterError("--tol must be positive");
      verify::Options o;
      o.tol = tol;
      o.seed = seed;
      o.jobs = jobs;
      o.budget = budget;
      bool all_pass = true;
      for (const auto& r : verify::run_suite(suite, o)) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << ": " << r.detail;
        std::cout << "\n";
      }
      return all_pass ? 0 : 1;
    } else if (*kp) {
      const double p = parse_real(p_text);
      if (op == "map") {
        if (x_path.empty()) throw UsageError("--op map needs --x");
        std::cout << json_io::to_json(twist::kp_map(json_io::finseq_from_json(read_file(x_path)), p)) << "\n";
      } else if (op == "quasinorm") {
        const FinSeq x = x_path.empty() ? FinSeq{} : json_io::finseq_from_json(read_file(x_path));
        const FinSeq y = y_path.empty() ? FinSeq{} : json_io::finseq_from_json(read_file(y_path));
        std::cout << format_double(twist::kp_quasinorm(x, y, p)) << "\n";
      } else {
        if (samples < 0) throw ParameterError("--samples must be nonnegative");
        const auto rep = twist::quasilinearity_probe(p, samples, seed, jobs);
        std::cout << "{\"max_ratio\": " << json_io::number(rep.max_ratio)
                  << ", \"max_triple_ratio\": " << json_io::number(rep.max_triple_ratio)
                  << ", \"arg_x\": " << json_io::to_json(rep.arg_x) << ", \"arg_y\": " << json_io::to_json(rep.arg_y)
                  << ", \"samples\": " << rep.samples << ", \"seed\": " << rep.seed << "}\n";
      }
    }
  } catch (const osnorm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
