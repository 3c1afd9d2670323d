#pragma once

// Command-line front end. `run` is kept separate from main() so the tests can
// drive it in-process with captured streams.
//
//   balchain seq <kind> --count N [--a A]
//   balchain chain <family> --n N [--a A] [--q num/den]
//   balchain solve [<family> --n N ... | --matrix-file PATH] --method exact|power|simulate
//   balchain verify (<family> --n N | --all --max-n N | --beta-powers --max-n N)
//   balchain limit (--sizes 5,10,20 | --ratio --max-n N)
//
// Every subcommand takes --format {csv,json} and --out PATH. Exit codes:
// 0 success, 2 parameter error, 3 verification failure, 4 non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "balchain/balchain.hpp"

namespace balchain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitNonConvergence = 4;

namespace detail {

using io::json;

struct Common {
  std::string format = "csv";
  std::string out_path;

  bool json_output() const { return format == "json"; }
};

struct FamilyArgs {
  std::string name;
  std::size_t n = 0;
  std::optional<std::string> a;
  std::optional<std::string> q;

  ChainFamily family() const {
    std::optional<Integer> a_value;
    std::optional<Rational> q_value;
    if (a) a_value = parse_integer(*a);
    if (q) q_value = parse_rational(*q);
    return make_family(name, n, a_value, q_value);
  }
};

inline void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", common.out_path, "write results to PATH instead of standard output");
}

inline void add_family(CLI::App* sub, FamilyArgs& args, bool required) {
  auto* name = sub->add_option("family", args.name, "chain family");
  if (required) name->required();
  sub->add_option("--n", args.n, "number of states");
  sub->add_option("--a", args.a, "balancing-like coefficient A");
  sub->add_option("--q", args.q, "laziness parameter q as num/den");
}

inline std::string error_json(int code, const std::string& type, const std::string& message,
                              const json& extra = json::object()) {
  json body = {{"code", code}, {"type", type}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  return json{{"error", body}}.dump();
}

inline std::string dump(const json& doc) { return doc.dump() + "\n"; }

inline std::string run_seq(const std::string& kind_name, std::size_t count, const std::optional<std::string>& a,
                           const Common& common) {
  SequenceKind k = kind::Balancing{};
  if (kind_name == "balancing") k = kind::Balancing{};
  else if (kind_name == "lucas-balancing") k = kind::LucasBalancing{};
  else if (kind_name == "cobalancing") k = kind::Cobalancing{};
  else if (kind_name == "lucas-cobalancing") k = kind::LucasCobalancing{};
  else if (kind_name == "pell") k = kind::Pell{};
  else if (kind_name == "balancing-like") {
    if (!a) throw ParameterError("balancing-like requires --a");
    k = kind::BalancingLike{parse_integer(*a)};
  } else {
    throw ParameterError("unknown sequence kind '" + kind_name + "'");
  }
  const auto terms = sequence(k, count);
  if (common.json_output()) {
    json arr = json::array();
    for (const auto& t : terms) arr.push_back(to_string(t));
    return dump(arr);
  }
  std::string out;
  for (const auto& t : terms) out += to_string(t) + "\n";
  return out;
}

inline std::string run_chain(const FamilyArgs& args, const Common& common) {
  const ChainFamily f = args.family();
  const auto m = build(f);
  if (const auto report = validate(m); !report.ok()) throw SolverError("built matrix failed validation: " + report.summary());
  return common.json_output() ? dump(io::matrix_json(m, f)) : io::matrix_csv(m);
}

struct SolveArgs {
  std::string method = "exact";
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t start = 0;
  std::string matrix_file;
};

inline StochasticMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open matrix file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw ParameterError("invalid matrix JSON: " + std::string(e.what()));
    }
    return io::matrix_from_json(doc);
  }
  return io::matrix_from_csv(text);
}

inline std::string run_solve(const FamilyArgs& fam, const SolveArgs& args, const Common& common) {
  StochasticMatrix m;
  if (!args.matrix_file.empty()) {
    if (!fam.name.empty()) throw ParameterError("give either a family or --matrix-file, not both");
    m = load_matrix(args.matrix_file);
  } else {
    if (fam.name.empty()) throw ParameterError("solve needs a family or --matrix-file");
    m = build(fam.family());
  }
  if (args.method == "exact") {
    const auto pi = solve_exact(m);
    return common.json_output() ? dump(io::exact_vector_json(pi)) : io::exact_vector_csv(pi);
  }
  if (args.method == "power") {
    const auto result = power_iteration(m, args.tol, args.max_iter);
    if (common.json_output()) {
      json doc = io::approx_vector_json(result.probs, args.tol);
      doc["iterations"] = result.iterations;
      return dump(doc);
    }
    return io::approx_vector_csv(result.probs);
  }
  // simulate
  const auto sim = simulate(m, args.steps, args.seed, args.start);
  if (common.json_output()) {
    json doc = io::approx_vector_json(sim.empirical, 0);
    doc.erase("tol");
    doc["steps"] = sim.steps;
    doc["seed"] = sim.seed;
    doc["generator"] = sim.generator;
    doc["visits"] = sim.visits;
    return dump(doc);
  }
  return io::approx_vector_csv(sim.empirical);
}

struct VerifyArgs {
  bool all = false;
  bool beta_powers = false;
  std::size_t max_n = 25;
};

/// Returns the rendered output and whether every check passed.
inline std::pair<std::string, bool> run_verify(const FamilyArgs& fam, const VerifyArgs& args, const Common& common) {
  if (args.beta_powers) {
    if (args.max_n < 1) throw ParameterError("--max-n must be >= 1");
    bool ok = true;
    json rows = json::array();
    std::string csv = "n,holds\n";
    for (std::size_t n = 1; n <= args.max_n; ++n) {
      const bool holds = beta_power_identity(n);
      ok = ok && holds;
      rows.push_back({{"n", n}, {"holds", holds}});
      csv += std::to_string(n) + "," + (holds ? "true" : "false") + "\n";
    }
    return {common.json_output() ? dump(rows) : csv, ok};
  }

  std::vector<ChainFamily> families;
  if (args.all) {
    if (!fam.name.empty()) throw ParameterError("--all does not take a family");
    if (args.max_n < 3) throw ParameterError("--max-n must be >= 3");
    families = suite_families(args.max_n);
  } else {
    if (fam.name.empty()) throw ParameterError("verify needs a family, --all or --beta-powers");
    families.push_back(fam.family());
    check_parameters(families.back());
  }
  std::vector<VerificationReport> reports;
  reports.reserve(families.size());
  bool ok = true;
  for (const auto& f : families) {
    reports.push_back(verify_family(f));
    ok = ok && reports.back().exact_match;
  }
  if (common.json_output()) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(io::report_json(r));
    return {dump(arr), ok};
  }
  return {io::summary_csv(reports), ok};
}

inline std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const Integer v = parse_integer(item);
    if (v < 0) throw ParameterError("sizes must be nonnegative");
    sizes.push_back(v.convert_to<std::size_t>());
  }
  return sizes;
}

inline std::string run_limit(const std::string& sizes_text, bool ratio, std::size_t max_n, const Common& common) {
  std::vector<std::pair<std::size_t, double>> rows;
  if (ratio) {
    if (max_n < 2) throw ParameterError("--max-n must be >= 2");
    for (std::size_t n = 2; n <= max_n; ++n) rows.emplace_back(n, to_double(silver_ratio_gap(n)));
  } else {
    if (sizes_text.empty()) throw ParameterError("limit needs --sizes or --ratio");
    for (const auto& row : truncation_convergence(parse_sizes(sizes_text))) rows.emplace_back(row.n, row.gap);
  }
  if (common.json_output()) {
    json arr = json::array();
    for (const auto& [n, gap] : rows) arr.push_back({{"n", n}, {"gap", gap}});
    return dump(arr);
  }
  std::string out = "n,gap\n";
  for (const auto& [n, gap] : rows) out += std::to_string(n) + "," + format_double(gap) + "\n";
  return out;
}

}  // namespace detail

/// Parses and executes one command line. Results go to `out` (or --out),
/// diagnostics and error objects to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Balancing-number Markov chains: sequences, exact stationary vectors and identity checks", "balchain"};
  app.require_subcommand(1);

  Common common;

  auto* seq_cmd = app.add_subcommand("seq", "print a balancing-family sequence");
  std::string seq_kind;
  std::size_t seq_count = 10;
  std::optional<std::string> seq_a;
  seq_cmd->add_option("kind", seq_kind, "balancing, lucas-balancing, cobalancing, lucas-cobalancing, pell, balancing-like")
      ->required();
  seq_cmd->add_option("--count", seq_count, "number of terms");
  seq_cmd->add_option("--a", seq_a, "coefficient A for balancing-like");
  add_common(seq_cmd, common);

  auto* chain_cmd = app.add_subcommand("chain", "print the exact transition matrix of a chain family");
  FamilyArgs chain_args;
  add_family(chain_cmd, chain_args, true);
  add_common(chain_cmd, common);

  auto* solve_cmd = app.add_subcommand("solve", "compute a stationary distribution");
  FamilyArgs solve_family;
  SolveArgs solve_args;
  add_family(solve_cmd, solve_family, false);
  solve_cmd->add_option("--method", solve_args.method, "exact, power or simulate")
      ->check(CLI::IsMember({"exact", "power", "simulate"}));
  solve_cmd->add_option("--tol", solve_args.tol, "power iteration L1 tolerance");
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "power iteration limit");
  solve_cmd->add_option("--steps", solve_args.steps, "simulation steps");
  solve_cmd->add_option("--seed", solve_args.seed, "simulation seed");
  solve_cmd->add_option("--start", solve_args.start, "simulation start state");
  solve_cmd->add_option("--matrix-file", solve_args.matrix_file, "matrix as JSON (chain --format json) or CSV");
  add_common(solve_cmd, common);

  auto* verify_cmd = app.add_subcommand("verify", "check closed forms against the exact solver");
  FamilyArgs verify_family_args;
  VerifyArgs verify_args;
  add_family(verify_cmd, verify_family_args, false);
  verify_cmd->add_flag("--all", verify_args.all, "run the whole family suite for n = 3..max-n");
  verify_cmd->add_flag("--beta-powers", verify_args.beta_powers,
                       "check beta^{n+1} = beta B_{n+1} - B_n for n = 1..max-n");
  verify_cmd->add_option("--max-n", verify_args.max_n, "largest size or index");
  add_common(verify_cmd, common);

  auto* limit_cmd = app.add_subcommand("limit", "convergence of truncated chains to the infinite chain");
  std::string limit_sizes;
  bool limit_ratio = false;
  std::size_t limit_max_n = 10;
  limit_cmd->add_option("--sizes", limit_sizes, "comma-separated truncation sizes");
  limit_cmd->add_flag("--ratio", limit_ratio, "report |B_{n-1}/B_n - beta| for n = 2..max-n");
  limit_cmd->add_option("--max-n", limit_max_n, "largest n for --ratio");
  add_common(limit_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json(kExitParameter, "parameter_error", e.what()) << "\n";
    return kExitParameter;
  }

  int status = kExitOk;
  std::string result;
  try {
    if (*seq_cmd) {
      result = run_seq(seq_kind, seq_count, seq_a, common);
    } else if (*chain_cmd) {
      result = run_chain(chain_args, common);
    } else if (*solve_cmd) {
      result = run_solve(solve_family, solve_args, common);
    } else if (*verify_cmd) {
      auto [text, ok] = run_verify(verify_family_args, verify_args, common);
      result = std::move(text);
      if (!ok) {
        status = kExitVerification;
        err << error_json(kExitVerification, "verification_failure", "one or more checks failed") << "\n";
      }
    } else if (*limit_cmd) {
      result = run_limit(limit_sizes, limit_ratio, limit_max_n, common);
    }
  } catch (const ConvergenceError& e) {
    err << error_json(kExitNonConvergence, "non_convergence", e.what(),
                      {{"iterations", e.iterations()}, {"last_iterate", e.last_iterate()}})
        << "\n";
    return kExitNonConvergence;
  } catch (const ParameterError& e) {
    err << error_json(kExitParameter, "parameter_error", e.what()) << "\n";
    return kExitParameter;
  } catch (const SolverError& e) {
    err << error_json(kExitParameter, "solver_error", e.what()) << "\n";
    return kExitParameter;
  }

  if (!common.out_path.empty()) {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) {
      err << error_json(kExitParameter, "parameter_error", "cannot write '" + common.out_path + "'") << "\n";
      return kExitParameter;
    }
    file << result;
  } else {
    out << result;
  }
  return status;
}

}  // namespace balchain::cli
