// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fairalloc/cli.hpp"
#include "support.hpp"

using namespace fairalloc;
namespace fs = std::filesystem;

namespace {

constexpr int kCorpusSize = 300;
constexpr int kTwoAgentInstances = 300;
constexpr int kPointsPerInstance = 50;
constexpr int kSolverPointsPerInstance = 5;
constexpr int kEpsilonInstances = 50;
constexpr int kEpsilonPoints = 20;
constexpr int kMaxEpsilonDimension = 12;
constexpr int kSignInstances = 100;
constexpr std::int64_t kMaxFeasible = 10'000;
constexpr double kMeanSecondsLimit = 5.0;

struct Line {
  int id;
  bool pass;
  std::string detail;
};

struct Tally {
  long checked = 0;
  long failed = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first_failure = what;
  }
  bool pass() const { return failed == 0 && checked > 0; }
  std::string summary(const std::string& unit) const {
    std::string s = std::to_string(checked - failed) + "/" + std::to_string(checked) + " " + unit;
    if (failed > 0) s += "; first failure: " + first_failure;
    return s;
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string label(int index, const Instance& inst) {
  return "instance " + std::to_string(index) + " " + instance_to_json(inst).dump();
}

// n in {2,3}, k in {1,2}, m <= 6 before padding, utilities in [-5,5]
std::vector<Instance> make_corpus(std::mt19937_64& rng) {
  std::vector<Instance> out;
  for (int i = 0; i < kCorpusSize; ++i) out.push_back(test_support::random_instance(rng));
  return out;
}

struct SolveRun {
  int code = -1;
  std::string output;
  double seconds = 0;
};

SolveRun run_solve(const fs::path& instance_file, const fs::path& result_file) {
  const std::string in = instance_file.string();
  const std::string res = result_file.string();
  const char* argv[] = {"fairalloc", "solve", "--mode", "arrangement", "-i", in.c_str(), "-o", res.c_str()};
  std::ostringstream out;
  std::ostringstream err;
  const auto start = std::chrono::steady_clock::now();
  SolveRun run;
  run.code = cli::main(8, argv, out, err);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.output = slurp(result_file);
  return run;
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);
  const fs::path work = fs::temp_directory_path() / "fairalloc_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::mt19937_64 rng(20240601);
  const auto corpus = make_corpus(rng);
  std::vector<NormalizedInstance> normalized;
  for (const auto& inst : corpus) normalized.push_back(normalize(inst));
  std::vector<Line> lines;

  // 1, 4 and 8 share the CLI runs
  Tally clauses;
  Tally face_bound;
  Tally determinism;
  double total_seconds = 0;
  double max_seconds = 0;
  for (int k = 0; k < kCorpusSize; ++k) {
    const auto& inst = normalized[k];
    const fs::path instance_file = work / ("instance_" + std::to_string(k) + ".json");
    std::ofstream(instance_file) << instance_to_json(corpus[k]).dump();
    const auto first = run_solve(instance_file, work / "first.json");
    const auto second = run_solve(instance_file, work / "second.json");
    total_seconds += first.seconds;
    max_seconds = std::max(max_seconds, first.seconds);
    const std::string name = label(k, corpus[k]);
    determinism.check(first.code == 0 && second.code == 0 && first.output == second.output, name);
    if (first.code != 0) {
      clauses.check(false, name + " (solve exit " + std::to_string(first.code) + ")");
      face_bound.check(false, name);
      continue;
    }
    const Json doc = Json::parse(first.output);
    const auto report = check_theorem1(inst, bundle_from_json(inst, doc));
    clauses.check(report.all_pass(), name);
    const auto n = static_cast<std::size_t>(inst.num_agents());
    face_bound.check(doc.at("stats").at("max_free_items").get<std::size_t>() <= n * (n - 1), name);
  }
  const double mean_seconds = total_seconds / kCorpusSize;
  {
    char timing[128];
    std::snprintf(timing, sizeof timing, "; mean %.3f s, max %.3f s per solve (limit: mean < %.1f s)", mean_seconds,
                  max_seconds, kMeanSecondsLimit);
    lines.push_back({1, clauses.pass() && mean_seconds < kMeanSecondsLimit,
                     clauses.summary("instances pass every clause") + timing});
  }

  // 2
  {
    Tally t;
    std::mt19937_64 r(20240602);
    test_support::GeneratorParams p;
    p.agents = {2};
    int made = 0;
    while (made < kTwoAgentInstances) {
      const Instance base = test_support::random_instance(r, p);
      bool pos = false;
      bool neg = false;
      for (const auto& row : base.utilities())
        for (auto x : row) {
          pos = pos || x > 0;
          neg = neg || x < 0;
        }
      if (!pos || !neg) continue;
      const auto inst = normalize(base);
      const Allocation a = derive_ef11(inst, find_witness(inst));
      t.check(is_ef11(inst.padded, a) && is_pareto_optimal_bruteforce(inst.padded, a), label(made, base));
      ++made;
    }
    lines.push_back({2, t.pass(), t.summary("two-agent outputs are EF[1,1] and Pareto-optimal")});
  }

  // 3
  {
    Tally t;
    std::mt19937_64 r(20240603);
    for (int k = 0; k < kCorpusSize; ++k) {
      const auto& inst = normalized[k];
      const int n = inst.num_agents();
      const SlotGraph g = build_slot_graph(inst);
      const ParetoOracle oracle(inst.padded);
      for (int s = 0; s < kPointsPerInstance; ++s) {
        // coarse denominators land on degenerate points more often
        const auto t_point = test_support::random_simplex_point(r, n, s % 2 == 0 ? 4 : 60);
        const auto eval = evaluate_point(inst, g, shrink_weights(t_point, compute_K(inst), n), CostModel::lex());
        bool ok = !eval.optima.empty();
        for (const auto& a : eval.optima) ok = ok && oracle.is_pareto_optimal(a);
        bool weighted_envy_free = false;
        for (int i = 0; i < n; ++i) weighted_envy_free = weighted_envy_free || (t_point[i] > 0 && eval.envy_free_choice[i] >= 0);
        t.check(ok && weighted_envy_free, label(k, corpus[k]) + " point " + std::to_string(s));
      }
    }
    lines.push_back({3, t.pass(), t.summary("weight points")});
  }

  lines.push_back({4, face_bound.pass(), face_bound.summary("instances with |free items| <= n(n-1) at every scanned vertex")});

  // 5
  {
    Tally t;
    std::mt19937_64 r(20240605);
    for (int k = 0; k < kCorpusSize; ++k) {
      const auto& inst = normalized[k];
      if (count_feasible(inst.padded) > kMaxFeasible) continue;
      const SlotGraph g = build_slot_graph(inst);
      for (int s = 0; s < kSolverPointsPerInstance; ++s) {
        const auto t_point = test_support::random_simplex_point(r, inst.num_agents(), s % 2 == 0 ? 4 : 60);
        const auto costs =
            edge_costs(inst, g, shrink_weights(t_point, compute_K(inst), inst.num_agents()), CostModel::lex());
        const auto truth = test_support::brute_optimum(inst, g, costs);
        const auto solved = solve<LexCost>(g, costs);
        const auto optima = enumerate_optima<LexCost>(g, costs, probe_face<LexCost>(g, costs));
        t.check(solved.objective == truth.value && test_support::sorted(optima) == truth.argmax,
                label(k, corpus[k]) + " point " + std::to_string(s));
      }
    }
    lines.push_back({5, t.pass(), t.summary("weight points match exhaustive enumeration")});
  }

  // 6
  {
    Tally t;
    std::mt19937_64 r(20240606);
    int made = 0;
    while (made < kEpsilonInstances) {
      const Instance base = test_support::random_instance(r);
      const auto inst = normalize(base);
      if (inst.num_agents() * inst.num_items() > kMaxEpsilonDimension) continue;
      const CostModel exp = CostModel::explicit_with(epsilon_explicit(inst, default_alpha(inst)));
      for (int s = 0; s < kEpsilonPoints; ++s) {
        const auto t_point = test_support::random_simplex_point(r, inst.num_agents(), s % 2 == 0 ? 4 : 60);
        t.check(test_support::optima_at(inst, t_point, exp) == test_support::optima_at(inst, t_point),
                label(made, base) + " point " + std::to_string(s));
      }
      ++made;
    }
    lines.push_back({6, t.pass(), t.summary("weight points agree between explicit and lex perturbation")});
  }

  // 7
  {
    Tally t;
    std::mt19937_64 r(20240607);
    for (int sign = 0; sign < 2; ++sign) {
      test_support::GeneratorParams p;
      if (sign == 0) {
        p.min_utility = 0;
      } else {
        p.max_utility = 0;
      }
      int made = 0;
      while (made < kSignInstances) {
        const Instance base = test_support::random_instance(r, p);
        const auto inst = normalize(base);
        if (count_feasible(inst.padded) > kMaxFeasible) continue;
        bool same = true;
        for_each_feasible(inst.padded,
                          [&](const Allocation& a) { same = same && is_ef1(inst.padded, a) == is_ef11(inst.padded, a); });
        t.check(same, (sign == 0 ? "goods " : "chores ") + label(made, base));
        ++made;
      }
    }
    lines.push_back({7, t.pass(), t.summary("goods/chores instances with EF1 == EF[1,1]")});
  }

  lines.push_back({8, determinism.pass(), determinism.summary("instances with byte-identical repeated solves")});

  fs::remove_all(work);
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  bool all = true;
  for (const auto& l : lines) {
    std::cout << "criterion " << l.id << ": " << (l.pass ? "PASS" : "FAIL") << "  " << l.detail << "\n";
    all = all && l.pass;
  }
  return all ? 0 : 1;
}
