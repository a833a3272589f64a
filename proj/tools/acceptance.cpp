// Runs the ten acceptance criteria at full scale and prints one line per
// criterion. Exits nonzero when any criterion fails or exceeds its time budget.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "idxlog/suites.hpp"

using namespace idxlog;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0: no budget
  std::function<std::vector<DifferentialReport>()> run;
};

SizePlan plan(std::uint64_t n_min, std::uint64_t n_max, std::uint64_t limit, std::uint64_t samples) {
  SizePlan p;
  p.n_min = n_min;
  p.n_max = n_max;
  p.exhaustive_limit = limit;
  p.samples = samples;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  // an optional argument restricts the run to one criterion
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;

  const std::vector<Criterion> criteria = {
      {1, "BIT validity, n in 2..32, every c", 10, [] { return std::vector{suite_bit_validity(2, 32)}; }},
      {2, "binary search vs oracle, 500 arrays, n in 4..64", 60,
       [] { return std::vector{suite_binary_search(500, 4, 64, 1)}; }},
      {3, "IFP = LFP on the positive corpus, all {E} with n <= 4", 120,
       [] { return std::vector{suite_ifp_lfp(4)}; }},
      {4, "PFP engine vs counting definition, all {E} with n <= 4", 0,
       [] { return std::vector{suite_pfp_counting(4)}; }},
      {5, "polylog scaling of evaluator cost and Example 1 steps", 0,
       [] { return std::vector{suite_scaling()}; }},
      {6, "compiled IFP/PFP sentences vs dam_run, n <= 12", 300,
       [] { return std::vector{suite_compile(plan(2, 12, 1 << 16, 200))}; }},
      {7, "order and constant elimination", 0,
       [] {
         return std::vector{suite_drop_order(plan(2, 4, 1 << 20, 0)), suite_drop_constants(plan(2, 6, 1 << 16, 0))};
       }},
      {8, "encoding length and singleton layout", 0, [] { return std::vector{suite_encoding(1000, 16, 1)}; }},
      {9, "RAM over bin(A) vs DAM over A, n <= 16", 0,
       [] { return std::vector{suite_model_equivalence(plan(2, 16, 1 << 16, 500))}; }},
      {10, "uninspected bits and Example 1 at length 64", 0,
       [] { return std::vector{suite_uninspected(8, 200, 1)}; }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    std::vector<DifferentialReport> reports;
    std::string error;
    try {
      reports = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = error.empty();
    for (const auto& r : reports) ok = ok && r.ok();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    all = all && ok && in_time;
    std::printf("[%s] %2d %s (%.1fs%s)\n", ok && in_time ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                in_time ? "" : ", over budget");
    for (const auto& r : reports) std::printf("       %s\n", r.summary().c_str());
    if (!error.empty()) std::printf("       error: %s\n", error.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
