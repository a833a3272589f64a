#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idxlog/ast.hpp"
#include "idxlog/machines.hpp"
#include "idxlog/transforms.hpp"

namespace idxlog {

// Differential checks shared by the tests, the acceptance runner and `check`.

struct DifferentialReport {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t skipped = 0;     // cases outside the construction's reach
  std::string first_failure;     // empty when there is none
  std::string note;              // extra measurements worth printing

  bool ok() const { return mismatches == 0; }
  std::string summary() const;
  void merge(const DifferentialReport& o);
};

/// Which structures to visit per domain size: all of them when there are at
/// most `exhaustive_limit`, otherwise `samples` random ones.
struct SizePlan {
  std::uint64_t n_min = 2;
  std::uint64_t n_max = 12;
  std::uint64_t exhaustive_limit = 1 << 16;
  std::uint64_t samples = 200;
  std::uint64_t seed = 1;
};

/// Calls f on the structures chosen by plan for every n in range.
void for_planned_structures(const Vocabulary& v, const SizePlan& plan,
                            const std::function<void(const Structure&)>& f);

struct DemoMachine {
  std::string name;
  MachineSpec machine;
  unsigned ifp_k;      // time exponent for the IFP compiler
  unsigned pfp_width;  // tape-position width for the PFP compiler
  std::uint64_t exhaustive_limit = 1 << 16;  // its sentences are slow to evaluate beyond this
  std::uint64_t samples = 200;               // per size once past the limit
};

/// The shipped DAM machines with the parameters their runs need.
std::vector<DemoMachine> demo_dam_machines();

/// Compares a compiled sentence with dam_run on m. An IFP sentence with time
/// exponent k can only witness acceptance within ceil(log n)^k steps, so the
/// expected value is "accepts within that many steps"; runs cut off by that
/// bound are counted in `skipped` but still compared. A PFP sentence is
/// compared with plain acceptance; runs whose heads leave the representable
/// positions are skipped.
DifferentialReport compare_compiled(const MachineSpec& m, const CompilationArtifact& a, const SizePlan& plan);

/// eliminate_order(f) against f.
DifferentialReport compare_order_elimination(const FormulaPtr& f, const Vocabulary& v, const SizePlan& plan);

/// eliminate_constants(f) on singleton structures against f on all structures
/// of v whose constants are pairwise distinct.
DifferentialReport compare_constant_elimination(const FormulaPtr& f, const Vocabulary& v, const SizePlan& plan);

}  // namespace idxlog
