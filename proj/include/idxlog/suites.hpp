#pragma once

#include <cstdint>
#include <vector>

#include "idxlog/differential.hpp"

namespace idxlog {

// Parameterised property suites. The acceptance runner calls them at full
// scale; `check` and the unit tests call them with smaller parameters.

/// BIT validity for every constant value c < n, n in [n_min, n_max].
DifferentialReport suite_bit_validity(std::uint64_t n_min = 2, std::uint64_t n_max = 32);

/// Binary search sentence against search_oracle on random sorted arrays.
DifferentialReport suite_binary_search(std::uint64_t count = 500, std::uint64_t n_min = 4, std::uint64_t n_max = 64,
                                       std::uint64_t seed = 1);

/// Positive corpus under LFP against its IFP relabelling, all {E/2} structures
/// with n <= n_max.
DifferentialReport suite_ifp_lfp(std::uint64_t n_max = 4);

/// Unary PFP corpus: the engine (with and without cycle detection) against
/// the counting definition, all {E/2} structures with n <= n_max.
DifferentialReport suite_pfp_counting(std::uint64_t n_max = 4);

struct ScalingPlan {
  std::vector<std::uint64_t> sizes{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  unsigned samples = 8;           // structures per size for the sentences
  std::uint64_t max_length = 4096;  // Example 1 runs on every length in [2, max_length]
  double max_ratio = 2.0;
  double example_exponent = 2.0;  // Example 1 must grow no faster than ceil(log L)^2
  std::uint64_t seed = 1;
};

/// Evaluator cost of the BIT-validity and binary-search sentences, and the
/// Example 1 step count, each fitted by c * ceil(log n)^k. A mismatch is a fit
/// whose residual ratio exceeds the plan, or an Example 1 exponent above
/// example_exponent.
DifferentialReport suite_scaling(const ScalingPlan& plan = {});

/// Both compilers on every demo machine against dam_run.
DifferentialReport suite_compile(const SizePlan& plan);

/// Order elimination on the order corpus plus the shipped sentences.
DifferentialReport suite_drop_order(const SizePlan& plan);

/// Constant elimination on the constant corpus.
DifferentialReport suite_drop_constants(const SizePlan& plan);

/// encode_structure length against the closed form on random vocabularies,
/// and the bit layout of singleton {P/1, Q/1} structures.
DifferentialReport suite_encoding(std::uint64_t vocabularies = 1000, std::uint64_t n_max = 16,
                                  std::uint64_t seed = 1);

/// Paired RAM (over bin(A)) and DAM (over A) deciders.
DifferentialReport suite_model_equivalence(const SizePlan& plan);

/// flip_uninspected_check over a machine/input corpus, and Example 1 leaving
/// some of every length-64 input uninspected.
DifferentialReport suite_uninspected(std::uint64_t exhaustive_length = 8, std::uint64_t random_inputs = 200,
                                     std::uint64_t seed = 1);

}  // namespace idxlog
