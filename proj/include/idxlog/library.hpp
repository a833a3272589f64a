#pragma once

#include <random>
#include <string>
#include <vector>

#include "idxlog/ast.hpp"
#include "idxlog/structure.hpp"

namespace idxlog {

// Shipped sentences, structure families and formula corpora used by the tests,
// the acceptance runner and the bench/check commands.

/// {c}
Vocabulary bit_validity_vocabulary();
/// EX x = index{#i : BIT(c,#i)}. x = c
FormulaPtr bit_validity_sentence();

/// {K/1, N, T, Prec/2}: K maps array cells to keys, N is the array length, T
/// the sought key and Prec the key order.
Vocabulary search_vocabulary();

/// Binary search over K[0..N-1] for T. Uses the ceiling average, stops moving
/// once L = R, and performs one more step after the last stage so that
/// ceil(log n) iterations are available.
FormulaPtr binary_search_sentence();
std::string binary_search_text();

/// The textbook transcription: floor average, no L = R test, ceil(log n) - 1
/// iterations. Kept to exhibit where it disagrees with the oracle.
FormulaPtr binary_search_sentence_verbatim();
std::string binary_search_verbatim_text();

/// EX x (x < N & K(x) = T), computed directly.
bool search_oracle(const Structure& s);

/// Random sorted-array structure: Prec is a random total order, K is sorted on
/// [0, N) and arbitrary beyond, 1 <= N < n, and T is an array key with
/// probability 1/2.
Structure random_sorted_array(std::uint64_t n, std::mt19937_64& rng);

/// {c} with c uniform in [0, n).
Structure random_constant_structure(std::uint64_t n, std::mt19937_64& rng);

/// Structure family by name: "bit-validity", "sorted-array", "empty" (no symbols)
/// or "graph" ({E/2} at density 1/2). Throws std::invalid_argument otherwise.
Structure make_family_member(const std::string& family, std::uint64_t n, std::mt19937_64& rng);
std::vector<std::string> family_names();

/// Twenty sentences over {E/2} whose fixed points are positive in their
/// relation variable, written with LFP.
std::vector<std::string> positive_corpus_text();

/// Rewrites every fixed point of kind `from` to kind `to`.
FormulaPtr relabel_fixpoints(const FormulaPtr& f, FpKind from, FpKind to);

/// Ten unary PFP bodies over {E/2} in the variable #i and relation X.
std::vector<std::string> pfp_corpus_text();

/// Five sentences over {c, d} without order on domain terms.
std::vector<std::string> constant_corpus_text();

/// Sentences over {P/1, E/2} that compare domain variables with <=.
std::vector<std::string> order_corpus_text();

Vocabulary graph_vocabulary();        // {E/2}
Vocabulary constants_vocabulary();    // {c, d}
Vocabulary order_vocabulary();        // {P/1, E/2}

}  // namespace idxlog
