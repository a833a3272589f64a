#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace idxlog {

using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Smallest m with 2^m >= n. Throws DomainError for n == 0.
unsigned log_ceil(std::uint64_t n);

/// b^k, throwing DomainError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t b, unsigned k);

/// 0-based position of t among {0..b-1}^k in lexicographic order.
std::uint64_t lex_rank(std::span<const Elem> t, unsigned k, std::uint64_t b);
Tuple lex_unrank(std::uint64_t m, unsigned k, std::uint64_t b);

enum class SymbolKind { Relation, Constant, Function };

struct Symbol {
  std::string name;
  SymbolKind kind;
  unsigned arity;  // 0 for constants
  bool operator==(const Symbol&) const = default;
};

class Vocabulary {
 public:
  Vocabulary& add_relation(std::string name, unsigned arity);
  Vocabulary& add_constant(std::string name);
  Vocabulary& add_function(std::string name, unsigned arity);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol* find(std::string_view name) const;
  int index_of(std::string_view name) const;

  std::vector<const Symbol*> of_kind(SymbolKind k) const;
  bool has_kind(SymbolKind k) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  void add(Symbol s);
  std::vector<Symbol> symbols_;
};

struct Violation {
  enum class Kind { DomainSize, OutOfRange, ArityMismatch, PartialFunction, UnknownSymbol };
  Kind kind;
  std::string symbol;
  std::string message;
};

class InvalidStructure : public std::runtime_error {
 public:
  explicit InvalidStructure(std::vector<Violation> report);
  const std::vector<Violation>& report() const { return report_; }

 private:
  std::vector<Violation> report_;
};

/// A finite ordered structure over {0..n-1}. Relations are bitsets indexed by
/// lex_rank; tuples that cannot be stored (wrong width or out of range) are kept
/// aside so validate_structure can report them.
class Structure {
 public:
  Structure(Vocabulary vocab, std::uint64_t n);

  const Vocabulary& vocabulary() const { return vocab_; }
  std::uint64_t size() const { return n_; }
  unsigned num_bound() const { return num_bound_; }  // |Num(A)| = ceil(log n)

  void add_tuple(std::string_view rel, const Tuple& t);
  void set_relation_bits(std::string_view rel, std::vector<bool> bits);
  void set_constant(std::string_view c, std::uint64_t v);
  void set_function(std::string_view f, std::vector<std::uint64_t> table);

  bool holds(int symbol_index, std::span<const Elem> t) const;
  bool holds(std::string_view rel, const Tuple& t) const;
  bool holds_rank(int symbol_index, std::uint64_t rank) const { return relations_[symbol_index][rank]; }
  std::uint64_t constant(int symbol_index) const { return constants_[symbol_index]; }
  std::uint64_t constant(std::string_view c) const;
  std::uint64_t apply(int symbol_index, std::span<const Elem> args) const;
  std::uint64_t apply(std::string_view f, const Tuple& args) const;

  const std::vector<bool>& relation_bits(int symbol_index) const { return relations_[symbol_index]; }
  const std::vector<std::uint64_t>& function_table(int symbol_index) const { return functions_[symbol_index]; }

  struct StrayTuple {
    std::string rel;
    Tuple tuple;
  };
  const std::vector<StrayTuple>& stray_tuples() const { return stray_; }

  bool operator==(const Structure&) const;

 private:
  Vocabulary vocab_;
  std::uint64_t n_;
  unsigned num_bound_;
  std::vector<std::vector<bool>> relations_;          // by symbol index
  std::vector<std::uint64_t> constants_;              // by symbol index
  std::vector<std::vector<std::uint64_t>> functions_; // by symbol index
  std::vector<StrayTuple> stray_;
};

std::vector<Violation> validate_structure(const Structure& s);

/// Throws InvalidStructure when the report is non-empty.
void require_valid(const Structure& s);

struct BitString {
  std::vector<bool> bits;

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i]; }
  std::string str() const;
  static BitString parse(std::string_view text);
  bool operator==(const BitString&) const = default;
};

/// bin(A): relations, then constants, then functions, each group in declaration order.
BitString encode_structure(const Structure& s);

/// Closed-form length of bin(A) for the given vocabulary and domain size.
std::uint64_t encoding_length(const Vocabulary& v, std::uint64_t n);

/// Uniformly random valid structure; relation tuples are included with probability density.
Structure random_structure(const Vocabulary& v, std::uint64_t n, std::mt19937_64& rng, double density = 0.5);

/// Calls f on every valid structure of the vocabulary with domain size n.
/// Returns false early if f returns false.
bool for_each_structure(const Vocabulary& v, std::uint64_t n, const std::function<bool(const Structure&)>& f);

/// Number of structures for_each_structure would visit (saturating at UINT64_MAX).
std::uint64_t count_structures(const Vocabulary& v, std::uint64_t n);

std::string to_string(Violation::Kind k);

}  // namespace idxlog
