#include "idxlog/structure.hpp"

#include <algorithm>
#include <limits>

namespace idxlog {

unsigned log_ceil(std::uint64_t n) {
  if (n == 0) throw DomainError("log_ceil: n must be positive");
  unsigned m = 0;
  while (m < 64 && (std::uint64_t{1} << m) < n) ++m;
  return m;
}

std::uint64_t checked_pow(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b)
      throw DomainError("checked_pow: overflow");
    r *= b;
  }
  return r;
}

std::uint64_t lex_rank(std::span<const Elem> t, unsigned k, std::uint64_t b) {
  if (t.size() != k) throw DomainError("lex_rank: tuple width mismatch");
  std::uint64_t r = 0;
  for (Elem e : t) {
    if (e >= b) throw DomainError("lex_rank: component out of range");
    r = r * b + e;
  }
  return r;
}

Tuple lex_unrank(std::uint64_t m, unsigned k, std::uint64_t b) {
  if (m >= checked_pow(b, k)) throw DomainError("lex_unrank: rank out of range");
  Tuple t(k);
  for (unsigned i = k; i-- > 0;) {
    t[i] = static_cast<Elem>(m % b);
    m /= b;
  }
  return t;
}

// ---------------------------------------------------------------- Vocabulary

void Vocabulary::add(Symbol s) {
  if (s.name.empty()) throw DomainError("vocabulary: empty symbol name");
  if (find(s.name)) throw DomainError("vocabulary: duplicate symbol '" + s.name + "'");
  if (s.kind != SymbolKind::Constant && s.arity == 0)
    throw DomainError("vocabulary: symbol '" + s.name + "' needs arity >= 1");
  symbols_.push_back(std::move(s));
}

Vocabulary& Vocabulary::add_relation(std::string name, unsigned arity) {
  add({std::move(name), SymbolKind::Relation, arity});
  return *this;
}

Vocabulary& Vocabulary::add_constant(std::string name) {
  add({std::move(name), SymbolKind::Constant, 0});
  return *this;
}

Vocabulary& Vocabulary::add_function(std::string name, unsigned arity) {
  add({std::move(name), SymbolKind::Function, arity});
  return *this;
}

const Symbol* Vocabulary::find(std::string_view name) const {
  for (const auto& s : symbols_)
    if (s.name == name) return &s;
  return nullptr;
}

int Vocabulary::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<const Symbol*> Vocabulary::of_kind(SymbolKind k) const {
  std::vector<const Symbol*> out;
  for (const auto& s : symbols_)
    if (s.kind == k) out.push_back(&s);
  return out;
}

bool Vocabulary::has_kind(SymbolKind k) const {
  return std::any_of(symbols_.begin(), symbols_.end(), [k](const Symbol& s) { return s.kind == k; });
}

// ---------------------------------------------------------------- Structure

InvalidStructure::InvalidStructure(std::vector<Violation> report)
    : std::runtime_error([&] {
        std::string msg = "invalid structure:";
        for (const auto& v : report) msg += "\n  " + v.message;
        return msg;
      }()),
      report_(std::move(report)) {}

Structure::Structure(Vocabulary vocab, std::uint64_t n)
    : vocab_(std::move(vocab)), n_(n), num_bound_(n == 0 ? 0 : log_ceil(n)) {
  const auto& syms = vocab_.symbols();
  relations_.resize(syms.size());
  constants_.assign(syms.size(), 0);
  functions_.resize(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind == SymbolKind::Relation) relations_[i].assign(checked_pow(n, syms[i].arity), false);
    if (syms[i].kind == SymbolKind::Function) functions_[i].assign(checked_pow(n, syms[i].arity), 0);
  }
}

namespace {
int require_symbol(const Vocabulary& v, std::string_view name, SymbolKind kind) {
  int i = v.index_of(name);
  if (i < 0 || v.symbols()[i].kind != kind)
    throw DomainError("structure: unknown symbol '" + std::string(name) + "'");
  return i;
}
}  // namespace

void Structure::add_tuple(std::string_view rel, const Tuple& t) {
  int i = require_symbol(vocab_, rel, SymbolKind::Relation);
  const auto arity = vocab_.symbols()[i].arity;
  bool fits = t.size() == arity && std::all_of(t.begin(), t.end(), [&](Elem e) { return e < n_; });
  if (!fits) {
    stray_.push_back({std::string(rel), t});
    return;
  }
  relations_[i][lex_rank(t, arity, n_)] = true;
}

void Structure::set_relation_bits(std::string_view rel, std::vector<bool> bits) {
  int i = require_symbol(vocab_, rel, SymbolKind::Relation);
  if (bits.size() != relations_[i].size()) throw DomainError("structure: relation bitset has wrong size");
  relations_[i] = std::move(bits);
}

void Structure::set_constant(std::string_view c, std::uint64_t v) {
  constants_[require_symbol(vocab_, c, SymbolKind::Constant)] = v;
}

void Structure::set_function(std::string_view f, std::vector<std::uint64_t> table) {
  functions_[require_symbol(vocab_, f, SymbolKind::Function)] = std::move(table);
}

bool Structure::holds(int symbol_index, std::span<const Elem> t) const {
  std::uint64_t r = 0;
  for (Elem e : t) {
    if (e >= n_) return false;
    r = r * n_ + e;
  }
  return relations_[symbol_index][r];
}

bool Structure::holds(std::string_view rel, const Tuple& t) const {
  return holds(require_symbol(vocab_, rel, SymbolKind::Relation), t);
}

std::uint64_t Structure::constant(std::string_view c) const {
  return constants_[require_symbol(vocab_, c, SymbolKind::Constant)];
}

std::uint64_t Structure::apply(int symbol_index, std::span<const Elem> args) const {
  std::uint64_t r = 0;
  for (Elem e : args) r = r * n_ + e;
  return functions_[symbol_index][r];
}

std::uint64_t Structure::apply(std::string_view f, const Tuple& args) const {
  int i = require_symbol(vocab_, f, SymbolKind::Function);
  if (args.size() != vocab_.symbols()[i].arity) throw DomainError("structure: function arity mismatch");
  for (Elem e : args)
    if (e >= n_) throw DomainError("structure: function argument out of range");
  return apply(i, args);
}

bool Structure::operator==(const Structure& o) const {
  return vocab_ == o.vocab_ && n_ == o.n_ && relations_ == o.relations_ && constants_ == o.constants_ &&
         functions_ == o.functions_ && stray_.size() == o.stray_.size();
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::DomainSize: return "domain-size";
    case Violation::Kind::OutOfRange: return "out-of-range";
    case Violation::Kind::ArityMismatch: return "arity-mismatch";
    case Violation::Kind::PartialFunction: return "partial-function";
    case Violation::Kind::UnknownSymbol: return "unknown-symbol";
  }
  return "?";
}

std::vector<Violation> validate_structure(const Structure& s) {
  std::vector<Violation> out;
  const auto n = s.size();
  if (n < 2)
    out.push_back({Violation::Kind::DomainSize, "", "domain size " + std::to_string(n) + " is below the minimum of 2"});
  for (const auto& st : s.stray_tuples()) {
    const Symbol* sym = s.vocabulary().find(st.rel);
    if (sym && st.tuple.size() != sym->arity) {
      out.push_back({Violation::Kind::ArityMismatch, st.rel,
                     "relation " + st.rel + " expects arity " + std::to_string(sym->arity) + ", got a tuple of width " +
                         std::to_string(st.tuple.size())});
    } else {
      out.push_back({Violation::Kind::OutOfRange, st.rel, "relation " + st.rel + " has a tuple component outside the domain"});
    }
  }
  const auto& syms = s.vocabulary().symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const auto& sym = syms[i];
    if (sym.kind == SymbolKind::Constant && s.constant(static_cast<int>(i)) >= n) {
      out.push_back({Violation::Kind::OutOfRange, sym.name,
                     "constant " + sym.name + " = " + std::to_string(s.constant(static_cast<int>(i))) + " is outside the domain"});
    }
    if (sym.kind == SymbolKind::Function) {
      const auto& table = s.function_table(static_cast<int>(i));
      std::uint64_t want = checked_pow(n, sym.arity);
      if (table.size() != want) {
        out.push_back({Violation::Kind::PartialFunction, sym.name,
                       "function " + sym.name + " has " + std::to_string(table.size()) + " entries, expected " +
                           std::to_string(want)});
      }
      if (std::any_of(table.begin(), table.end(), [n](std::uint64_t v) { return v >= n; }))
        out.push_back({Violation::Kind::OutOfRange, sym.name, "function " + sym.name + " has a value outside the domain"});
    }
  }
  return out;
}

void require_valid(const Structure& s) {
  auto report = validate_structure(s);
  if (!report.empty()) throw InvalidStructure(std::move(report));
}

// ---------------------------------------------------------------- Encoding

std::string BitString::str() const {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

BitString BitString::parse(std::string_view text) {
  BitString b;
  for (char c : text) {
    if (c == '0' || c == '1')
      b.bits.push_back(c == '1');
    else
      throw DomainError(std::string("bit string: unexpected character '") + c + "'");
  }
  return b;
}

std::uint64_t encoding_length(const Vocabulary& v, std::uint64_t n) {
  const std::uint64_t l = log_ceil(n);
  std::uint64_t total = 0;
  for (const auto& s : v.symbols()) {
    switch (s.kind) {
      case SymbolKind::Relation: total += checked_pow(n, s.arity); break;
      case SymbolKind::Constant: total += l; break;
      case SymbolKind::Function: total += l * checked_pow(n, s.arity); break;
    }
  }
  return total;
}

BitString encode_structure(const Structure& s) {
  require_valid(s);
  const auto& syms = s.vocabulary().symbols();
  const unsigned l = s.num_bound();
  BitString out;
  out.bits.reserve(encoding_length(s.vocabulary(), s.size()));
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind != SymbolKind::Relation) continue;
    const auto& bits = s.relation_bits(static_cast<int>(i));
    out.bits.insert(out.bits.end(), bits.begin(), bits.end());
  }
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind != SymbolKind::Constant) continue;
    const auto c = s.constant(static_cast<int>(i));
    for (unsigned b = l; b-- > 0;) out.bits.push_back((c >> b) & 1u);
  }
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind != SymbolKind::Function) continue;
    const auto& table = s.function_table(static_cast<int>(i));
    for (unsigned block = 0; block < l; ++block) {
      const unsigned bit = l - 1 - block;
      for (auto v : table) out.bits.push_back((v >> bit) & 1u);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Generation

Structure random_structure(const Vocabulary& v, std::uint64_t n, std::mt19937_64& rng, double density) {
  Structure s(v, n);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::uint64_t> elem(0, n - 1);
  for (const auto& sym : v.symbols()) {
    switch (sym.kind) {
      case SymbolKind::Relation: {
        std::vector<bool> bits(checked_pow(n, sym.arity));
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = coin(rng);
        s.set_relation_bits(sym.name, std::move(bits));
        break;
      }
      case SymbolKind::Constant: s.set_constant(sym.name, elem(rng)); break;
      case SymbolKind::Function: {
        std::vector<std::uint64_t> table(checked_pow(n, sym.arity));
        for (auto& x : table) x = elem(rng);
        s.set_function(sym.name, std::move(table));
        break;
      }
    }
  }
  return s;
}

std::uint64_t count_structures(const Vocabulary& v, std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  auto mul = [&](std::uint64_t f) {
    if (f != 0 && total > kMax / f) total = kMax;
    else total *= f;
  };
  for (const auto& sym : v.symbols()) {
    std::uint64_t cells = sym.kind == SymbolKind::Constant ? 1 : checked_pow(n, sym.arity);
    std::uint64_t choices = sym.kind == SymbolKind::Relation ? 2 : n;
    for (std::uint64_t i = 0; i < cells && total != kMax; ++i) mul(choices);
  }
  return total;
}

bool for_each_structure(const Vocabulary& v, std::uint64_t n, const std::function<bool(const Structure&)>& f) {
  // One mixed-radix digit per relation bit, constant, and function cell.
  struct Slot {
    int symbol;
    std::uint64_t cell;
    std::uint64_t radix;
  };
  std::vector<Slot> slots;
  const auto& syms = v.symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    const auto& sym = syms[i];
    std::uint64_t cells = sym.kind == SymbolKind::Constant ? 1 : checked_pow(n, sym.arity);
    for (std::uint64_t c = 0; c < cells; ++c)
      slots.push_back({static_cast<int>(i), c, sym.kind == SymbolKind::Relation ? 2 : n});
  }
  std::vector<std::uint64_t> digit(slots.size(), 0);
  std::vector<std::vector<bool>> rel(syms.size());
  std::vector<std::vector<std::uint64_t>> fun(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind == SymbolKind::Relation) rel[i].assign(checked_pow(n, syms[i].arity), false);
    if (syms[i].kind == SymbolKind::Function) fun[i].assign(checked_pow(n, syms[i].arity), 0);
  }
  while (true) {
    Structure s(v, n);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto& sl = slots[k];
      switch (syms[sl.symbol].kind) {
        case SymbolKind::Relation: rel[sl.symbol][sl.cell] = digit[k] != 0; break;
        case SymbolKind::Constant: s.set_constant(syms[sl.symbol].name, digit[k]); break;
        case SymbolKind::Function: fun[sl.symbol][sl.cell] = digit[k]; break;
      }
    }
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i].kind == SymbolKind::Relation) s.set_relation_bits(syms[i].name, rel[i]);
      if (syms[i].kind == SymbolKind::Function) s.set_function(syms[i].name, fun[i]);
    }
    if (!f(s)) return false;
    std::size_t k = 0;
    while (k < slots.size()) {
      if (++digit[k] < slots[k].radix) break;
      digit[k] = 0;
      ++k;
    }
    if (k == slots.size()) return true;
  }
}

}  // namespace idxlog
