#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "idxlog/structure.hpp"

namespace idxlog {

enum class Move { L, R, S };

/// Tape symbols are the characters '0', '1', '_' (blank) and, on the RAM input
/// tape only, '<' (end marker). '*' is a wildcard on reads and means
/// "write back what was read" on writes.
constexpr char kBlank = '_';
constexpr char kEndMarker = '<';
constexpr char kAny = '*';

enum class MachineKind { Ram, Dam };

enum class TapeRole {
  Input,    // RAM input tape (read-only, head driven by the address tape)
  Index,    // RAM address tape
  Work,     // ordinary work tape
  RelAddr,  // DAM address tape of a relation argument
  FunAddr,  // DAM address tape of a function argument
  Value,    // DAM function value tape (read-only)
  Const,    // DAM constant tape (read-only)
  Size,     // DAM tape holding n (read-only)
};

struct TapeDecl {
  std::string name;
  TapeRole role;
  std::string symbol;     // vocabulary symbol for RelAddr/FunAddr/Value/Const
  unsigned position = 0;  // 1-based argument index for RelAddr/FunAddr
};

bool is_writable(TapeRole r);

struct Action {
  char write = kAny;
  Move move = Move::S;
};

struct Rule {
  std::string state;
  std::vector<char> reads;    // one per tape
  std::vector<char> answers;  // DAM: one per relation symbol, '0'/'1'/'*'
  std::string next;
  std::vector<Action> actions;  // one per tape; read-only tapes only move
  int line = 0;
};

struct MachineSpec {
  MachineKind kind = MachineKind::Ram;
  Vocabulary vocab;  // DAM only
  std::vector<std::string> states;
  std::string initial;
  std::set<std::string> accepting;
  std::vector<TapeDecl> tapes;  // RAM: input, index, then work tapes
  std::vector<Rule> rules;

  int tape_index(const std::string& name) const;
  std::size_t work_tape_count() const;
};

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural checks: declared states, tape roster vs vocabulary, symbols,
/// read-only tapes never written, determinism (no two rules with overlapping
/// patterns). Returns human-readable problems; empty iff the machine is usable.
std::vector<std::string> validate_machine(const MachineSpec& m);
void require_valid_machine(const MachineSpec& m);

struct Limits {
  std::uint64_t steps = 1'000'000;
  std::uint64_t space = 1'000'000;
};

enum class HaltReason { Accept, NoTransition, StepLimit, SpaceLimit, Fault };
std::string to_string(HaltReason h);

enum class AccessMode { Random, Sequential };

struct RunResult {
  bool accepted = false;
  std::uint64_t steps = 0;
  std::vector<std::uint64_t> space;  // per tape: max cell touched + 1
  std::uint64_t total_space = 0;     // over writable tapes
  std::set<std::uint64_t> inspected; // RAM only
  HaltReason halt = HaltReason::NoTransition;
  std::string final_state;
  std::vector<std::string> final_tapes;  // contents, trailing blanks trimmed
  std::string fault;

  /// `steps,space,accepted,halt_reason,inspected_count`
  std::string csv_row() const;
  static std::string csv_header();
};

/// Called once per configuration (including the initial one).
struct TraceLine {
  std::uint64_t step;
  const std::string& state;
  const std::vector<std::uint64_t>& heads;
  const std::vector<std::string>& tapes;
};
using TraceSink = std::function<void(const TraceLine&)>;

/// Random mode: the input head sits on the cell numbered by the address tape
/// (MSB-first, up to the first blank); the end marker when that is >= |input|.
/// Sequential mode: the address slot's move drives the input head directly.
RunResult ram_run(const MachineSpec& m, const BitString& input, const Limits& limits,
                  AccessMode mode = AccessMode::Random, const TraceSink& trace = {});

/// Numerals on address, value and constant tapes are LSB-first (cell j = bit 2^j).
RunResult dam_run(const MachineSpec& m, const Structure& s, const Limits& limits, const TraceSink& trace = {});

/// RAM index-tape numeral: MSB-first up to the first blank, empty = 0, saturating.
std::uint64_t msb_numeral(const std::string& cells);
/// DAM numeral: LSB-first up to the first blank, empty = 0, saturating.
std::uint64_t lsb_numeral(const std::string& cells);
/// Minimal LSB-first binary of v ("0" for zero).
std::string lsb_binary(std::uint64_t v);

/// Reruns m with each uninspected input bit flipped and reports whether the
/// acceptance never changes. Throws MachineError if any run hits a limit.
bool flip_uninspected_check(const MachineSpec& m, const BitString& input, const Limits& limits,
                            AccessMode mode = AccessMode::Random);

/// Turns every accepting state into a fixed point: a rule that writes back what
/// it reads and stays put on every tape. Other rules leaving accepting states
/// are dropped, and the machine gets a single accepting state.
MachineSpec normalize_machine_for_pfp(const MachineSpec& m);
bool is_frozen_on_accept(const MachineSpec& m);

// ---------------------------------------------------------------- Shipped machines

/// Example 1: leaves |input| in binary on the index tape and accepts.
/// Uses one work tape whose only mark sits in cell 0, with its head mirroring the
/// index head, so the machine can tell when it is back at the first cell.
MachineSpec make_length_discovery_machine();

/// RAM decision machines over bit strings.
MachineSpec make_ram_even_length();             // random access, via Example 1
MachineSpec make_ram_even_length_sequential();  // scans to the end marker
MachineSpec make_ram_bit_probe(std::uint64_t i);             // accepts iff input[i] = 1
MachineSpec make_ram_bit_probe_sequential(std::uint64_t i);  // same, walking there

/// DAM machines. The vocabulary is part of the machine.
MachineSpec make_dam_accept_immediately();  // empty vocabulary
MachineSpec make_dam_even_n(const Vocabulary& v = {});
MachineSpec make_dam_constant_odd();        // {c}
MachineSpec make_dam_unary_probe_zero();    // {P/1}: accepts iff P(0)
MachineSpec make_dam_relation_probe();      // {R/2}: accepts iff R(0,1)
MachineSpec make_dam_function_probe();      // {f/1}: writes 3 on f's address tape, accepts iff f(3) = 0
MachineSpec make_dam_two_cycle();           // empty vocabulary, never halts

}  // namespace idxlog
