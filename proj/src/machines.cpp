#include "idxlog/machines.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "idxlog/parser.hpp"

namespace idxlog {

bool is_writable(TapeRole r) {
  return r == TapeRole::Index || r == TapeRole::Work || r == TapeRole::RelAddr || r == TapeRole::FunAddr;
}

int MachineSpec::tape_index(const std::string& name) const {
  for (std::size_t i = 0; i < tapes.size(); ++i)
    if (tapes[i].name == name) return static_cast<int>(i);
  return -1;
}

std::size_t MachineSpec::work_tape_count() const {
  return static_cast<std::size_t>(
      std::count_if(tapes.begin(), tapes.end(), [](const TapeDecl& t) { return t.role == TapeRole::Work; }));
}

std::string to_string(HaltReason h) {
  switch (h) {
    case HaltReason::Accept: return "accept";
    case HaltReason::NoTransition: return "no-transition";
    case HaltReason::StepLimit: return "step-limit";
    case HaltReason::SpaceLimit: return "space-limit";
    case HaltReason::Fault: return "fault";
  }
  return "?";
}

std::string RunResult::csv_header() { return "steps,space,accepted,halt_reason,inspected_count"; }

std::string RunResult::csv_row() const {
  std::ostringstream out;
  out << steps << "," << total_space << "," << (accepted ? "true" : "false") << "," << to_string(halt) << ","
      << inspected.size();
  return out.str();
}

// ---------------------------------------------------------------- Validation

namespace {

bool read_ok(char c, TapeRole role) {
  if (c == kAny || c == '0' || c == '1' || c == kBlank) return true;
  return c == kEndMarker && role == TapeRole::Input;
}

bool overlaps(const Rule& a, const Rule& b) {
  if (a.state != b.state) return false;
  for (std::size_t i = 0; i < a.reads.size(); ++i)
    if (a.reads[i] != kAny && b.reads[i] != kAny && a.reads[i] != b.reads[i]) return false;
  for (std::size_t i = 0; i < a.answers.size(); ++i)
    if (a.answers[i] != kAny && b.answers[i] != kAny && a.answers[i] != b.answers[i]) return false;
  return true;
}

}  // namespace

std::vector<std::string> validate_machine(const MachineSpec& m) {
  std::vector<std::string> out;
  std::set<std::string> states(m.states.begin(), m.states.end());
  if (m.states.empty()) out.push_back("empty state set");
  if (!states.count(m.initial)) out.push_back("initial state '" + m.initial + "' is not declared");
  for (const auto& q : m.accepting)
    if (!states.count(q)) out.push_back("accepting state '" + q + "' is not declared");

  std::set<std::string> names;
  for (const auto& t : m.tapes)
    if (!names.insert(t.name).second) out.push_back("duplicate tape name '" + t.name + "'");

  if (m.kind == MachineKind::Ram) {
    if (m.tapes.size() < 2 || m.tapes[0].role != TapeRole::Input || m.tapes[1].role != TapeRole::Index)
      out.push_back("a RAM machine needs its input and index tapes first");
    for (std::size_t i = 2; i < m.tapes.size(); ++i)
      if (m.tapes[i].role != TapeRole::Work) out.push_back("RAM tape " + m.tapes[i].name + " must be a work tape");
  } else {
    std::map<std::pair<std::string, unsigned>, int> addr;
    std::map<std::string, int> value, cnst;
    int size = 0, work = 0;
    for (const auto& t : m.tapes) {
      const Symbol* s = t.symbol.empty() ? nullptr : m.vocab.find(t.symbol);
      switch (t.role) {
        case TapeRole::RelAddr:
        case TapeRole::FunAddr:
          if (!s || s->kind == SymbolKind::Constant)
            out.push_back("address tape " + t.name + " names no relation or function");
          else if (t.position < 1 || t.position > s->arity)
            out.push_back("address tape " + t.name + " has position outside 1.." + std::to_string(s->arity));
          else
            ++addr[{t.symbol, t.position}];
          break;
        case TapeRole::Value:
          if (!s || s->kind != SymbolKind::Function) out.push_back("value tape " + t.name + " names no function");
          else ++value[t.symbol];
          break;
        case TapeRole::Const:
          if (!s || s->kind != SymbolKind::Constant) out.push_back("constant tape " + t.name + " names no constant");
          else ++cnst[t.symbol];
          break;
        case TapeRole::Size: ++size; break;
        case TapeRole::Work: ++work; break;
        default: out.push_back("tape " + t.name + " has a RAM-only role"); break;
      }
    }
    for (const auto& s : m.vocab.symbols()) {
      if (s.kind != SymbolKind::Constant)
        for (unsigned j = 1; j <= s.arity; ++j)
          if (addr[{s.name, j}] != 1)
            out.push_back("symbol " + s.name + " needs exactly one address tape for argument " + std::to_string(j));
      if (s.kind == SymbolKind::Function && value[s.name] != 1)
        out.push_back("function " + s.name + " needs exactly one value tape");
      if (s.kind == SymbolKind::Constant && cnst[s.name] != 1)
        out.push_back("constant " + s.name + " needs exactly one constant tape");
    }
    if (size != 1) out.push_back("a DAM machine needs exactly one size tape");
    if (work < 1) out.push_back("a DAM machine needs at least one work tape");
  }

  const std::size_t nrels = m.kind == MachineKind::Dam ? m.vocab.of_kind(SymbolKind::Relation).size() : 0;
  for (const auto& r : m.rules) {
    const std::string at = "line " + std::to_string(r.line) + ": ";
    if (!states.count(r.state)) out.push_back(at + "undeclared state '" + r.state + "'");
    if (!states.count(r.next)) out.push_back(at + "undeclared state '" + r.next + "'");
    if (r.reads.size() != m.tapes.size() || r.actions.size() != m.tapes.size() || r.answers.size() != nrels) {
      out.push_back(at + "rule shape does not match the tape roster");
      continue;
    }
    for (std::size_t i = 0; i < m.tapes.size(); ++i) {
      if (!read_ok(r.reads[i], m.tapes[i].role))
        out.push_back(at + "bad read symbol '" + std::string(1, r.reads[i]) + "' on tape " + m.tapes[i].name);
      const char w = r.actions[i].write;
      if (w != kAny && w != '0' && w != '1' && w != kBlank)
        out.push_back(at + "bad write symbol '" + std::string(1, w) + "'");
      if (!is_writable(m.tapes[i].role) && w != kAny) out.push_back(at + "writes to read-only tape " + m.tapes[i].name);
    }
  }
  for (std::size_t i = 0; i < m.rules.size(); ++i)
    for (std::size_t j = i + 1; j < m.rules.size(); ++j)
      if (overlaps(m.rules[i], m.rules[j]))
        out.push_back("line " + std::to_string(m.rules[j].line) + ": nondeterministic: overlaps the rule on line " +
                      std::to_string(m.rules[i].line));
  return out;
}

void require_valid_machine(const MachineSpec& m) {
  auto p = validate_machine(m);
  if (!p.empty()) throw MachineError(p[0]);
}

// ---------------------------------------------------------------- Numerals

std::uint64_t msb_numeral(const std::string& cells) {
  std::uint64_t v = 0;
  for (char c : cells) {
    if (c != '0' && c != '1') break;
    if (v > (UINT64_MAX >> 1)) return UINT64_MAX;
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

std::uint64_t lsb_numeral(const std::string& cells) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const char c = cells[j];
    if (c != '0' && c != '1') break;
    if (c == '1') {
      if (j >= 64) return UINT64_MAX;
      v |= std::uint64_t{1} << j;
    }
  }
  return v;
}

std::string lsb_binary(std::uint64_t v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s += (v & 1) ? '1' : '0';
    v >>= 1;
  }
  return s;
}

// ---------------------------------------------------------------- Simulation

namespace {

struct Tape {
  std::string cells;
  std::uint64_t head = 0;
  std::uint64_t max_touched = 0;

  char read() const { return head < cells.size() ? cells[head] : kBlank; }
  void write(char c) {
    if (c == kAny) return;
    if (head >= cells.size()) {
      if (c == kBlank) return;
      cells.resize(head + 1, kBlank);
    }
    cells[head] = c;
  }
  std::string trimmed() const {
    auto e = cells.find_last_not_of(kBlank);
    return e == std::string::npos ? "" : cells.substr(0, e + 1);
  }
};

// Index of rules by state, so lookups scan only that state's rules.
class RuleTable {
 public:
  explicit RuleTable(const MachineSpec& m) {
    for (const auto& r : m.rules) by_state_[r.state].push_back(&r);
  }
  const Rule* find(const std::string& q, const std::vector<char>& reads, const std::vector<char>& answers) const {
    auto it = by_state_.find(q);
    if (it == by_state_.end()) return nullptr;
    for (const Rule* r : it->second) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < reads.size(); ++i) ok = r->reads[i] == kAny || r->reads[i] == reads[i];
      for (std::size_t i = 0; ok && i < answers.size(); ++i)
        ok = r->answers[i] == kAny || r->answers[i] == answers[i];
      if (ok) return r;
    }
    return nullptr;
  }

 private:
  std::map<std::string, std::vector<const Rule*>> by_state_;
};

bool move_head(Tape& t, Move mv) {
  if (mv == Move::L) {
    if (t.head == 0) return false;
    --t.head;
  } else if (mv == Move::R) {
    ++t.head;
  }
  t.max_touched = std::max(t.max_touched, t.head);
  return true;
}

void emit_trace(const TraceSink& trace, std::uint64_t step, const std::string& state, const std::vector<Tape>& tapes) {
  if (!trace) return;
  std::vector<std::uint64_t> heads;
  std::vector<std::string> contents;
  for (const auto& t : tapes) {
    heads.push_back(t.head);
    contents.push_back(t.trimmed());
  }
  trace(TraceLine{step, state, heads, contents});
}

void finish(RunResult& res, const MachineSpec& m, const std::vector<Tape>& tapes, const std::string& state) {
  res.final_state = state;
  res.space.clear();
  res.total_space = 0;
  for (std::size_t i = 0; i < tapes.size(); ++i) {
    res.space.push_back(tapes[i].max_touched + 1);
    if (is_writable(m.tapes[i].role)) res.total_space += tapes[i].max_touched + 1;
    res.final_tapes.push_back(tapes[i].trimmed());
  }
}

std::uint64_t writable_space(const MachineSpec& m, const std::vector<Tape>& tapes) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < tapes.size(); ++i)
    if (is_writable(m.tapes[i].role)) s += tapes[i].max_touched + 1;
  return s;
}

}  // namespace

RunResult ram_run(const MachineSpec& m, const BitString& input, const Limits& limits, AccessMode mode,
                  const TraceSink& trace) {
  if (m.kind != MachineKind::Ram) throw MachineError("ram_run needs a RAM machine");
  require_valid_machine(m);
  const RuleTable table(m);
  const std::uint64_t len = input.size();
  std::vector<Tape> tapes(m.tapes.size());
  tapes[1].cells = "0";
  std::string state = m.initial;
  RunResult res;

  auto input_pos = [&]() -> std::uint64_t {
    return mode == AccessMode::Random ? msb_numeral(tapes[1].cells) : tapes[0].head;
  };
  auto note_inspected = [&] { res.inspected.insert(std::min(input_pos(), len)); };

  std::vector<char> reads(m.tapes.size());
  const std::vector<char> no_answers;
  note_inspected();
  while (true) {
    emit_trace(trace, res.steps, state, tapes);
    if (m.accepting.count(state)) {
      res.accepted = true;
      res.halt = HaltReason::Accept;
      break;
    }
    if (res.steps >= limits.steps) {
      res.halt = HaltReason::StepLimit;
      break;
    }
    const std::uint64_t ip = input_pos();
    reads[0] = ip < len ? (input[ip] ? '1' : '0') : kEndMarker;
    reads[1] = mode == AccessMode::Random ? tapes[1].read() : kBlank;
    for (std::size_t i = 2; i < tapes.size(); ++i) reads[i] = tapes[i].read();
    const Rule* r = table.find(state, reads, no_answers);
    if (!r) {
      res.halt = HaltReason::NoTransition;
      break;
    }
    bool fault = false;
    for (std::size_t i = 1; i < tapes.size(); ++i) {
      Tape& t = (i == 1 && mode == AccessMode::Sequential) ? tapes[0] : tapes[i];
      if (!(i == 1 && mode == AccessMode::Sequential)) t.write(r->actions[i].write);
      if (!move_head(t, r->actions[i].move)) {
        fault = true;
        res.fault = "left move at cell 0 of tape " + m.tapes[i].name;
      }
    }
    if (fault) {
      res.halt = HaltReason::Fault;
      break;
    }
    state = r->next;
    ++res.steps;
    note_inspected();
    if (writable_space(m, tapes) > limits.space) {
      res.halt = HaltReason::SpaceLimit;
      break;
    }
  }
  finish(res, m, tapes, state);
  if (mode == AccessMode::Sequential) res.space[0] = tapes[0].max_touched + 1;
  return res;
}

RunResult dam_run(const MachineSpec& m, const Structure& s, const Limits& limits, const TraceSink& trace) {
  if (m.kind != MachineKind::Dam) throw MachineError("dam_run needs a DAM machine");
  require_valid_machine(m);
  if (!(m.vocab == s.vocabulary())) throw MachineError("structure vocabulary differs from the machine's");
  require_valid(s);
  const RuleTable table(m);
  const std::uint64_t n = s.size();
  const unsigned L = s.num_bound();
  const Vocabulary& v = m.vocab;

  std::vector<Tape> tapes(m.tapes.size());
  for (std::size_t i = 0; i < m.tapes.size(); ++i) {
    if (m.tapes[i].role == TapeRole::Const) tapes[i].cells = lsb_binary(s.constant(m.tapes[i].symbol));
    if (m.tapes[i].role == TapeRole::Size) tapes[i].cells = lsb_binary(n);
  }
  // Per symbol: address tapes in argument order, plus the value tape for functions.
  struct Wiring {
    int symbol;
    std::vector<int> addr;
    int value = -1;
  };
  std::vector<Wiring> rels, funs;
  for (std::size_t k = 0; k < v.symbols().size(); ++k) {
    const auto& sym = v.symbols()[k];
    if (sym.kind == SymbolKind::Constant) continue;
    Wiring w{static_cast<int>(k), std::vector<int>(sym.arity, -1), -1};
    for (std::size_t i = 0; i < m.tapes.size(); ++i) {
      if (m.tapes[i].symbol != sym.name) continue;
      if (m.tapes[i].role == TapeRole::Value) w.value = static_cast<int>(i);
      else w.addr[m.tapes[i].position - 1] = static_cast<int>(i);
    }
    (sym.kind == SymbolKind::Relation ? rels : funs).push_back(std::move(w));
  }
  auto args_of = [&](const Wiring& w, Tuple& out) {
    out.clear();
    for (int i : w.addr) {
      std::uint64_t x = lsb_numeral(tapes[i].cells);
      if (x >= n) return false;
      out.push_back(static_cast<Elem>(x));
    }
    return true;
  };

  std::string state = m.initial;
  RunResult res;
  std::vector<char> reads(m.tapes.size()), answers(rels.size());
  Tuple args;
  while (true) {
    emit_trace(trace, res.steps, state, tapes);
    if (m.accepting.count(state)) {
      res.accepted = true;
      res.halt = HaltReason::Accept;
      break;
    }
    if (res.steps >= limits.steps) {
      res.halt = HaltReason::StepLimit;
      break;
    }
    for (std::size_t i = 0; i < tapes.size(); ++i) reads[i] = tapes[i].read();
    for (std::size_t j = 0; j < rels.size(); ++j)
      answers[j] = args_of(rels[j], args) && s.holds(rels[j].symbol, args) ? '1' : '0';
    const Rule* r = table.find(state, reads, answers);
    if (!r) {
      res.halt = HaltReason::NoTransition;
      break;
    }
    bool fault = false;
    for (std::size_t i = 0; i < tapes.size(); ++i) {
      if (is_writable(m.tapes[i].role)) tapes[i].write(r->actions[i].write);
      if (!move_head(tapes[i], r->actions[i].move)) {
        fault = true;
        res.fault = "left move at cell 0 of tape " + m.tapes[i].name;
      }
    }
    if (fault) {
      res.halt = HaltReason::Fault;
      break;
    }
    for (const auto& w : funs) {
      Tape& t = tapes[w.value];
      if (args_of(w, args)) {
        const std::uint64_t val = s.apply(w.symbol, args);
        t.cells.assign(L, '0');
        for (unsigned j = 0; j < L; ++j)
          if ((val >> j) & 1) t.cells[j] = '1';
      } else {
        t.cells.clear();
      }
    }
    state = r->next;
    ++res.steps;
    if (writable_space(m, tapes) > limits.space) {
      res.halt = HaltReason::SpaceLimit;
      break;
    }
  }
  finish(res, m, tapes, state);
  return res;
}

bool flip_uninspected_check(const MachineSpec& m, const BitString& input, const Limits& limits, AccessMode mode) {
  auto halted = [](const RunResult& r) { return r.halt == HaltReason::Accept || r.halt == HaltReason::NoTransition; };
  const RunResult base = ram_run(m, input, limits, mode);
  if (!halted(base)) throw MachineError("base run did not halt: " + to_string(base.halt));
  for (std::size_t j = 0; j < input.size(); ++j) {
    if (base.inspected.count(j)) continue;
    BitString flipped = input;
    flipped.bits[j] = !flipped.bits[j];
    const RunResult r = ram_run(m, flipped, limits, mode);
    if (!halted(r)) throw MachineError("flipped run did not halt: " + to_string(r.halt));
    if (r.accepted != base.accepted) return false;
  }
  return true;
}

// ---------------------------------------------------------------- PFP normalization

namespace {
Rule freeze_rule(const MachineSpec& m, const std::string& q) {
  Rule r;
  r.state = q;
  r.next = q;
  r.reads.assign(m.tapes.size(), kAny);
  r.answers.assign(m.kind == MachineKind::Dam ? m.vocab.of_kind(SymbolKind::Relation).size() : 0, kAny);
  r.actions.assign(m.tapes.size(), Action{kAny, Move::S});
  return r;
}

bool same_rule(const Rule& a, const Rule& b) {
  if (a.state != b.state || a.next != b.next || a.reads != b.reads || a.answers != b.answers) return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i)
    if (a.actions[i].write != b.actions[i].write || a.actions[i].move != b.actions[i].move) return false;
  return true;
}
}  // namespace

bool is_frozen_on_accept(const MachineSpec& m) {
  for (const auto& q : m.accepting) {
    const Rule want = freeze_rule(m, q);
    int count = 0;
    bool good = false;
    for (const auto& r : m.rules)
      if (r.state == q) {
        ++count;
        good = same_rule(r, want);
      }
    if (count != 1 || !good) return false;
  }
  return true;
}

MachineSpec normalize_machine_for_pfp(const MachineSpec& m) {
  if (is_frozen_on_accept(m)) return m;
  MachineSpec out = m;
  out.rules.clear();
  for (const auto& r : m.rules)
    if (!m.accepting.count(r.state)) out.rules.push_back(r);
  for (const auto& q : m.accepting) out.rules.push_back(freeze_rule(m, q));
  return out;
}

// ---------------------------------------------------------------- Shipped machines

namespace {

// Example 1. The work tape carries a single '1' in cell 0 and its head copies
// every move of the index head, so "work reads 1" means "index head at cell 0".
const char* kLengthDiscovery = R"(machine ram
states q0 dbl cut rew ref tst inc carry done
initial q0
accepting done
tapes 1
# input, index, work -> next, (index write,move), (work write,move)
# first probe: empty input halts at once
q0, 0, 0, _ -> dbl, (1,R), (1,R)
q0, 1, 0, _ -> dbl, (1,R), (1,R)
# doubling: append 0 while the addressed cell exists
dbl, 0, _, _ -> dbl, (0,R), (_,R)
dbl, 1, _, _ -> dbl, (0,R), (_,R)
dbl, <, _, _ -> cut, (_,L), (_,L)
# drop the last 0; a lone 1 means length 1, so n-1 = 0
cut, *, 0, _ -> rew, (_,L), (_,L)
cut, *, 1, 1 -> inc, (0,S), (1,S)
# back to the first cell
rew, *, 0, _ -> rew, (0,L), (_,L)
rew, *, 1, 1 -> ref, (1,R), (1,R)
# refinement: try each lower bit as 1, keep it unless the probe hits the end
ref, *, _, _ -> inc, (_,L), (_,L)
ref, *, 0, _ -> tst, (1,S), (_,S)
tst, <, 1, _ -> ref, (0,R), (_,R)
tst, 0, 1, _ -> ref, (1,R), (_,R)
tst, 1, 1, _ -> ref, (1,R), (_,R)
# add one
inc, *, 0, * -> done, (1,S), (*,S)
inc, *, 1, _ -> inc, (0,L), (_,L)
inc, *, 1, 1 -> carry, (1,R), (1,R)
carry, *, 0, _ -> carry, (0,R), (_,R)
carry, *, _, _ -> done, (0,S), (_,S)
)";

// Even length via Example 1: stop after the refinement and look at the last bit of n-1.
const char* kEvenLength = R"(machine ram
states q0 dbl cut rew ref tst par acc
initial q0
accepting acc
tapes 1
q0, <, 0, _ -> acc, (0,S), (_,S)
q0, 0, 0, _ -> dbl, (1,R), (1,R)
q0, 1, 0, _ -> dbl, (1,R), (1,R)
dbl, 0, _, _ -> dbl, (0,R), (_,R)
dbl, 1, _, _ -> dbl, (0,R), (_,R)
dbl, <, _, _ -> cut, (_,L), (_,L)
cut, *, 0, _ -> rew, (_,L), (_,L)
rew, *, 0, _ -> rew, (0,L), (_,L)
rew, *, 1, 1 -> ref, (1,R), (1,R)
ref, *, _, _ -> par, (_,L), (_,L)
ref, *, 0, _ -> tst, (1,S), (_,S)
tst, <, 1, _ -> ref, (0,R), (_,R)
tst, 0, 1, _ -> ref, (1,R), (_,R)
tst, 1, 1, _ -> ref, (1,R), (_,R)
par, *, 1, * -> acc, (1,S), (*,S)
)";

const char* kEvenLengthSequential = R"(machine ram
states ev od acc
initial ev
accepting acc
tapes 0
ev, <, _ -> acc, (_,S)
ev, 0, _ -> od, (_,R)
ev, 1, _ -> od, (_,R)
od, 0, _ -> ev, (_,R)
od, 1, _ -> ev, (_,R)
)";

// Builds DAM machines whose roster follows the vocabulary: address tapes
// addr_<sym>_<j>, value tapes val_<f>, constant tapes const_<c>, then size and work.
class DamBuilder {
 public:
  explicit DamBuilder(const Vocabulary& v, std::vector<std::string> states, std::string accept) {
    m_.kind = MachineKind::Dam;
    m_.vocab = v;
    m_.states = std::move(states);
    m_.initial = m_.states.front();
    m_.accepting = {std::move(accept)};
    for (const auto& s : v.symbols()) {
      if (s.kind == SymbolKind::Constant) continue;
      for (unsigned j = 1; j <= s.arity; ++j)
        m_.tapes.push_back({"addr_" + s.name + "_" + std::to_string(j),
                            s.kind == SymbolKind::Relation ? TapeRole::RelAddr : TapeRole::FunAddr, s.name, j});
      if (s.kind == SymbolKind::Function) m_.tapes.push_back({"val_" + s.name, TapeRole::Value, s.name, 0});
    }
    for (const auto& s : v.symbols())
      if (s.kind == SymbolKind::Constant) m_.tapes.push_back({"const_" + s.name, TapeRole::Const, s.name, 0});
    m_.tapes.push_back({"size", TapeRole::Size, "", 0});
    m_.tapes.push_back({"work", TapeRole::Work, "", 0});
    for (const auto* r : v.of_kind(SymbolKind::Relation)) rel_names_.push_back(r->name);
  }

  DamBuilder& rule(const std::string& q, const std::map<std::string, char>& reads,
                   const std::map<std::string, char>& answers, const std::string& next,
                   const std::map<std::string, Action>& actions) {
    Rule r;
    r.state = q;
    r.next = next;
    r.line = static_cast<int>(m_.rules.size() + 1);
    for (const auto& t : m_.tapes) {
      auto it = reads.find(t.name);
      r.reads.push_back(it == reads.end() ? kAny : it->second);
      auto a = actions.find(t.name);
      r.actions.push_back(a == actions.end() ? Action{kAny, Move::S} : a->second);
    }
    for (const auto& name : rel_names_) {
      auto it = answers.find(name);
      r.answers.push_back(it == answers.end() ? kAny : it->second);
    }
    m_.rules.push_back(std::move(r));
    return *this;
  }

  MachineSpec build() {
    require_valid_machine(m_);
    return m_;
  }

 private:
  MachineSpec m_;
  std::vector<std::string> rel_names_;
};

}  // namespace

MachineSpec make_length_discovery_machine() { return parse_machine(kLengthDiscovery); }
MachineSpec make_ram_even_length() { return parse_machine(kEvenLength); }
MachineSpec make_ram_even_length_sequential() { return parse_machine(kEvenLengthSequential); }

MachineSpec make_ram_bit_probe(std::uint64_t i) {
  // Write i MSB-first on the index tape (cell 0 already holds 0), then read.
  std::string bits;
  for (std::uint64_t x = i; x; x >>= 1) bits.insert(bits.begin(), (x & 1) ? '1' : '0');
  if (bits.empty()) bits = "0";
  std::ostringstream out;
  out << "machine ram\nstates";
  for (std::size_t j = 0; j < bits.size(); ++j) out << " w" << j;
  out << " look acc\ninitial w0\naccepting acc\ntapes 0\n";
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const bool last = j + 1 == bits.size();
    out << "w" << j << ", *, * -> " << (last ? "look" : "w" + std::to_string(j + 1)) << ", (" << bits[j] << ","
        << (last ? 'S' : 'R') << ")\n";
  }
  out << "look, 1, * -> acc, (*,S)\n";
  return parse_machine(out.str());
}

MachineSpec make_ram_bit_probe_sequential(std::uint64_t i) {
  std::ostringstream out;
  out << "machine ram\nstates";
  for (std::uint64_t j = 0; j <= i; ++j) out << " s" << j;
  out << " acc\ninitial s0\naccepting acc\ntapes 0\n";
  for (std::uint64_t j = 0; j < i; ++j) {
    out << "s" << j << ", 0, _ -> s" << j + 1 << ", (_,R)\n";
    out << "s" << j << ", 1, _ -> s" << j + 1 << ", (_,R)\n";
  }
  out << "s" << i << ", 1, _ -> acc, (_,S)\n";
  return parse_machine(out.str());
}

MachineSpec make_dam_accept_immediately() { return DamBuilder(Vocabulary{}, {"acc"}, "acc").build(); }

MachineSpec make_dam_even_n(const Vocabulary& v) {
  // The size tape holds n LSB-first, so cell 0 is the parity bit.
  return DamBuilder(v, {"q0", "acc"}, "acc").rule("q0", {{"size", '0'}}, {}, "acc", {}).build();
}

MachineSpec make_dam_constant_odd() {
  Vocabulary v;
  v.add_constant("c");
  return DamBuilder(v, {"q0", "acc"}, "acc").rule("q0", {{"const_c", '1'}}, {}, "acc", {}).build();
}

MachineSpec make_dam_unary_probe_zero() {
  Vocabulary v;
  v.add_relation("P", 1);
  return DamBuilder(v, {"q0", "acc"}, "acc").rule("q0", {}, {{"P", '1'}}, "acc", {}).build();
}

MachineSpec make_dam_relation_probe() {
  Vocabulary v;
  v.add_relation("R", 2);
  return DamBuilder(v, {"q0", "q1", "acc"}, "acc")
      .rule("q0", {}, {}, "q1", {{"addr_R_2", Action{'1', Move::S}}})
      .rule("q1", {}, {{"R", '1'}}, "acc", {})
      .build();
}

MachineSpec make_dam_function_probe() {
  Vocabulary v;
  v.add_function("f", 1);
  const Action one_right{'1', Move::R}, one_stay{'1', Move::S};
  return DamBuilder(v, {"q0", "q1", "q2", "q3", "acc"}, "acc")
      .rule("q0", {}, {}, "q1", {{"addr_f_1", one_right}})
      .rule("q1", {}, {}, "q2", {{"addr_f_1", one_stay}})
      .rule("q2", {{"val_f", '0'}}, {}, "q3", {{"val_f", Action{kAny, Move::R}}})
      .rule("q3", {{"val_f", '0'}}, {}, "q3", {{"val_f", Action{kAny, Move::R}}})
      .rule("q3", {{"val_f", kBlank}}, {}, "acc", {})
      .build();
}

MachineSpec make_dam_two_cycle() {
  return DamBuilder(Vocabulary{}, {"q0", "q1", "acc"}, "acc")
      .rule("q0", {}, {}, "q1", {{"work", Action{'1', Move::S}}})
      .rule("q1", {}, {}, "q0", {{"work", Action{'0', Move::S}}})
      .build();
}

}  // namespace idxlog
