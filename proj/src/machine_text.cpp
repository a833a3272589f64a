#include <algorithm>
#include <map>
#include <sstream>

#include "idxlog/parser.hpp"

namespace idxlog {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Splits on commas that are not inside parentheses.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

struct Line {
  std::string text;
  std::size_t offset;
  unsigned number;
};

class MachineParser {
 public:
  explicit MachineParser(std::string_view text) {
    std::size_t pos = 0;
    unsigned no = 1;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view raw = text.substr(pos, nl - pos);
      auto hash = raw.find('#');
      if (hash != std::string_view::npos) raw = raw.substr(0, hash);
      auto t = trim(raw);
      if (!t.empty()) lines_.push_back({t, pos, no});
      pos = nl + 1;
      ++no;
    }
  }

  MachineSpec parse() {
    if (lines_.empty()) throw ParseError("empty machine file", SourceSpan{});
    auto head = words(lines_[0].text);
    if (head.size() != 2 || head[0] != "machine" || (head[1] != "ram" && head[1] != "dam"))
      fail(lines_[0], "expected 'machine ram' or 'machine dam'");
    MachineSpec m;
    m.kind = head[1] == "ram" ? MachineKind::Ram : MachineKind::Dam;
    bool have_tapes = false;
    std::vector<const Line*> transitions;
    for (std::size_t i = 1; i < lines_.size(); ++i) {
      const Line& ln = lines_[i];
      if (ln.text.find("->") != std::string::npos) {
        transitions.push_back(&ln);
        continue;
      }
      auto w = words(ln.text);
      const std::string& kw = w[0];
      try {
        if (kw == "states") {
          if (w.size() < 2) fail(ln, "empty state set");
          for (std::size_t j = 1; j < w.size(); ++j) {
            if (std::find(m.states.begin(), m.states.end(), w[j]) != m.states.end())
              fail(ln, "duplicate state '" + w[j] + "'");
            m.states.push_back(w[j]);
          }
        } else if (kw == "initial" && w.size() == 2) {
          m.initial = w[1];
        } else if (kw == "accepting") {
          for (std::size_t j = 1; j < w.size(); ++j) m.accepting.insert(w[j]);
        } else if (kw == "tapes" && w.size() == 2 && m.kind == MachineKind::Ram) {
          const unsigned k = static_cast<unsigned>(std::stoul(w[1]));
          m.tapes.push_back({"input", TapeRole::Input, "", 0});
          m.tapes.push_back({"index", TapeRole::Index, "", 0});
          for (unsigned j = 1; j <= k; ++j) m.tapes.push_back({"work" + std::to_string(j), TapeRole::Work, "", 0});
          have_tapes = true;
        } else if (m.kind == MachineKind::Dam && kw == "rel" && w.size() == 2) {
          auto [name, arity] = name_arity(ln, w[1]);
          m.vocab.add_relation(name, arity);
        } else if (m.kind == MachineKind::Dam && kw == "fun" && w.size() == 2) {
          auto [name, arity] = name_arity(ln, w[1]);
          m.vocab.add_function(name, arity);
        } else if (m.kind == MachineKind::Dam && kw == "const" && w.size() == 2) {
          m.vocab.add_constant(w[1]);
        } else if (m.kind == MachineKind::Dam && kw == "tape" && w.size() >= 3) {
          m.tapes.push_back(tape_decl(ln, w));
          have_tapes = true;
        } else {
          fail(ln, "unrecognized declaration '" + ln.text + "'");
        }
      } catch (const DomainError& e) {
        fail(ln, e.what());
      } catch (const std::invalid_argument&) {
        fail(ln, "expected a number");
      }
    }
    if (m.states.empty()) fail(lines_[0], "machine declares no states");
    if (m.initial.empty()) fail(lines_[0], "machine declares no initial state");
    if (!have_tapes) fail(lines_[0], "machine declares no tapes");
    // Address tapes may precede their symbol's declaration; settle roles now.
    for (auto& t : m.tapes)
      if (t.role == TapeRole::RelAddr) {
        const Symbol* s = m.vocab.find(t.symbol);
        if (s && s->kind == SymbolKind::Function) t.role = TapeRole::FunAddr;
      }
    for (const Line* ln : transitions) m.rules.push_back(rule(*ln, m));
    auto problems = validate_machine(m);
    if (!problems.empty()) {
      // Rule problems start with "line N:"; point the span there.
      unsigned no = 0;
      if (problems[0].rfind("line ", 0) == 0) no = static_cast<unsigned>(std::stoul(problems[0].substr(5)));
      for (const auto& l : lines_)
        if (l.number == no) fail(l, problems[0]);
      fail(lines_[0], problems[0]);
    }
    return m;
  }

 private:
  [[noreturn]] void fail(const Line& ln, const std::string& msg) const {
    SourceSpan sp;
    sp.start = ln.offset;
    sp.end = ln.offset + ln.text.size();
    sp.line = ln.number;
    sp.column = 1;
    throw ParseError(msg, sp);
  }

  std::pair<std::string, unsigned> name_arity(const Line& ln, const std::string& w) {
    auto slash = w.find('/');
    if (slash == std::string::npos) fail(ln, "expected Name/arity");
    return {w.substr(0, slash), static_cast<unsigned>(std::stoul(w.substr(slash + 1)))};
  }

  TapeDecl tape_decl(const Line& ln, const std::vector<std::string>& w) {
    TapeDecl d;
    d.name = w[1];
    const std::string& role = w[2];
    if (role == "addr" && w.size() == 5) {
      d.symbol = w[3];
      d.position = static_cast<unsigned>(std::stoul(w[4]));
      d.role = TapeRole::RelAddr;  // FunAddr once the symbol is known
    } else if (role == "value" && w.size() == 4) {
      d.role = TapeRole::Value;
      d.symbol = w[3];
    } else if (role == "const" && w.size() == 4) {
      d.role = TapeRole::Const;
      d.symbol = w[3];
    } else if (role == "size" && w.size() == 3) {
      d.role = TapeRole::Size;
    } else if (role == "work" && w.size() == 3) {
      d.role = TapeRole::Work;
    } else {
      fail(ln, "malformed tape declaration");
    }
    return d;
  }

  static bool move_of(const std::string& s, Move& mv) {
    if (s == "L") mv = Move::L;
    else if (s == "R") mv = Move::R;
    else if (s == "S") mv = Move::S;
    else return false;
    return true;
  }

  Rule rule(const Line& ln, const MachineSpec& m) {
    const auto arrow = ln.text.find("->");
    auto lhs = split_top(ln.text.substr(0, arrow));
    auto rhs = split_top(ln.text.substr(arrow + 2));
    Rule r;
    r.line = static_cast<int>(ln.number);
    r.state = lhs[0];
    r.next = rhs[0];
    const std::size_t ntapes = m.tapes.size();
    const std::size_t nrels = m.kind == MachineKind::Dam ? m.vocab.of_kind(SymbolKind::Relation).size() : 0;
    const std::size_t want_reads = ntapes + nrels;
    if (lhs.size() != 1 + want_reads)
      fail(ln, "expected " + std::to_string(want_reads) + " read symbols, found " + std::to_string(lhs.size() - 1));
    for (std::size_t i = 0; i < ntapes; ++i) {
      if (lhs[1 + i].size() != 1) fail(ln, "read symbol '" + lhs[1 + i] + "' is not a single character");
      r.reads.push_back(lhs[1 + i][0]);
    }
    for (std::size_t i = 0; i < nrels; ++i) {
      const auto& a = lhs[1 + ntapes + i];
      if (a != "0" && a != "1" && a != "*") fail(ln, "answer bit must be 0, 1 or *");
      r.answers.push_back(a[0]);
    }
    const std::size_t first_action = m.kind == MachineKind::Ram ? 1 : 0;
    if (rhs.size() != 1 + ntapes - first_action)
      fail(ln, "expected " + std::to_string(ntapes - first_action) + " tape actions, found " +
                   std::to_string(rhs.size() - 1));
    if (first_action) r.actions.push_back(Action{kAny, Move::S});
    for (std::size_t i = first_action; i < ntapes; ++i) {
      const std::string& a = rhs[1 + i - first_action];
      Action act;
      if (!a.empty() && a.front() == '(') {
        if (a.back() != ')') fail(ln, "unbalanced action '" + a + "'");
        auto parts = split_top(a.substr(1, a.size() - 2));
        if (parts.size() != 2 || parts[0].size() != 1 || !move_of(parts[1], act.move))
          fail(ln, "malformed action '" + a + "'");
        act.write = parts[0][0];
        if (!is_writable(m.tapes[i].role)) fail(ln, "tape " + m.tapes[i].name + " is read-only; give only a move");
      } else {
        if (!move_of(a, act.move)) fail(ln, "malformed action '" + a + "'");
        if (is_writable(m.tapes[i].role))
          fail(ln, "tape " + m.tapes[i].name + " is writable; give (symbol,move)");
      }
      r.actions.push_back(act);
    }
    return r;
  }

  std::vector<Line> lines_;
};

char move_char(Move m) { return m == Move::L ? 'L' : m == Move::R ? 'R' : 'S'; }

}  // namespace

MachineSpec parse_machine(std::string_view text) {
  MachineParser p(text);
  return p.parse();
}

std::string render_machine(const MachineSpec& m) {
  std::ostringstream out;
  out << "machine " << (m.kind == MachineKind::Ram ? "ram" : "dam") << "\n";
  if (m.kind == MachineKind::Dam) {
    for (const auto& s : m.vocab.symbols()) {
      switch (s.kind) {
        case SymbolKind::Relation: out << "rel " << s.name << "/" << s.arity << "\n"; break;
        case SymbolKind::Function: out << "fun " << s.name << "/" << s.arity << "\n"; break;
        case SymbolKind::Constant: out << "const " << s.name << "\n"; break;
      }
    }
  }
  out << "states";
  for (const auto& q : m.states) out << " " << q;
  out << "\ninitial " << m.initial << "\naccepting";
  for (const auto& q : m.accepting) out << " " << q;
  out << "\n";
  if (m.kind == MachineKind::Ram) {
    out << "tapes " << m.work_tape_count() << "\n";
  } else {
    for (const auto& t : m.tapes) {
      out << "tape " << t.name << " ";
      switch (t.role) {
        case TapeRole::RelAddr:
        case TapeRole::FunAddr: out << "addr " << t.symbol << " " << t.position; break;
        case TapeRole::Value: out << "value " << t.symbol; break;
        case TapeRole::Const: out << "const " << t.symbol; break;
        case TapeRole::Size: out << "size"; break;
        default: out << "work"; break;
      }
      out << "\n";
    }
  }
  for (const auto& r : m.rules) {
    out << r.state;
    for (char c : r.reads) out << ", " << c;
    for (char c : r.answers) out << ", " << c;
    out << " -> " << r.next;
    for (std::size_t i = m.kind == MachineKind::Ram ? 1 : 0; i < m.tapes.size(); ++i) {
      const auto& a = r.actions[i];
      if (is_writable(m.tapes[i].role))
        out << ", (" << a.write << "," << move_char(a.move) << ")";
      else
        out << ", " << move_char(a.move);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace idxlog
