#include "idxlog/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "idxlog/evaluator.hpp"
#include "idxlog/library.hpp"
#include "idxlog/oracles.hpp"
#include "idxlog/parser.hpp"

namespace idxlog {

namespace {

void count_case(DifferentialReport& rep, bool ok, const std::string& what) {
  ++rep.cases;
  if (ok) return;
  ++rep.mismatches;
  if (rep.first_failure.empty()) rep.first_failure = what;
}

std::string fixed(double x, int digits = 2) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

Vocabulary unary_p() {
  Vocabulary v;
  v.add_relation("P", 1);
  return v;
}

Vocabulary binary_r() {
  Vocabulary v;
  v.add_relation("R", 2);
  return v;
}

BitString bits_of(std::uint64_t value, unsigned length) {
  BitString b;
  for (unsigned i = 0; i < length; ++i) b.bits.push_back((value >> i) & 1);
  return b;
}

}  // namespace

DifferentialReport suite_bit_validity(std::uint64_t n_min, std::uint64_t n_max) {
  DifferentialReport rep;
  rep.name = "bit-validity";
  const PreparedFormula p(bit_validity_sentence(), bit_validity_vocabulary());
  for (std::uint64_t n = n_min; n <= n_max; ++n)
    for (std::uint64_t c = 0; c < n; ++c) {
      Structure s(bit_validity_vocabulary(), n);
      s.set_constant("c", c);
      count_case(rep, eval_formula(p, s).value, "false at n=" + std::to_string(n) + ", c=" + std::to_string(c));
    }
  return rep;
}

DifferentialReport suite_binary_search(std::uint64_t count, std::uint64_t n_min, std::uint64_t n_max,
                                       std::uint64_t seed) {
  DifferentialReport rep;
  rep.name = "binary-search";
  const PreparedFormula p(binary_search_sentence(), search_vocabulary());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> size(n_min, n_max);
  std::uint64_t found = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const Structure s = random_sorted_array(size(rng), rng);
    const bool want = search_oracle(s);
    found += want;
    count_case(rep, eval_formula(p, s).value == want, "disagrees with the oracle on\n" + render_structure(s));
  }
  rep.note = std::to_string(found) + " with the key present";
  return rep;
}

DifferentialReport suite_ifp_lfp(std::uint64_t n_max) {
  DifferentialReport rep;
  rep.name = "ifp-lfp";
  const Vocabulary v = graph_vocabulary();
  std::vector<std::pair<PreparedFormula, PreparedFormula>> pairs;
  std::vector<std::string> texts = positive_corpus_text();
  for (const auto& text : texts) {
    auto lfp = parse_formula(text, v);
    auto ifp = relabel_fixpoints(relabel_fixpoints(lfp, FpKind::LFP, FpKind::IFP), FpKind::SLFP, FpKind::SIFP);
    pairs.emplace_back(PreparedFormula(lfp, v), PreparedFormula(ifp, v));
  }
  std::uint64_t holds = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n)
    for_each_structure(v, n, [&](const Structure& s) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const bool a = eval_formula(pairs[i].first, s).value;
        holds += a;
        count_case(rep, a == eval_formula(pairs[i].second, s).value, texts[i] + " on\n" + render_structure(s));
      }
      return true;
    });
  rep.note = std::to_string(texts.size()) + " sentences, " + std::to_string(holds) + " true";
  return rep;
}

DifferentialReport suite_pfp_counting(std::uint64_t n_max) {
  DifferentialReport rep;
  rep.name = "pfp-counting";
  const Vocabulary v = graph_vocabulary();
  std::vector<FixComponent> comps;
  const auto texts = pfp_corpus_text();
  for (const auto& text : texts) comps.push_back({{"i"}, "X", parse_formula(text, v)});
  std::uint64_t diverged = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n)
    for_each_structure(v, n, [&](const Structure& s) {
      // a unary stage sequence that settles does so within 2^|Num(A)| stages
      EvalOptions plain;
      plain.cycle_detection = false;
      plain.max_stages = (std::uint64_t{1} << s.num_bound()) + 1;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const RelValue want = oracle::pfp_by_counting(comps[i], s);
        const auto fast = compute_fixpoint(FpKind::PFP, {comps[i]}, s);
        // without cycle detection a divergent sequence runs into the stage limit
        RelValue slow = RelValue::empty(1, s.num_bound());
        try {
          slow = compute_fixpoint(FpKind::PFP, {comps[i]}, s, {}, plain).result[0];
        } catch (const ResourceError&) {
        }
        diverged += fast.end != FixpointEnd::FixedPoint;
        const std::string where = texts[i] + " on\n" + render_structure(s);
        count_case(rep, fast.result[0] == want, "cycle detection: " + where);
        count_case(rep, slow == want, "plain iteration: " + where);
      }
      return true;
    });
  rep.note = std::to_string(diverged) + " divergent runs";
  return rep;
}

DifferentialReport suite_scaling(const ScalingPlan& plan) {
  DifferentialReport rep;
  rep.name = "scaling";
  auto judge = [&](const std::string& what, const PolylogFit& fit, double max_k) {
    const bool ok = fit.max_ratio <= plan.max_ratio && fit.k <= max_k;
    count_case(rep, ok, what + " fit exceeds the plan");
    rep.note += (rep.note.empty() ? "" : "; ") + what + ": c=" + fixed(fit.c) + " k=" + fixed(fit.k) +
                " ratio=" + fixed(fit.max_ratio);
  };
  const auto family = [](const std::string& name) -> StructureFamily {
    return [name](std::uint64_t n, std::mt19937_64& rng) { return make_family_member(name, n, rng); };
  };
  judge("bit-validity", measure_scaling(bit_validity_sentence(), family("bit-validity"), plan.sizes, plan.seed,
                                        plan.samples).fit,
        HUGE_VAL);
  judge("binary-search", measure_scaling(binary_search_sentence(), family("sorted-array"), plan.sizes, plan.seed,
                                         plan.samples).fit,
        HUGE_VAL);

  // Example 1: the worst step count among lengths with the same ceil(log L)
  const MachineSpec m = make_length_discovery_machine();
  std::map<unsigned, std::uint64_t> worst;
  double bound = 0;  // smallest c with steps <= c * ceil(log L)^2 everywhere
  for (std::uint64_t len = 2; len <= plan.max_length; ++len) {
    BitString in;
    in.bits.assign(len, false);
    const RunResult r = ram_run(m, in, Limits{});
    const unsigned lg = log_ceil(len);
    if (!r.accepted) count_case(rep, false, "Example 1 rejects length " + std::to_string(len));
    worst[lg] = std::max(worst[lg], r.steps);
    bound = std::max(bound, double(r.steps) / (double(lg) * lg));
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [lg, steps] : worst) points.emplace_back(lg, double(steps));
  judge("example-1", fit_polylog(points), plan.example_exponent);
  rep.note += " c2=" + fixed(bound);
  return rep;
}

DifferentialReport suite_compile(const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "compile";
  for (const auto& d : demo_dam_machines()) {
    SizePlan p = plan;
    p.exhaustive_limit = std::min(plan.exhaustive_limit, d.exhaustive_limit);
    p.samples = std::min(plan.samples, d.samples);
    auto ifp = compare_compiled(d.machine, compile_dam_to_ifp_sentence(d.machine, d.ifp_k), p);
    auto pfp = compare_compiled(d.machine, compile_dam_to_pfp_sentence(normalize_machine_for_pfp(d.machine),
                                                                       d.pfp_width), p);
    for (auto* r : {&ifp, &pfp}) {
      if (!r->first_failure.empty()) r->first_failure = d.name + " " + r->name + ": " + r->first_failure;
      r->note.clear();
      rep.merge(*r);
    }
  }
  return rep;
}

DifferentialReport suite_drop_order(const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "drop-order";
  for (const auto& text : order_corpus_text()) {
    auto r = compare_order_elimination(parse_formula(text, order_vocabulary()), order_vocabulary(), plan);
    if (!r.first_failure.empty()) r.first_failure = text + ": " + r.first_failure;
    rep.merge(r);
  }
  return rep;
}

DifferentialReport suite_drop_constants(const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "drop-constants";
  for (const auto& text : constant_corpus_text()) {
    auto r = compare_constant_elimination(parse_formula(text, constants_vocabulary()), constants_vocabulary(), plan);
    if (!r.first_failure.empty()) r.first_failure = text + ": " + r.first_failure;
    rep.merge(r);
  }
  return rep;
}

DifferentialReport suite_encoding(std::uint64_t vocabularies, std::uint64_t n_max, std::uint64_t seed) {
  DifferentialReport rep;
  rep.name = "encoding";
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  for (std::uint64_t i = 0; i < vocabularies; ++i) {
    Vocabulary v;
    const auto rels = pick(0, 3), consts = pick(0, 3), funs = pick(0, 2);
    for (std::uint64_t j = 0; j < rels; ++j) v.add_relation("R" + std::to_string(j), unsigned(pick(1, 2)));
    for (std::uint64_t j = 0; j < consts; ++j) v.add_constant("c" + std::to_string(j));
    for (std::uint64_t j = 0; j < funs; ++j) v.add_function("f" + std::to_string(j), unsigned(pick(1, 2)));
    const std::uint64_t n = pick(2, n_max);
    // n^r per relation, ceil(log n) per constant, ceil(log n) n^k per function
    const auto L = std::uint64_t(std::ceil(std::log2(double(n))));
    std::uint64_t want = consts * L;
    for (const auto& sym : v.symbols()) {
      const auto power = std::uint64_t(std::llround(std::pow(double(n), double(sym.arity))));
      if (sym.kind == SymbolKind::Relation) want += power;
      if (sym.kind == SymbolKind::Function) want += L * power;
    }
    const Structure s = random_structure(v, n, rng);
    const auto got = encode_structure(s).size();
    count_case(rep, got == want && encoding_length(v, n) == want,
               "length " + std::to_string(got) + " instead of " + std::to_string(want) + " at n=" + std::to_string(n));
  }
  // P = {i}, Q = {j}: the unit vectors e_i and e_j side by side
  Vocabulary pq;
  pq.add_relation("P", 1).add_relation("Q", 1);
  for (std::uint64_t k = 2; k <= 16; ++k)
    for (std::uint64_t i = 0; i < k; ++i)
      for (std::uint64_t j = 0; j < k; ++j) {
        if (i == j) continue;
        Structure s(pq, k);
        s.add_tuple("P", {Elem(i)});
        s.add_tuple("Q", {Elem(j)});
        std::string want(2 * k, '0');
        want[i] = want[k + j] = '1';
        const auto got = encode_structure(s).str();
        count_case(rep, got == want, got + " instead of " + want);
      }
  return rep;
}

DifferentialReport suite_model_equivalence(const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "model-equivalence";
  struct Pair {
    std::string name;
    MachineSpec ram, dam;
    Vocabulary vocab;
  };
  const std::vector<Pair> pairs = {
      {"even-n", make_ram_even_length(), make_dam_even_n(unary_p()), unary_p()},
      {"P(0)", make_ram_bit_probe(0), make_dam_unary_probe_zero(), unary_p()},
      // bit 1 of bin(A) is the tuple (0,1)
      {"R(0,1)", make_ram_bit_probe(1), make_dam_relation_probe(), binary_r()},
  };
  for (const auto& p : pairs)
    for_planned_structures(p.vocab, plan, [&](const Structure& s) {
      const BitString in = encode_structure(s);
      const RunResult a = ram_run(p.ram, in, Limits{});
      const RunResult b = dam_run(p.dam, s, Limits{});
      count_case(rep, a.accepted == b.accepted && a.halt != HaltReason::StepLimit && b.halt != HaltReason::StepLimit,
                 p.name + " on " + in.str());
    });
  return rep;
}

DifferentialReport suite_uninspected(std::uint64_t exhaustive_length, std::uint64_t random_inputs,
                                     std::uint64_t seed) {
  DifferentialReport rep;
  rep.name = "uninspected";
  struct Entry {
    MachineSpec m;
    AccessMode mode;
  };
  const std::vector<Entry> corpus = {
      {make_length_discovery_machine(), AccessMode::Random},
      {make_ram_even_length(), AccessMode::Random},
      {make_ram_bit_probe(0), AccessMode::Random},
      {make_ram_bit_probe(3), AccessMode::Random},
      {make_ram_even_length_sequential(), AccessMode::Sequential},
      {make_ram_bit_probe_sequential(3), AccessMode::Sequential},
  };
  std::vector<BitString> inputs;
  for (std::uint64_t len = 0; len <= exhaustive_length; ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) inputs.push_back(bits_of(v, unsigned(len)));
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < random_inputs; ++i) {
    BitString b;
    const auto len = std::uniform_int_distribution<std::uint64_t>(exhaustive_length + 1, 256)(rng);
    for (std::uint64_t j = 0; j < len; ++j) b.bits.push_back(rng() & 1);
    inputs.push_back(b);
  }
  for (std::size_t k = 0; k < corpus.size(); ++k)
    for (const auto& in : inputs)
      count_case(rep, flip_uninspected_check(corpus[k].m, in, Limits{}, corpus[k].mode),
                 "machine " + std::to_string(k) + " on " + in.str());

  // Example 1 on length 64 looks at a few positions only
  const MachineSpec ex1 = make_length_discovery_machine();
  std::size_t most = 0;
  for (std::uint64_t i = 0; i < random_inputs + 2; ++i) {
    BitString b;
    for (int j = 0; j < 64; ++j) b.bits.push_back(i == 0 ? false : i == 1 ? true : bool(rng() & 1));
    const RunResult r = ram_run(ex1, b, Limits{});
    most = std::max(most, r.inspected.size());
    count_case(rep, r.accepted && r.inspected.size() < 64, "Example 1 inspected all of " + b.str());
  }
  rep.note = "Example 1 inspects at most " + std::to_string(most) + " of 64 positions";
  return rep;
}

}  // namespace idxlog
