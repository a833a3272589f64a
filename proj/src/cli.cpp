#include "idxlog/cli.hpp"

#include <CLI11.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "idxlog/evaluator.hpp"
#include "idxlog/library.hpp"
#include "idxlog/parser.hpp"
#include "idxlog/suites.hpp"
#include "idxlog/transforms.hpp"

namespace idxlog {

namespace {

/// Thrown for malformed arguments that CLI11 itself cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(what + ": expected a number, got '" + text + "'");
  return v;
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_count(item, "--sizes"));
  if (out.empty()) throw UsageError("--sizes: empty list");
  return out;
}

Limits default_limits() {
  Limits l;
  if (const char* s = std::getenv("IDXLOG_MAX_STEPS")) l.steps = parse_count(s, "IDXLOG_MAX_STEPS");
  if (const char* s = std::getenv("IDXLOG_MAX_SPACE")) l.space = parse_count(s, "IDXLOG_MAX_SPACE");
  return l;
}

/// "rel E/2, const c, fun f/1"
Vocabulary parse_vocabulary_spec(const std::string& text) {
  Vocabulary v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::stringstream words(item);
    std::string kind, name;
    words >> kind >> name;
    if (kind.empty()) continue;
    if (kind == "const") {
      v.add_constant(name);
      continue;
    }
    const auto slash = name.find('/');
    if ((kind != "rel" && kind != "fun") || slash == std::string::npos)
      throw UsageError("--vocab: expected 'rel NAME/ARITY', 'const NAME' or 'fun NAME/ARITY', got '" + item + "'");
    const auto arity = unsigned(parse_count(name.substr(slash + 1), "--vocab arity"));
    if (kind == "rel")
      v.add_relation(name.substr(0, slash), arity);
    else
      v.add_function(name.substr(0, slash), arity);
  }
  return v;
}

BitString read_input(const std::string& arg) {
  if (arg.find_first_not_of("01") == std::string::npos) return BitString::parse(arg);
  return encode_structure(parse_structure(read_file(arg)));
}

void print_trace_line(std::ostream& out, const TraceLine& t) {
  out << "step=" << t.step << " state=" << t.state << " heads=";
  for (std::size_t i = 0; i < t.heads.size(); ++i) out << (i ? "," : "") << t.heads[i];
  out << " tapes=";
  for (std::size_t i = 0; i < t.tapes.size(); ++i) out << (i ? "|" : "") << t.tapes[i];
  out << "\n";
}

int report_run(const RunResult& r, std::ostream& out) {
  out << RunResult::csv_header() << "\n" << r.csv_row() << "\n";
  switch (r.halt) {
    case HaltReason::Accept: return kExitTrue;
    case HaltReason::NoTransition: return kExitFalse;
    case HaltReason::StepLimit:
    case HaltReason::SpaceLimit: return kExitLimit;
    case HaltReason::Fault: break;
  }
  throw MachineError(r.fault);
}

// ---------------------------------------------------------------- check

template <class T>
T get(const boost::property_tree::ptree& sec, const std::string& key, T fallback) {
  return sec.get<T>(key, fallback);
}

SizePlan size_plan(const boost::property_tree::ptree& sec, SizePlan p) {
  p.n_min = get(sec, "n_min", p.n_min);
  p.n_max = get(sec, "n_max", p.n_max);
  p.exhaustive_limit = get(sec, "exhaustive_limit", p.exhaustive_limit);
  p.samples = get(sec, "samples", p.samples);
  p.seed = get(sec, "seed", p.seed);
  return p;
}

using SuiteRunner = std::function<DifferentialReport(const boost::property_tree::ptree&)>;

const std::map<std::string, SuiteRunner>& suite_table() {
  static const std::map<std::string, SuiteRunner> table = {
      {"bit-validity",
       [](const auto& s) { return suite_bit_validity(get<std::uint64_t>(s, "n_min", 2), get<std::uint64_t>(s, "n_max", 32)); }},
      {"binary-search",
       [](const auto& s) {
         return suite_binary_search(get<std::uint64_t>(s, "count", 500), get<std::uint64_t>(s, "n_min", 4),
                                    get<std::uint64_t>(s, "n_max", 64), get<std::uint64_t>(s, "seed", 1));
       }},
      {"ifp-lfp", [](const auto& s) { return suite_ifp_lfp(get<std::uint64_t>(s, "n_max", 4)); }},
      {"pfp-counting", [](const auto& s) { return suite_pfp_counting(get<std::uint64_t>(s, "n_max", 4)); }},
      {"scaling",
       [](const auto& s) {
         ScalingPlan p;
         if (auto sizes = s.template get_optional<std::string>("sizes")) p.sizes = parse_sizes(*sizes);
         p.samples = get(s, "samples", p.samples);
         p.max_length = get(s, "max_length", p.max_length);
         p.max_ratio = get(s, "max_ratio", p.max_ratio);
         p.example_exponent = get(s, "example_exponent", p.example_exponent);
         p.seed = get(s, "seed", p.seed);
         return suite_scaling(p);
       }},
      {"compile", [](const auto& s) { return suite_compile(size_plan(s, SizePlan{2, 12, 1 << 16, 200, 1})); }},
      {"drop-order", [](const auto& s) { return suite_drop_order(size_plan(s, SizePlan{2, 4, 1 << 20, 0, 1})); }},
      {"drop-constants",
       [](const auto& s) { return suite_drop_constants(size_plan(s, SizePlan{2, 6, 1 << 16, 0, 1})); }},
      {"encoding",
       [](const auto& s) {
         return suite_encoding(get<std::uint64_t>(s, "vocabularies", 1000), get<std::uint64_t>(s, "n_max", 16),
                               get<std::uint64_t>(s, "seed", 1));
       }},
      {"model-equivalence",
       [](const auto& s) { return suite_model_equivalence(size_plan(s, SizePlan{2, 16, 1 << 16, 500, 1})); }},
      {"uninspected",
       [](const auto& s) {
         return suite_uninspected(get<std::uint64_t>(s, "exhaustive_length", 8),
                                  get<std::uint64_t>(s, "random_inputs", 200), get<std::uint64_t>(s, "seed", 1));
       }},
  };
  return table;
}

int run_check(const std::string& path, std::ostream& out) {
  boost::property_tree::ptree manifest;
  std::istringstream in(read_file(path));
  try {
    boost::property_tree::read_ini(in, manifest);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  if (manifest.empty()) throw std::runtime_error(path + ": no suites listed");
  for (const auto& [name, sec] : manifest)
    if (!suite_table().count(name)) throw std::runtime_error(path + ": unknown suite '" + name + "'");
  std::size_t failed = 0;
  for (const auto& [name, sec] : manifest) {
    const DifferentialReport rep = suite_table().at(name)(sec);
    failed += !rep.ok();
    out << (rep.ok() ? "ok   " : "FAIL ") << rep.summary() << "\n" << std::flush;
  }
  out << manifest.size() - failed << "/" << manifest.size() << " suites passed\n";
  return failed ? kExitFalse : kExitTrue;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index logic model checker, machine simulator and translator", "idxlog"};
  app.require_subcommand(1);

  std::string formula_path, structure_path, machine_path, input, family, sizes = "16,64,256,1024,4096";
  std::string vocab_spec, symbols_path;
  std::vector<std::string> vals;
  bool cost = false, sequential = false, trace = false, drop_order = false, drop_constants = false, pfp = false;
  unsigned ifp_k = 0, width = 1, samples = 1;
  std::uint64_t seed = 1;
  Limits limits = default_limits();

  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--steps", limits.steps, "step limit");
    sub->add_option("--space", limits.space, "cells per tape limit");
    sub->add_flag("--trace", trace, "print every configuration");
  };

  auto* eval = app.add_subcommand("eval", "evaluate a sentence on a structure");
  eval->add_option("formula", formula_path, ".il file")->required();
  eval->add_option("structure", structure_path, ".struct file")->required();
  eval->add_option("--val", vals, "free variable binding, x=3 or #i=2");
  eval->add_flag("--cost", cost, "print the cost counters");

  auto* run_ram = app.add_subcommand("run-ram", "run a random-access machine");
  run_ram->add_option("machine", machine_path, ".tm file")->required();
  run_ram->add_option("--input", input, "bit string or .struct file (encoded)")->required();
  run_ram->add_flag("--sequential", sequential, "sequential input access");
  add_limits(run_ram);

  auto* run_dam = app.add_subcommand("run-dam", "run a direct-access machine on a structure");
  run_dam->add_option("machine", machine_path, ".tm file")->required();
  run_dam->add_option("structure", structure_path, ".struct file")->required();
  add_limits(run_dam);

  auto* encode = app.add_subcommand("encode", "print bin(A)");
  encode->add_option("structure", structure_path, ".struct file")->required();

  auto* translate = app.add_subcommand("translate", "remove order or constants from a sentence");
  translate->add_option("formula", formula_path, ".il file")->required();
  auto* o_order = translate->add_flag("--drop-order", drop_order, "eliminate <= between domain terms");
  auto* o_const = translate->add_flag("--drop-constants", drop_constants, "replace constants by unary relations");
  o_order->excludes(o_const);
  auto* o_vocab = translate->add_option("--vocab", vocab_spec, "e.g. \"rel E/2, const c, fun f/1\"");
  auto* o_struct = translate->add_option("--structure", structure_path, "take the vocabulary from a .struct file");
  o_vocab->excludes(o_struct);

  auto* compile = app.add_subcommand("compile", "compile a direct-access machine into a sentence");
  compile->add_option("machine", machine_path, ".tm file")->required();
  auto* o_ifp = compile->add_option("--ifp", ifp_k, "IFP sentence with time exponent k")->check(CLI::PositiveNumber);
  auto* o_pfp = compile->add_flag("--pfp", pfp, "PFP sentence");
  o_ifp->excludes(o_pfp);
  compile->add_option("--width", width, "tape-position width for --pfp")->check(CLI::PositiveNumber);
  compile->add_option("--symbols", symbols_path, "write the symbol table here instead of as comments");

  auto* bench = app.add_subcommand("bench", "evaluator cost over a structure family, as CSV");
  bench->add_option("formula", formula_path, ".il file")->required();
  bench->add_option("--family", family, "structure family")->required()->check(CLI::IsMember(family_names()));
  bench->add_option("--sizes", sizes, "comma-separated domain sizes");
  bench->add_option("--samples", samples, "structures per size; the worst is kept")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "generator seed");

  auto* check = app.add_subcommand("check", "run the suites listed in an INI manifest");
  std::string manifest_path;
  check->add_option("manifest", manifest_path, "manifest file")->required();

  std::vector<std::string> argv_store{"idxlog"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const TraceSink sink = [&](const TraceLine& t) { print_trace_line(out, t); };

    if (eval->parsed()) {
      const Structure s = parse_structure(read_file(structure_path));
      const auto f = parse_formula_unchecked(read_file(formula_path), s.vocabulary());
      Valuation val;
      for (const auto& b : vals) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--val: expected NAME=VALUE, got '" + b + "'");
        const auto value = parse_count(b.substr(eq + 1), "--val");
        val = b[0] == '#' ? val.bind_n(b.substr(1, eq - 1), value) : val.bind_v(b.substr(0, eq), value);
      }
      const auto r = eval_formula(f, s, val);
      out << (r.value ? "true" : "false") << "\n";
      if (cost) out << r.cost.summary() << "\n";
      return r.value ? kExitTrue : kExitFalse;
    }
    if (run_ram->parsed()) {
      const auto m = parse_machine(read_file(machine_path));
      const auto in = read_input(input);
      return report_run(ram_run(m, in, limits, sequential ? AccessMode::Sequential : AccessMode::Random,
                                trace ? sink : TraceSink{}),
                        out);
    }
    if (run_dam->parsed()) {
      const auto m = parse_machine(read_file(machine_path));
      const auto s = parse_structure(read_file(structure_path));
      return report_run(dam_run(m, s, limits, trace ? sink : TraceSink{}), out);
    }
    if (encode->parsed()) {
      out << encode_structure(parse_structure(read_file(structure_path))).str() << "\n";
      return kExitTrue;
    }
    if (translate->parsed()) {
      if (!drop_order && !drop_constants) throw UsageError("translate needs --drop-order or --drop-constants");
      Vocabulary v;
      if (!structure_path.empty())
        v = parse_structure(read_file(structure_path)).vocabulary();
      else
        v = parse_vocabulary_spec(vocab_spec);
      const auto f = parse_formula(read_file(formula_path), v);
      if (drop_order) {
        out << render_formula(eliminate_order(f, v)) << "\n";
      } else {
        const auto e = eliminate_constants(f, v);
        for (const auto& [c, r] : e.relation) out << "// " << c << " -> " << r << "\n";
        out << render_formula(e.sentence) << "\n";
      }
      return kExitTrue;
    }
    if (compile->parsed()) {
      if (!ifp_k && !pfp) throw UsageError("compile needs --ifp K or --pfp");
      const auto m = parse_machine(read_file(machine_path));
      const auto a = ifp_k ? compile_dam_to_ifp_sentence(m, ifp_k)
                           : compile_dam_to_pfp_sentence(normalize_machine_for_pfp(m), width);
      if (!symbols_path.empty()) {
        std::ofstream file(symbols_path);
        file << a.symbol_table();
        if (!file) throw std::runtime_error("cannot write " + symbols_path);
      } else {
        std::istringstream table(a.symbol_table());
        for (std::string line; std::getline(table, line);) out << "// " << line << "\n";
      }
      out << render_formula(a.sentence) << "\n";
      return kExitTrue;
    }
    if (bench->parsed()) {
      const auto size_list = parse_sizes(sizes);
      std::mt19937_64 probe(seed);
      const Vocabulary v = make_family_member(family, 2, probe).vocabulary();
      const auto f = parse_formula(read_file(formula_path), v);
      const StructureFamily fam = [&](std::uint64_t n, std::mt19937_64& rng) {
        return make_family_member(family, n, rng);
      };
      const auto table = measure_scaling(f, fam, size_list, seed, samples);
      out << table.csv();
      err << "fit: c=" << table.fit.c << " k=" << table.fit.k << " max_ratio=" << table.fit.max_ratio << "\n";
      return kExitTrue;
    }
    if (check->parsed()) return run_check(manifest_path, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error at " << e.what() << "\n";
    return kExitInput;
  } catch (const IllFormed& e) {
    err << "ill-formed: " << e.what() << "\n";
    return kExitInput;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace idxlog
