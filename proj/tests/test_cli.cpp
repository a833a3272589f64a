#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idxlog/cli.hpp"
#include "idxlog/library.hpp"
#include "idxlog/machines.hpp"
#include "idxlog/parser.hpp"
#include "idxlog/transforms.hpp"

using namespace idxlog;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(IDXLOG_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("idxlog_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, EncodePq3) {
  auto r = run({"encode", data("pq3.struct")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "100001\n");
}

TEST(Cli, BitValiditySentenceIsTrue) {
  for (const char* s : {"const11.struct"}) {
    auto r = run({"eval", data("bit_validity.il"), data(s)});
    EXPECT_EQ(r.code, kExitTrue) << r.err;
    EXPECT_EQ(r.out, "true\n");
  }
  auto r = run({"eval", data("bit_validity.il"), data("const11.struct"), "--cost"});
  EXPECT_NE(r.out.find("aggregate="), std::string::npos);
}

TEST(Cli, FalseSentenceExitsOne) {
  auto f = temp_file("false.il", "EX x = index{#i : ZERO(#i)}. P(x)");
  auto r = run({"eval", f, data("pq3.struct")});
  EXPECT_EQ(r.code, kExitFalse);
  EXPECT_EQ(r.out, "false\n");
}

TEST(Cli, ValuationFlags) {
  auto f = temp_file("open.il", "Q(x) & ZERO(#i)");
  EXPECT_EQ(run({"eval", f, data("pq3.struct"), "--val", "x=2", "--val", "#i=0"}).code, kExitTrue);
  EXPECT_EQ(run({"eval", f, data("pq3.struct"), "--val", "x=1", "--val", "#i=0"}).code, kExitFalse);
  EXPECT_EQ(run({"eval", f, data("pq3.struct"), "--val", "x"}).code, kExitUsage);
}

TEST(Cli, MalformedFormulaReportsSpan) {
  auto f = temp_file("bad.il", "EX x = index{#i : ZERO(#i)}.\n  P(x) &");
  auto r = run({"eval", f, data("pq3.struct")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("parse error at 2:"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"encode"}).code, kExitUsage);
  EXPECT_EQ(run({"compile", data("even_n.tm")}).code, kExitUsage);
  EXPECT_EQ(run({"compile", data("even_n.tm"), "--ifp", "1", "--pfp"}).code, kExitUsage);
  EXPECT_EQ(run({"translate", data("bit_validity.il"), "--vocab", "const c"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitTrue);
  EXPECT_EQ(run({"encode", "/nonexistent/file.struct"}).code, kExitInput);
}

TEST(Cli, RunRamExampleOne) {
  auto r = run({"run-ram", data("example1.tm"), "--input", "00000"});
  EXPECT_EQ(r.code, kExitTrue);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), RunResult::csv_header());
  // a structure file is encoded first: pq3 is six bits long
  auto even = run({"run-ram", data("even_length.tm"), "--input", data("pq3.struct")});
  EXPECT_EQ(even.code, kExitTrue) << even.err;
  EXPECT_EQ(run({"run-ram", data("even_length.tm"), "--input", "101"}).code, kExitFalse);
}

TEST(Cli, StepLimitExitsFour) {
  EXPECT_EQ(run({"run-ram", data("example1.tm"), "--input", "0000000", "--steps", "3"}).code, kExitLimit);
  setenv("IDXLOG_MAX_STEPS", "3", 1);
  EXPECT_EQ(run({"run-ram", data("example1.tm"), "--input", "0000000"}).code, kExitLimit);
  unsetenv("IDXLOG_MAX_STEPS");
}

TEST(Cli, TraceHasOneLinePerConfiguration) {
  auto r = run({"run-ram", data("example1.tm"), "--input", "01", "--trace"});
  const auto m = parse_machine(read_file(data("example1.tm")));
  const auto steps = ram_run(m, BitString::parse("01"), Limits{}).steps;
  std::size_t lines = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) lines += l.rfind("step=", 0) == 0;
  EXPECT_EQ(lines, steps + 1);
}

TEST(Cli, RunDam) {
  EXPECT_EQ(run({"run-dam", data("relation_probe.tm"), data("graph4.struct")}).code, kExitTrue);
  EXPECT_EQ(run({"run-dam", data("even_n.tm"), temp_file("n3.struct", "domain 3\n")}).code, kExitFalse);
}

TEST(Cli, CompileProducesParseableSentence) {
  auto r = run({"compile", data("relation_probe.tm"), "--ifp", "1"});
  ASSERT_EQ(r.code, kExitTrue) << r.err;
  EXPECT_EQ(r.out.rfind("// ", 0), 0u);
  auto f = temp_file("compiled.il", r.out);
  EXPECT_EQ(run({"eval", f, data("graph4.struct")}).code, kExitTrue);

  auto symbols = (std::filesystem::temp_directory_path() / "idxlog_cli_symbols.tsv").string();
  auto p = run({"compile", data("even_n.tm"), "--pfp", "--symbols", symbols});
  ASSERT_EQ(p.code, kExitTrue) << p.err;
  EXPECT_EQ(p.out.find("//"), std::string::npos);
  EXPECT_NE(read_file(symbols).find("Acc\tacceptance"), std::string::npos);
  EXPECT_EQ(run({"eval", temp_file("pfp.il", p.out), temp_file("n4.struct", "domain 4\n")}).code, kExitTrue);
}

TEST(Cli, Translate) {
  auto order = temp_file("order.il", "EX x = index{#a : ZERO(#a)}. EX y = index{#b : TOP(#b)}. x <= y & E(x, y)");
  auto r = run({"translate", "--drop-order", order, "--vocab", "rel E/2"});
  ASSERT_EQ(r.code, kExitTrue) << r.err;
  Vocabulary e;
  e.add_relation("E", 2);
  EXPECT_FALSE(compares_domain_terms(parse_formula(r.out, e)));

  auto consts = temp_file("consts.il", "EX x = index{#i : ZERO(#i)}. c = x");
  auto c = run({"translate", "--drop-constants", consts, "--vocab", "const c, const d"});
  ASSERT_EQ(c.code, kExitTrue) << c.err;
  EXPECT_NE(c.out.find("// c -> C"), std::string::npos);
  EXPECT_NE(c.out.find("C(x)"), std::string::npos);

  EXPECT_EQ(run({"translate", "--drop-order", order, "--vocab", "rel E"}).code, kExitUsage);
  EXPECT_EQ(run({"translate", "--drop-constants", order, "--vocab", "rel E/2"}).code, kExitInput);
}

TEST(Cli, BenchIsDeterministicCsv) {
  auto a = run({"bench", data("bit_validity.il"), "--family", "bit-validity", "--sizes", "16,64", "--seed", "3"});
  auto b = run({"bench", data("bit_validity.il"), "--family", "bit-validity", "--sizes", "16,64", "--seed", "3"});
  ASSERT_EQ(a.code, kExitTrue) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("n,steps,log_n,fit_residual\n", 0), 0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 3);
  EXPECT_EQ(run({"bench", data("bit_validity.il"), "--family", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"bench", data("bit_validity.il"), "--family", "empty", "--sizes", "4,x"}).code, kExitUsage);
}

TEST(Cli, CheckManifest) {
  auto m = temp_file("small.ini", "[bit-validity]\nn_max = 8\n[encoding]\nvocabularies = 20\n");
  auto r = run({"check", m});
  EXPECT_EQ(r.code, kExitTrue) << r.out << r.err;
  EXPECT_NE(r.out.find("2/2 suites passed"), std::string::npos);
  EXPECT_EQ(run({"check", temp_file("unknown.ini", "[nope]\n")}).code, kExitInput);
  // an Example 1 exponent bound of zero cannot hold
  auto strict = temp_file("strict.ini", "[scaling]\nsizes = 16,32\nsamples = 1\nmax_length = 64\nexample_exponent = 0\n");
  EXPECT_EQ(run({"check", strict}).code, kExitFalse);
}

TEST(Data, SamplesMatchTheLibrary) {
  EXPECT_EQ(render_machine(parse_machine(read_file(data("example1.tm")))),
            render_machine(make_length_discovery_machine()));
  EXPECT_EQ(render_machine(parse_machine(read_file(data("even_n.tm")))), render_machine(make_dam_even_n()));
  EXPECT_EQ(render_machine(parse_machine(read_file(data("relation_probe.tm")))),
            render_machine(make_dam_relation_probe()));
  EXPECT_EQ(render_machine(parse_machine(read_file(data("function_probe.tm")))),
            render_machine(make_dam_function_probe()));
  EXPECT_EQ(render_machine(parse_machine(read_file(data("even_length.tm")))), render_machine(make_ram_even_length()));
  EXPECT_EQ(render_formula(parse_formula(read_file(data("bit_validity.il")), bit_validity_vocabulary())),
            render_formula(bit_validity_sentence()));
  EXPECT_EQ(render_formula(parse_formula(read_file(data("search.il")), search_vocabulary())),
            render_formula(binary_search_sentence()));
  for (const char* s : {"pq3.struct", "const11.struct", "graph4.struct", "sorted16.struct"})
    EXPECT_NO_THROW(parse_structure(read_file(data(s)))) << s;
  EXPECT_EQ(run({"check", data("suite.ini")}).code, kExitTrue);
}
