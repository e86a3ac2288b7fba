#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "permutope/io.hpp"
#include "permutope/iso.hpp"

using namespace permutope;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(PERMUTOPE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  CliRun r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void expect_roundtrip(const Verdict& v, const RatMatrix& a, const RatMatrix& b) {
  const std::string text = verdict_to_json(v);
  EXPECT_EQ(text.find('\n'), std::string::npos);
  const Verdict back = verdict_from_json(text);
  EXPECT_EQ(verdict_to_json(back), text);
  const auto check = verify_witness(back, a, b);
  EXPECT_TRUE(check.ok) << check.detail;
}

}  // namespace

TEST(Parse, GraphFiles) {
  const Graph c4 = read_graph_file(fixture("c4.g"));
  EXPECT_EQ(c4.n, 4u);
  EXPECT_FALSE(c4.directed);
  EXPECT_EQ(c4.edge_count(), 4u);
  const Graph d = read_graph_file(fixture("dtri_loop.g"));
  EXPECT_TRUE(d.directed);
  std::istringstream in("# comment\n\nn 3   # trailing\n0 1\n  2 1 # edge\n");
  const Graph g = parse_graph(in);
  EXPECT_EQ(g.edges, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
  EXPECT_THROW(read_graph_file(fixture("missing.g")), std::runtime_error);
}

TEST(Parse, MatrixFiles) {
  const RatMatrix a = read_matrix_file(fixture("inc_a.m"));
  EXPECT_EQ(a, (RatMatrix{{1, 1, 0}, {0, 1, 1}}));
  std::istringstream in("2 2\n1/2 -3\n0 4/6\n");
  EXPECT_EQ(parse_matrix(in), (RatMatrix{{Rat(1, 2), -3}, {0, Rat(2, 3)}}));
}

TEST(Parse, MalformedFilesReportLine) {
  const std::vector<std::pair<std::string, std::size_t>> graphs{
      {"out_of_range.g", 3}, {"duplicate.g", 3},    {"no_header.g", 2},   {"three_tokens.g", 2},
      {"not_a_number.g", 3}, {"undirected_loop.g", 2}, {"bad_header.g", 1}, {"negative_count.g", 1}};
  for (const auto& [name, line] : graphs) {
    try {
      read_graph_file(fixture("malformed/" + name));
      ADD_FAILURE() << name << " parsed";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << name << ": " << e.what();
      EXPECT_NE(std::string(e.what()).find(name + ":" + std::to_string(line) + ":"),
                std::string::npos)
          << e.what();
    }
  }
  const std::vector<std::pair<std::string, std::size_t>> matrices{
      {"short_row.m", 3}, {"missing_row.m", 2}, {"zero_denominator.m", 3}, {"bad_header.m", 1},
      {"decimal.m", 2}};
  for (const auto& [name, line] : matrices) {
    try {
      read_matrix_file(fixture("malformed/" + name));
      ADD_FAILURE() << name << " parsed";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << name << ": " << e.what();
    }
  }
}

TEST(Json, RoundTripsEveryVerdictKind) {
  const Graph c4 = read_graph_file(fixture("c4.g"));
  const Graph c4r = read_graph_file(fixture("c4relabeled.g"));
  expect_roundtrip(graph_isomorphism(c4, c4r), c4.adjacency(), c4r.adjacency());
  PipelineOptions relax;
  relax.mode = Mode::RelaxOnly;
  expect_roundtrip(graph_isomorphism(c4, c4r, relax), c4.adjacency(), c4r.adjacency());

  const Graph star = read_graph_file(fixture("star.g"));
  const Graph ti = read_graph_file(fixture("triangle_isolated.g"));
  expect_roundtrip(graph_isomorphism(star, ti), star.adjacency(), ti.adjacency());

  const Graph p3 = read_graph_file(fixture("p3.g"));
  const Graph k3 = read_graph_file(fixture("k3.g"));
  expect_roundtrip(graph_isomorphism(p3, k3), p3.adjacency(), k3.adjacency());

  const RatMatrix a = read_matrix_file(fixture("inc_a.m"));
  const RatMatrix b = read_matrix_file(fixture("inc_b.m"));
  expect_roundtrip(bipartite_isomorphism(BipartiteGraph(a), BipartiteGraph(b)), a, b);
  const RatMatrix s = read_matrix_file(fixture("inc_sq.m"));
  const RatMatrix st = read_matrix_file(fixture("inc_sq_t.m"));
  expect_roundtrip(bipartite_isomorphism(BipartiteGraph(s), BipartiteGraph(st)), s, st);

  const Graph tri = read_graph_file(fixture("triangle.g"));
  const Graph k4 = read_graph_file(fixture("k4.g"));
  expect_roundtrip(subgraph_isomorphism(tri, k4), pad_adjacency(tri.adjacency(), 4),
                   k4.adjacency());
}

TEST(Json, RejectsMalformed) {
  EXPECT_THROW(verdict_from_json("{"), std::invalid_argument);
  EXPECT_THROW(verdict_from_json("{}"), std::invalid_argument);
  EXPECT_THROW(verdict_from_json(R"({"problem":"nope","status":"ExactWitness"})"),
               std::invalid_argument);
}

TEST(Cli, ExitCodesAndOutput) {
  CliRun r = run_cli("iso " + fixture("c4.g") + " " + fixture("c4relabeled.g"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "ExactWitness");
  EXPECT_EQ(j["witness"]["kind"], "permutation");

  r = run_cli("iso --mode relax " + fixture("c4.g") + " " + fixture("c4relabeled.g"));
  EXPECT_EQ(r.code, 2);

  r = run_cli("iso " + fixture("p3.g") + " " + fixture("k3.g"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["reason"], "OffdiagMultiset");

  EXPECT_EQ(run_cli("iso " + fixture("malformed/duplicate.g") + " " + fixture("c4.g")).code, 1);
  EXPECT_EQ(run_cli("iso " + fixture("c4.g")).code, 1);
  EXPECT_EQ(run_cli("frobnicate").code, 1);
  EXPECT_EQ(run_cli("emit 9 1 phi").code, 1);

  r = run_cli("subiso " + fixture("triangle.g") + " " + fixture("k4.g"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "ExactWitness");

  r = run_cli("bipiso " + fixture("inc_sq.m") + " " + fixture("inc_sq_t.m"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["toggles"]["transposed"], true);
}

TEST(Cli, EmitCountsRows) {
  const CliRun r = run_cli("emit 2 3 phi");
  EXPECT_EQ(r.code, 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 2u * 6 + 4u * 4 + 2u * 9);
}

TEST(Cli, Counterexample) {
  const CliRun r = run_cli("counterexample 4");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["phi"]["member"], true);
  EXPECT_EQ(j["psi"]["member"], false);
  EXPECT_EQ(j["psi"]["certificate_verified"], true);
  EXPECT_EQ(run_cli("counterexample 4 --p 1,5").code, 1);
}

TEST(Cli, SweepFour) {
  const CliRun r = run_cli("sweep 4");
  EXPECT_EQ(r.code, 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 67u);
  EXPECT_EQ(r.out.find("SoundnessViolation"), std::string::npos);
}
