#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bfly::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kFig1 = std::string(BFLY_TEST_DATA) + "/fig1.txt";

}  // namespace

TEST(Cli, CountTotal) {
  auto r = run({"count", "--mode", "total", kFig1});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "3\n");
  EXPECT_EQ(run({"count", kFig1}).out, "3\n");
}

TEST(Cli, CountVertexAndEdge) {
  auto v = run({"count", "--mode", "vertex", kFig1});
  EXPECT_EQ(v.out, "u1\t3\nu2\t3\nu3\t0\nv1\t2\nv2\t2\nv3\t2\n");
  auto e = run({"count", "--mode", "edge", "--agg", "hash", kFig1});
  EXPECT_NE(e.out.find("u3-v3\t0\n"), std::string::npos);
  EXPECT_NE(e.out.find("u1-v1\t2\n"), std::string::npos);
}

TEST(Cli, PeelVertices) {
  auto r = run({"peel", kFig1});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "u1\t3\nu2\t3\nu3\t0\n");
  auto w = run({"peel", "--mode", "vertex", "--buckets", "fib", "--store-wedges", kFig1});
  EXPECT_EQ(w.out, r.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"count", "--rank", "bogus", kFig1}).code, bfly::cli::kExitUsage);
  EXPECT_EQ(run({"count", "--p", "0.5", kFig1}).code, bfly::cli::kExitUsage);
  EXPECT_EQ(run({"count", "--agg", "batchs", "--butterfly-agg", "reagg", kFig1}).code,
            bfly::cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, bfly::cli::kExitUsage);
  EXPECT_EQ(run({"count", "/nonexistent/graph.txt"}).code, bfly::cli::kExitFailure);
  EXPECT_EQ(run({"peel", "--store-wedges", "--max-wedges", "1", kFig1}).code,
            bfly::cli::kExitResource);
}

TEST(Cli, JsonIsDeterministicWithoutTiming) {
  auto a = run({"count", "--format", "json", "--omit-timing", "--mode", "vertex", kFig1});
  auto b = run({"count", "--format", "json", "--omit-timing", "--mode", "vertex", "--threads",
                "1", kFig1});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("elapsed_ms"), std::string::npos);
  auto t = run({"count", "--format", "json", kFig1});
  EXPECT_NE(t.out.find("elapsed_ms"), std::string::npos);
}

TEST(Cli, SparsifiedCount) {
  auto r = run({"count", "--sparsify", "edge", "--p", "1", kFig1});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "3\n");
  EXPECT_EQ(run({"count", "--sparsify", "edge", "--p", "0.5", "--mode", "vertex", kFig1}).code,
            bfly::cli::kExitUsage);
}

TEST(Cli, ConvertRoundTrip) {
  auto dir = std::filesystem::temp_directory_path();
  auto bin = (dir / "bfly_cli_fig1.bin").string();
  auto txt = (dir / "bfly_cli_fig1.txt").string();
  auto r = run({"convert", kFig1, bin, "--to", "binary"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "nU=3 nV=3 m=7\n");
  EXPECT_EQ(run({"count", bin}).out, "3\n");
  EXPECT_EQ(run({"convert", bin, txt, "--to", "text"}).code, 0);
  EXPECT_EQ(run({"count", txt}).out, "3\n");
  std::filesystem::remove(bin);
  std::filesystem::remove(txt);
}

TEST(Cli, BenchSingleRow) {
  auto r = run({"bench", "--random", "30,30,4", "--threads", "1", "--rank", "side"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "op,mode,rank,agg,threads,wall_ms,speedup,wedges,f");
  EXPECT_EQ(lines[1].rfind("count,total,side,batchs,1,", 0), 0u);
}
