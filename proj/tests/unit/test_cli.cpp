#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "smdpde/asymptotics.hpp"
#include "smdpde/cli/app.hpp"
#include "smdpde/cli/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smdpde;
using namespace smdpde::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("smdpde_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double d12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

std::string matrix_csv(const Eigen::MatrixXd& X) {
  std::string s;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) s += (j ? "," : "") + g17(X(i, j));
    s += "\n";
  }
  return s;
}

Eigen::MatrixXd gaussian(std::uint64_t seed, int n, int p) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
  }
  return X;
}

std::vector<CsvRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(CliUsage, ExitCodes) {
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(call({"estimate"}).code, kExitUsage);
  EXPECT_EQ(call({"estimate", "/nonexistent/file.csv"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "are", "--table", "bogus"}).code, kExitUsage);
  EXPECT_EQ(call({"--help"}).code, kExitOk);
}

TEST(CliEstimate, BetaZeroMeansArePrintedColumnMeans) {
  TempDir dir;
  const Eigen::MatrixXd X = gaussian(1, 120, 2);
  const std::string in = dir.write("x.csv", matrix_csv(X));
  const Result r = call({"estimate", in, "--beta", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["beta"], 0.0);
  for (int c = 0; c < 2; ++c) {
    double m = 0;
    for (int i = 0; i < 120; ++i) m += std::stod(g17(X(i, c)));
    m /= 120.0;
    EXPECT_EQ(j["mu_hat"][c].get<double>(), d12(m)) << c;
  }
  for (const char* key : {"sigma2_hat", "R_hat", "Sigma_hat", "pd_corrected", "converged",
                          "marginal_fits", "pair_fits", "columns", "n", "p"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["columns"], json({"1", "2"}));
}

TEST(CliEstimate, BetaOutOfRange) {
  TempDir dir;
  const std::string in = dir.write("x.csv", matrix_csv(gaussian(2, 20, 2)));
  const Result r = call({"estimate", in, "--beta", "1.5"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("[0,1]"), std::string::npos) << r.err;
}

TEST(CliEstimate, ContaminatedSampleRobustVersusMle) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd X(1000, 2);
  for (int i = 0; i < 1000; ++i) {
    const double shift = u(rng) < 0.1 ? 20.0 : 0.0;
    X(i, 0) = shift + g(rng);
    X(i, 1) = shift + g(rng);
  }
  const std::string in = dir.write("x.csv", matrix_csv(X));
  const Result robust = call({"estimate", in, "--beta", "0.3"});
  const Result mle = call({"estimate", in, "--beta", "0"});
  ASSERT_EQ(robust.code, kExitOk);
  ASSERT_EQ(mle.code, kExitOk);
  const json jr = json::parse(robust.out);
  const json jm = json::parse(mle.out);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      EXPECT_NEAR(jr["Sigma_hat"][a][b].get<double>(), a == b ? 1.0 : 0.0, 0.2);
    }
    EXPECT_NEAR(jm["mu_hat"][a].get<double>(), 2.0, 0.3);
  }
}

TEST(CliEstimate, SigmaRoundTripsFromEmittedParts) {
  TempDir dir;
  Eigen::MatrixXd X = gaussian(4, 200, 4);
  X.col(1) = 3.0 * X.col(1) + 0.8 * X.col(0);
  X.col(3) = 0.1 * X.col(3) - 0.5 * X.col(2);
  const std::string in = dir.write("x.csv", matrix_csv(X));
  const Result r = call({"estimate", in, "--beta", "0.4"});
  ASSERT_EQ(r.code, kExitOk);
  const json j = json::parse(r.out);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double sa = std::sqrt(j["sigma2_hat"][a].get<double>());
      const double sb = std::sqrt(j["sigma2_hat"][b].get<double>());
      const double want = d12(sa * j["R_hat"][a][b].get<double>() * sb);
      EXPECT_EQ(j["Sigma_hat"][a][b].get<double>(), want) << a << "," << b;
    }
  }
}

TEST(CliEstimate, ThreadCountDoesNotChangeOutput) {
  TempDir dir;
  const std::string in = dir.write("x.csv", matrix_csv(gaussian(5, 150, 5)));
  const Result a = call({"estimate", in, "--threads", "1"});
  const Result b = call({"estimate", in, "--threads", "3"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliEstimate, HeaderColumnsAndOutputFile) {
  TempDir dir;
  const Eigen::MatrixXd X = gaussian(6, 60, 3);
  const std::string in = dir.write("x.csv", "a,\"b,c\",d\r\n" + matrix_csv(X));
  const std::string out = dir.file("est.json");
  const Result r = call({"estimate", in, "--header", "--columns", "d,1", "-o", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json j = json::parse(read_file(out));
  EXPECT_EQ(j["columns"], json({"d", "a"}));
  EXPECT_EQ(call({"estimate", in, "--header", "--columns", "zz"}).code, kExitUsage);
}

TEST(CliEstimate, MalformedCsvReportsLine) {
  TempDir dir;
  const std::string in = dir.write("bad.csv", "1,2\n3,4\n5,oops\n7,8\n");
  const Result r = call({"estimate", in});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  const std::string ragged = dir.write("ragged.csv", "1,2\n3,4\n5\n");
  const Result s = call({"estimate", ragged});
  EXPECT_EQ(s.code, kExitUsage);
  EXPECT_NE(s.err.find("line 3"), std::string::npos) << s.err;
}

TEST(CliEstimate, ConstantColumnIsDegenerate) {
  TempDir dir;
  const std::string in = dir.write("c.csv", "x,y\n1,5\n2,5\n3,5\n4,5\n");
  const Result r = call({"estimate", in, "--header"});
  EXPECT_EQ(r.code, kExitDegenerate);
  EXPECT_NE(r.err.find("'y'"), std::string::npos) << r.err;
}

TEST(CliSimulate, CsvLayoutAndDeterminism) {
  TempDir dir;
  const std::string cfg = dir.write("s.json", R"({
    "n": 300, "p": 3, "replications": 4, "seed": 11,
    "contamination": {"kind": "casewise", "eps": 0.1, "shift": 20},
    "methods": ["mle", {"method": "smdpde", "betas": [0.1, 0.5]}, {"method": "mdpde", "beta": 0.3}]
  })");
  const std::string a = dir.file("a.csv"), b = dir.file("b.csv"), js = dir.file("r.json");
  ASSERT_EQ(call({"simulate", cfg, "-o", a, "--json", js, "--threads", "1"}).code, kExitOk);
  ASSERT_EQ(call({"simulate", cfg, "-o", b, "--threads", "2"}).code, kExitOk);
  const std::string ta = read_file(a);
  EXPECT_EQ(ta, read_file(b));
  const auto rows = parse(ta);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"method", "beta", "bias_loc", "mse_loc",
                                                       "bias_scatter", "mse_scatter",
                                                       "conv_rate"}));
  EXPECT_EQ(rows[1].fields[0], "mle");
  EXPECT_EQ(rows[2].fields[0], "smdpde");
  EXPECT_EQ(rows[3].fields[1], "0.5");
  EXPECT_EQ(rows[4].fields[0], "mdpde");
  EXPECT_NE(ta.find("\r\n"), std::string::npos);
  const json j = json::parse(read_file(js));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["methods"].size(), 4u);
  EXPECT_TRUE(j.contains("wall_seconds"));

  const Result other = call({"simulate", cfg, "--seed", "12"});
  ASSERT_EQ(other.code, kExitOk);
  EXPECT_NE(other.out, ta);
}

TEST(CliSimulate, InvalidConfigsNameTheKey) {
  TempDir dir;
  const auto expect_key = [&](const std::string& body, const std::string& key) {
    const std::string cfg = dir.write("bad.json", body);
    const Result r = call({"simulate", cfg});
    EXPECT_EQ(r.code, kExitUsage) << body;
    EXPECT_NE(r.err.find(key), std::string::npos) << r.err;
  };
  expect_key(R"({"n": 100, "p": 2, "replications": 0, "seed": 1, "methods": ["mle"]})",
             "replications");
  expect_key(R"({"n": 100, "p": 2, "replications": 3, "methods": ["mle"]})", "seed");
  expect_key(R"({"n": 100, "p": 2, "replications": 3, "seed": 1, "methods": ["mle"], "bogus": 1})",
             "bogus");
  expect_key(R"({"n": 100, "p": 2, "replications": 3, "seed": 1,
                "methods": [{"method": "smdpde", "beta": 2}]})",
             "methods");
  expect_key("{not json", "json");
}

TEST(CliSimulate, MdpdeFailsToConvergeSomewhereAtP10) {
  TempDir dir;
  const std::string cfg = dir.write("conv.json", R"({
    "n": 2000, "p": 10, "replications": 10, "seed": 12,
    "methods": [{"method": "smdpde", "beta": 0.5}, {"method": "mdpde", "beta": 0.5}]
  })");
  const Result r = call({"simulate", cfg});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(std::stod(rows[1].fields[6]), 1.0);
  EXPECT_LT(std::stod(rows[2].fields[6]), 1.0) << "MDPDE converged in every replication";
}

TEST(CliDiagnose, AreMatchesLibraryAndIsSymmetric) {
  const Result r = call({"diagnose", "are", "--betas", "0,0.1,0.3,0.5,0.7", "--rhos", "-0.7..0.7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse(r.out);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].fields[0], "rho");
  const AreTables t = are_tables({0, 0.1, 0.3, 0.5, 0.7}, {-0.7, -0.5, -0.3, 0, 0.3, 0.5, 0.7});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].fields.size(), 6u);
    for (std::size_t b = 1; b < 6; ++b) {
      const auto& cell = t.cell(i - 1, b - 1);
      char want[80];
      std::snprintf(want, sizeof want, "%.12g(%.12g)", cell.smdpde, cell.mdpde);
      EXPECT_EQ(rows[i].fields[b], want);
      EXPECT_EQ(rows[i].fields[b], rows[8 - i].fields[b]);
    }
  }
  const Result m = call({"diagnose", "are", "--table", "marginal", "--betas", "0,0.5"});
  ASSERT_EQ(m.code, kExitOk);
  EXPECT_EQ(parse(m.out).size(), 5u);
}

TEST(CliDiagnose, GridErrors) {
  EXPECT_EQ(call({"diagnose", "are", "--rhos", "0.5,1"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "are", "--rhos", "-1.2,0"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "are", "--rhos", "0.8..0.9"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "are", "--betas", ""}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "influence", "--y1", "-1:1:0"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "influence", "--rho", "1"}).code, kExitUsage);
  EXPECT_EQ(call({"diagnose", "influence", "--beta", "-0.1"}).code, kExitUsage);
}

TEST(CliDiagnose, InfluenceMeanAtBetaZero) {
  const Result r = call({"diagnose", "influence", "--target", "mean", "--beta", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse(r.out);
  // Marginal targets depend on one coordinate only: one row per grid value.
  ASSERT_EQ(rows.size(), 1u + 101u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"y1", "y2", "if"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double y = std::stod(rows[i].fields[0]);
    EXPECT_EQ(std::stod(rows[i].fields[2]), -(y - 1.0)) << rows[i].line;
  }
  const Result c = call({"diagnose", "influence", "--target", "correlation", "--y1", "-2:2:5",
                         "--y2", "-1:1:3"});
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_EQ(parse(c.out).size(), 1u + 15u);
}

TEST(CliBinary, ExitCodesFromProcess) {
  TempDir dir;
  const std::string bin = SMDPDE_CLI_PATH;
  const std::string in = dir.write("x.csv", matrix_csv(gaussian(7, 40, 2)));
  const std::string out = dir.file("o.json");
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(bin + " estimate " + in + " -o " + out), 0);
  EXPECT_TRUE(json::parse(read_file(out)).contains("Sigma_hat"));
  EXPECT_EQ(status(bin + " estimate " + in + " --beta 1.5"), 2);
  const std::string c = dir.write("c.csv", "1,2\n1,3\n1,4\n");
  EXPECT_EQ(status(bin + " estimate " + c), 3);
  EXPECT_EQ(status(bin + " --version"), 0);
}
