#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(VSO_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "vso_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(Cli, Modes) {
  auto r = run("modes --k-max 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("k,omega_k,lambda_abs"), std::string::npos);
  EXPECT_NE(r.out.find("1.5707963267948966e+00"), std::string::npos);
  EXPECT_EQ(run("modes --k-max 0").code, 1);
  EXPECT_EQ(run("modes --rho -1").code, 1);
}

TEST(Cli, PlacementCheck) {
  EXPECT_EQ(run("placement-check --lp1 0.25 --lp2 0.75 --k-max 20").code, 0);
  auto r = run("placement-check --lp1 0.1 --lp2 0.9");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("unobservable (zero window integral): 3"), std::string::npos);
  EXPECT_EQ(run("placement-check --lp1 0.9 --lp2 0.1").code, 1);
}

TEST(Cli, ConvergenceAndResolvent) {
  auto c = run("convergence --levels 3");
  EXPECT_EQ(c.code, 0) << c.out;
  auto r = run("resolvent-test --samples 20");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SimulateWritesCsv) {
  const auto dir = scratch();
  {
    std::ofstream f(dir / "tiny.scenario");
    f << "[string]\nrho = 1\nT = 1\nL = 1\n[window]\nlp1 = 0.25\nlp2 = 0.75\n"
         "[gain]\nk = 5\n[grid]\nn_cells = 16\n[stepper]\ndt = 0.01\nhorizon = 0.2\n"
         "[initial]\nobserver_w = ramp(0.1)\n";
  }
  const auto csv = dir / "tiny.csv";
  std::filesystem::remove(csv);
  auto r = run("simulate " + (dir / "tiny.scenario").string() + " --out " + csv.string());
  EXPECT_EQ(r.code, 0) << r.out;
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,w_L,w_hat_L,H,H_err,ybar,ybar_hat,decay,residual");

  const auto outdir = dir / "many";
  std::filesystem::remove_all(outdir);
  std::filesystem::copy_file(dir / "tiny.scenario", dir / "other.scenario",
                             std::filesystem::copy_options::overwrite_existing);
  r = run("simulate " + (dir / "tiny.scenario").string() + " " + (dir / "other.scenario").string() +
          " --jobs 2 --out " + outdir.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(std::filesystem::exists(outdir / "tiny.csv"));
  EXPECT_TRUE(std::filesystem::exists(outdir / "other.csv"));
}

TEST(Cli, SimulateErrors) {
  const auto dir = scratch();
  {
    std::ofstream f(dir / "broken.scenario");
    f << "[string]\nrho = 1\n";
  }
  EXPECT_EQ(run("simulate " + (dir / "broken.scenario").string() + " --out " + (dir / "b.csv").string()).code, 1);
  EXPECT_NE(run("simulate /nonexistent.scenario").code, 0);
  {
    std::ofstream f(dir / "stiff.scenario");
    f << "[string]\nrho = 1\nT = 1\nL = 1\n[window]\nlp1 = 0.25\nlp2 = 0.75\n"
         "[gain]\nk = 5\n[grid]\nn_cells = 16\n[stepper]\ndt = 0.01\nhorizon = 0.2\n"
         "solver_tol = 1e-300\nmax_iter = 2\n[initial]\nobserver_w = ramp(0.1)\n";
  }
  EXPECT_EQ(run("simulate " + (dir / "stiff.scenario").string() + " --out " + (dir / "s.csv").string()).code, 2);
  EXPECT_EQ(run("").code, 1);
}

}  // namespace
