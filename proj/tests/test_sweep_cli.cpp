#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <algorithm>
#include <sys/wait.h>

#include "ancs/errors.hpp"
#include "ancs/helstrom.hpp"
#include "ancs/sweep.hpp"

using namespace ancs;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(ANCS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ancs_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Grid, LinearAndLog) {
  const auto g = make_grid(0.0, 1.0, 5, false);
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto l = make_grid(1e-3, 10.0, 5, true);
  EXPECT_NEAR(l[1], 1e-2, 1e-16);
  EXPECT_EQ(l.back(), 10.0);
  EXPECT_THROW(make_grid(1.0, 1.0, 5, false), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, 1, false), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, 3, true), InvalidArgument);
}

TEST(Sweep, SpinMandelColumn) {
  SweepRequest req;
  req.family = {FamilyKind::spin, {{"n_j", 4}}};
  req.quantity = Quantity::mandel_of_nbar;
  req.axis = Axis::nbar;
  req.lo = 0.0;
  req.hi = 4.0;
  req.count = 81;
  const auto t = run_sweep(req);
  ASSERT_EQ(t.columns, (std::vector<std::string>{"nbar", "u", "mandel_q"}));
  for (const auto& r : t.rows) EXPECT_NEAR(r[2], -r[0] / 4.0, 1e-12);
}

TEST(Sweep, GlauberDeltaIsZero) {
  SweepRequest req;
  req.family = {FamilyKind::gs, {}};
  req.quantity = Quantity::delta;
  req.axis = Axis::nbar;
  req.lo = 0.0;
  req.hi = 10.0;
  for (const auto& r : run_sweep(req).rows) EXPECT_EQ(r[1], 0.0);
}

TEST(Sweep, PnRowsSumToOne) {
  for (auto kind : {FamilyKind::sg, FamilyKind::perelomov}) {
    SweepRequest req;
    req.family = {kind, kind == FamilyKind::perelomov ? std::map<std::string, double>{{"kappa", 2}}
                                                       : std::map<std::string, double>{}};
    req.quantity = Quantity::pn_table;
    req.lo = 0.0;
    req.hi = kind == FamilyKind::perelomov ? 0.9 : 30.0;
    req.count = 31;
    req.eta = 0.7;
    for (const auto& r : run_sweep(req).rows) {
      double s = 0.0;
      for (std::size_t i = 2; i < r.size(); ++i) s += r[i];
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(Sweep, LogHelstromDipsAtTheZero) {
  SweepRequest req;
  req.family = {FamilyKind::sgm, {}};
  req.quantity = Quantity::log_helstrom;
  req.axis = Axis::nbar;
  req.lo = 0.0;
  req.hi = 6.0;
  req.count = 601;
  const auto t = run_sweep(req);
  const double z = find_hb_zeros(make_family(FamilyKind::sgm), 0.0, 6.0).front().nbar;
  double lowest = INFINITY, where = 0.0;
  for (const auto& r : t.rows) {
    if (r[0] > 0.0 && r[0] < 3.0 && r[2] < lowest) {
      lowest = r[2];
      where = r[0];
    }
  }
  EXPECT_LT(lowest, -4.0);
  EXPECT_NEAR(where, z, 0.02);
}

TEST(Sweep, DomainErrors) {
  SweepRequest req;
  req.family = {FamilyKind::perelomov, {{"kappa", 2}}};
  req.quantity = Quantity::nbar_of_u;
  req.lo = 0.0;
  req.hi = 1.5;
  EXPECT_THROW(run_sweep(req), DomainError);
  req.eta = 1.5;
  EXPECT_THROW(run_sweep(req), InvalidArgument);
}

TEST(Sweep, JsonRoundTripReproducesValues) {
  SweepRequest req;
  req.family = {FamilyKind::hermite, {{"a", 1}}};
  req.quantity = Quantity::helstrom;
  req.axis = Axis::nbar;
  req.lo = 0.0;
  req.hi = 8.0;
  req.count = 33;
  req.eta = 0.8;
  std::stringstream ss;
  write_json(run_sweep(req), ss);
  const SweepTable back = read_json(ss);
  const auto fam = make_family(req.family);
  ASSERT_EQ(back.rows.size(), 33u);
  for (const auto& r : back.rows) {
    const auto h = helstrom_of_nbar(fam, r[0], 0.5, 0.8);
    EXPECT_NEAR(r[2], h.overlap_sq, 1e-12);
    EXPECT_NEAR(r[3], h.p_h, 1e-12);
    EXPECT_NEAR(r[4], h.delta, 1e-12);
  }
  EXPECT_EQ(back.meta.front().first, "family");
}

TEST(Sweep, CsvIsDeterministic) {
  SweepRequest req;
  req.family = {FamilyKind::barut_girardello, {{"kappa", 2}}};
  req.quantity = Quantity::mandel_of_nbar;
  req.axis = Axis::nbar;
  req.lo = 0.1;
  req.hi = 10.0;
  req.count = 50;
  std::ostringstream a, b;
  write_csv(run_sweep(req, 1), a);
  write_csv(run_sweep(req, 4), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().find('\r'), std::string::npos);
  EXPECT_EQ(a.str().rfind("# family: barut_girardello kappa=2", 0), 0u);
}

TEST(Cli, SweepToFileAndStdout) {
  const auto path = temp_file("sweep.csv");
  const CliRun r = run_cli("sweep --family spin --param n_j=4 --quantity mandel_of_nbar --lo 0 --hi 4 --count 5 -o " +
                        path.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(text.find("nbar,u,mandel_q\n"), std::string::npos);
  EXPECT_NE(text.find("-1.0000000000000000e+00"), std::string::npos);
  std::filesystem::remove(path);

  const CliRun s = run_cli("sweep --family spin --param n_j=4 --quantity mandel_of_nbar --lo 0 --hi 4 --count 5");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out, text);
}

TEST(Cli, ConfigFileWithFlagsWinning) {
  const auto cfg = temp_file("cfg.txt");
  {
    std::ofstream out(cfg);
    out << "# sweep settings\nfamily = perelomov\nparam = kappa=2\nquantity = delta\nlo = 0\nhi = 5\ncount = 6\n";
  }
  const CliRun a = run_cli("sweep --config " + cfg.string());
  ASSERT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("perelomov kappa=2"), std::string::npos);
  const CliRun b = run_cli("sweep --config " + cfg.string() + " --param kappa=5 --count 3");
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("perelomov kappa=5"), std::string::npos);
  EXPECT_EQ(std::count(b.out.begin(), b.out.end(), '\n'), 6 + 1 + 3);
  std::filesystem::remove(cfg);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("sweep --family nope").code, 2);
  EXPECT_EQ(run_cli("sweep --family spin --param n_j=4 --quantity delta --lo 0 --hi 5").code, 3);
  EXPECT_EQ(run_cli("sweep --family gs --lo 0 --hi 1 -o /nonexistent/dir/x.csv").code, 4);
  EXPECT_EQ(run_cli("sweep --config /nonexistent/cfg").code, 4);
  EXPECT_EQ(run_cli("zeros --family gs").code, 2);
  EXPECT_EQ(run_cli("bogus").code, 2);
  EXPECT_EQ(run_cli("verify nosuchsuite").code, 2);
}

TEST(Cli, ZerosVerifyDeformLimits) {
  const CliRun z = run_cli("zeros --family sgm --lo 0 --hi 6");
  ASSERT_EQ(z.code, 0);
  EXPECT_NE(z.out.find("\"zeros\""), std::string::npos);
  EXPECT_EQ(run_cli("verify specfun").code, 0);
  const CliRun d = run_cli("deform --family abel --param beta=2 -n 6 --eta 0.4 --flavor sym");
  ASSERT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("k,p_k\n"), std::string::npos);
  EXPECT_EQ(run_cli("limits --family spin --param n_j=1000").code, 0);
  EXPECT_EQ(run_cli("deform --family sg -n 3").code, 2);
}
