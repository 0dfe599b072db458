// ancs: sweeps, verification, zero finding and deformed-binomial tables for
// AN-class coherent states.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ancs/deformed_binomial.hpp"
#include "ancs/errors.hpp"
#include "ancs/families.hpp"
#include "ancs/helstrom.hpp"
#include "ancs/sweep.hpp"
#include "ancs/verify.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadArgs = 2, kDomain = 3, kIo = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::pair<std::string, std::string> split_kv(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ancs::InvalidArgument("expected name=value, got '" + s + "'");
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ancs::InvalidArgument(what + ": not a number '" + s + "'");
  return v;
}

// Options shared by every family-taking subcommand. Settings from --config
// fill in whatever the command line left unset.
struct FamilyOpts {
  std::string family;
  std::vector<std::string> params;
  std::string config;
  CLI::Option* family_opt = nullptr;
  std::map<std::string, CLI::Option*> scalars;
  std::map<std::string, std::string*> targets;

  void attach(CLI::App* app) {
    family_opt = app->add_option("--family", family, "family kind: gs spin perelomov bg hermite abel sg sgm");
    app->add_option("--param", params, "family parameter name=value (repeatable)");
    app->add_option("--config", config, "key = value file mirroring the flags");
  }

  template <typename T>
  void scalar(CLI::App* app, const std::string& name, T& target, std::string* raw, const std::string& help) {
    scalars[name] = app->add_option("--" + name, target, help);
    targets[name] = raw;
  }

  // Returns config entries not consumed here (subcommand-specific keys).
  std::map<std::string, std::string> load_config() {
    std::map<std::string, std::string> rest;
    if (config.empty()) return rest;
    std::ifstream in(config);
    if (!in) throw IoError("cannot read config file " + config);
    std::map<std::string, bool> from_flags;
    for (const auto& p : params) from_flags[split_kv(p).first] = true;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line.substr(0, line.find('#')));
      if (line.empty()) continue;
      auto [key, value] = split_kv(line);
      if (key == "family") {
        if (family_opt->count() == 0) family = value;
      } else if (key == "param") {
        if (!from_flags[split_kv(value).first]) params.push_back(value);
      } else {
        rest[key] = value;
      }
    }
    return rest;
  }

  ancs::FamilySpec spec() const {
    if (family.empty()) throw ancs::InvalidArgument("--family is required");
    ancs::FamilySpec s{ancs::parse_family_kind(family), {}};
    for (const auto& p : params) {
      auto [k, v] = split_kv(p);
      s.params[k] = to_double(v, "--param " + k);
    }
    return s;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AN-class coherent states: photon statistics and Helstrom bounds"};
  app.set_version_flag("--version", std::string(ANCS_VERSION));
  app.require_subcommand(1);

  // sweep
  FamilyOpts sweep_fam;
  std::string quantity = "nbar_of_u", axis, format = "csv", output = "-";
  double lo = 0.0, hi = 1.0, eta = 1.0, xi0 = 0.5;
  int count = 101, workers = 0;
  bool log_grid = false;
  auto* sweep = app.add_subcommand("sweep", "tabulate a quantity on a grid (CSV or JSON)");
  sweep_fam.attach(sweep);
  auto* o_quantity = sweep->add_option("--quantity", quantity,
                                       "pn_table nbar_of_u mandel_of_nbar helstrom delta log_helstrom");
  auto* o_axis = sweep->add_option("--axis", axis, "u or nbar (default depends on quantity)");
  auto* o_lo = sweep->add_option("--lo", lo, "grid start");
  auto* o_hi = sweep->add_option("--hi", hi, "grid end");
  auto* o_count = sweep->add_option("--count", count, "grid points (>= 2)");
  auto* o_log = sweep->add_flag("--log-grid", log_grid, "logarithmic spacing");
  auto* o_eta = sweep->add_option("--eta", eta, "detector efficiency in (0, 1]");
  auto* o_xi0 = sweep->add_option("--xi0", xi0, "prior of the vacuum hypothesis in (0, 1)");
  auto* o_format = sweep->add_option("--format", format, "csv or json");
  auto* o_output = sweep->add_option("-o,--output", output, "output path, - for stdout");
  sweep->add_option("--workers", workers, "worker threads (default: ANCS_WORKERS or all cores)");

  // verify
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run the numerical self-checks");
  verify->add_option("suite", suite, "all or one of: power_series specfun an_core families deformed_binomial helstrom cli");

  // zeros
  FamilyOpts zeros_fam;
  double z_lo = 0.0, z_hi = 6.0;
  auto* zeros = app.add_subcommand("zeros", "nbar values where the Helstrom bound vanishes (sg, sgm)");
  zeros_fam.attach(zeros);
  zeros->add_option("--lo", z_lo, "nbar range start");
  zeros->add_option("--hi", z_hi, "nbar range end");

  // deform
  FamilyOpts deform_fam;
  int d_n = 10;
  double d_eta = 0.5;
  std::string flavor = "asym";
  auto* deform = app.add_subcommand("deform", "deformed-binomial pmf of a nonlinear family (CSV)");
  deform_fam.attach(deform);
  deform->add_option("-n,--n", d_n, "photons before detection");
  deform->add_option("--eta", d_eta, "efficiency in [0, 1]");
  deform->add_option("--flavor", flavor, "asym or sym");

  // limits
  FamilyOpts limits_fam;
  auto* limits = app.add_subcommand("limits", "contraction limits of a family");
  limits_fam.attach(limits);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadArgs;
  }

  try {
    if (sweep->parsed()) {
      const auto rest = sweep_fam.load_config();
      auto fill = [&](const char* key, CLI::Option* opt, auto setter) {
        auto it = rest.find(key);
        if (it != rest.end() && opt->count() == 0) setter(it->second);
      };
      fill("quantity", o_quantity, [&](const std::string& v) { quantity = v; });
      fill("axis", o_axis, [&](const std::string& v) { axis = v; });
      fill("lo", o_lo, [&](const std::string& v) { lo = to_double(v, "lo"); });
      fill("hi", o_hi, [&](const std::string& v) { hi = to_double(v, "hi"); });
      fill("count", o_count, [&](const std::string& v) { count = static_cast<int>(to_double(v, "count")); });
      fill("log-grid", o_log, [&](const std::string& v) { log_grid = v == "true" || v == "1"; });
      fill("eta", o_eta, [&](const std::string& v) { eta = to_double(v, "eta"); });
      fill("xi0", o_xi0, [&](const std::string& v) { xi0 = to_double(v, "xi0"); });
      fill("format", o_format, [&](const std::string& v) { format = v; });
      fill("output", o_output, [&](const std::string& v) { output = v; });

      ancs::SweepRequest req;
      req.family = sweep_fam.spec();
      req.quantity = ancs::parse_quantity(quantity);
      req.axis = axis.empty() ? ancs::default_axis(req.quantity) : ancs::parse_axis(axis);
      req.lo = lo;
      req.hi = hi;
      req.count = count;
      req.log_grid = log_grid;
      req.eta = eta;
      req.xi0 = xi0;
      if (format != "csv" && format != "json") throw ancs::InvalidArgument("--format must be csv or json");
      const ancs::SweepTable t = ancs::run_sweep(req, workers);
      std::ostringstream os;
      if (format == "csv") ancs::write_csv(t, os);
      else ancs::write_json(t, os);
      write_output(output, os.str());
      return kOk;
    }

    if (verify->parsed()) {
      const auto results = ancs::run_verify(suite);
      int failed = 0;
      for (const auto& r : results) {
        std::printf("%-4s %-18s %-60s dev=%.3e tol=%.1e\n", r.passed ? "ok" : "FAIL", r.suite.c_str(),
                    r.name.c_str(), r.deviation, r.tolerance);
        failed += r.passed ? 0 : 1;
      }
      std::printf("%zu checks, %d failed\n", results.size(), failed);
      return failed == 0 ? kOk : kVerifyFailed;
    }

    if (zeros->parsed()) {
      zeros_fam.load_config();
      const ancs::AnFamily fam = ancs::make_family(zeros_fam.spec());
      nlohmann::ordered_json j;
      j["family"] = fam.label();
      j["range"] = {z_lo, z_hi};
      j["zeros"] = nlohmann::ordered_json::array();
      for (const auto& z : ancs::find_hb_zeros(fam, z_lo, z_hi)) {
        j["zeros"].push_back({{"nbar", z.nbar}, {"u", z.u}, {"residual", z.residual}});
      }
      std::cout << j.dump(2) << '\n';
      return kOk;
    }

    if (deform->parsed()) {
      deform_fam.load_config();
      const ancs::AnFamily fam = ancs::make_family(deform_fam.spec());
      if (!fam.nonlinear) throw ancs::InvalidArgument(fam.label() + " has no deformed-binomial structure");
      if (flavor != "asym" && flavor != "sym") throw ancs::InvalidArgument("--flavor must be asym or sym");
      if (d_n < 0) throw ancs::InvalidArgument("--n must be >= 0");
      const int order = fam.support_max ? std::min(d_n, *fam.support_max) : d_n;
      if (order < d_n) throw ancs::DomainError(fam.label() + ": n exceeds the support");
      const auto seq = ancs::DeformedSequence::from_log_xfact(fam.nonlinear->log_xfact, d_n);
      const auto norm = seq.norm_series(d_n);
      ancs::DeformedBinomialDist dist;
      if (flavor == "asym") {
        dist = ancs::asym_distribution(seq, ancs::asym_polynomials(seq, norm, d_eta, d_n), d_n, d_eta);
      } else {
        dist = ancs::sym_distribution(seq, ancs::sym_polynomials(seq, norm, d_eta, d_n),
                                      ancs::sym_polynomials(seq, norm, 1.0 - d_eta, d_n), d_n, d_eta);
      }
      std::ostringstream os;
      os << "# family: " << fam.label() << "\n# n: " << d_n << "\n# eta: " << fmt(d_eta) << "\n# flavor: " << flavor
         << "\n# version: " << ANCS_VERSION << '\n';
      os << (flavor == "asym" ? "k,p_k,pi_k\n" : "k,p_k\n");
      for (int k = 0; k <= d_n; ++k) {
        os << k << ',' << fmt(dist.probs[k]);
        if (flavor == "asym") os << ',' << fmt(dist.string_probs[k]);
        os << '\n';
      }
      std::cout << os.str();
      return kOk;
    }

    if (limits->parsed()) {
      limits_fam.load_config();
      const auto checks = ancs::limit_checks(limits_fam.spec());
      if (checks.empty()) std::printf("no limit statements for this family\n");
      bool ok = true;
      for (const auto& c : checks) {
        std::printf("%-4s %-60s dev=%.3e tol=%.1e\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.deviation,
                    c.tolerance);
        ok = ok && c.passed;
      }
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const IoError& e) {
    std::cerr << "ancs: " << e.what() << '\n';
    return kIo;
  } catch (const ancs::InvalidArgument& e) {
    std::cerr << "ancs: " << e.what() << '\n';
    return kBadArgs;
  } catch (const ancs::DomainError& e) {
    std::cerr << "ancs: " << e.what() << '\n';
    return kDomain;
  } catch (const ancs::OverflowError& e) {
    std::cerr << "ancs: " << e.what() << '\n';
    return kDomain;
  } catch (const ancs::ConvergenceError& e) {
    std::cerr << "ancs: " << e.what() << '\n';
    return kDomain;
  }
  return kBadArgs;
}
