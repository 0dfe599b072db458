#include "ancs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "ancs/errors.hpp"
#include "ancs/helstrom.hpp"

namespace ancs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<Quantity, std::string_view> kQuantities[] = {
    {Quantity::pn_table, "pn_table"}, {Quantity::nbar_of_u, "nbar_of_u"},
    {Quantity::mandel_of_nbar, "mandel_of_nbar"}, {Quantity::helstrom, "helstrom"},
    {Quantity::delta, "delta"}, {Quantity::log_helstrom, "log_helstrom"},
};

// The spin top state |n_j> is reached only as u -> infinity.
bool at_spin_top(const AnFamily& fam, double nbar) {
  return fam.support_max && nbar == static_cast<double>(*fam.support_max);
}

struct Point {
  double u = 0.0;
  double nbar = 0.0;
};

Point locate(const AnFamily& fam, Axis axis, double v) {
  if (axis == Axis::u) {
    check_domain(fam, v);
    return {v, mean_photons(fam, v)};
  }
  if (at_spin_top(fam, v)) return {std::numeric_limits<double>::infinity(), v};
  return {invert_nbar(fam, v), v};
}

std::vector<double> spin_top_probs(const AnFamily& fam) {
  std::vector<double> p(*fam.support_max + 1, 0.0);
  p.back() = 1.0;
  return p;
}

std::vector<double> row_for(const SweepRequest& req, const AnFamily& fam, double v) {
  const Point pt = locate(fam, req.axis, v);
  switch (req.quantity) {
    case Quantity::pn_table: {
      PhotonDistribution d;
      if (std::isinf(pt.u)) d.probs = spin_top_probs(fam);
      else d = distribution(fam, pt.u);
      if (req.eta < 1.0) d = bernoulli_transform(d, req.eta);
      std::vector<double> row{pt.u, pt.nbar};
      row.insert(row.end(), d.probs.begin(), d.probs.end());
      return row;
    }
    case Quantity::nbar_of_u:
      return {pt.u, pt.nbar, req.eta * pt.nbar};
    case Quantity::mandel_of_nbar: {
      // Thinning by the detector scales Q_M by eta.
      const double q = std::isinf(pt.u) ? -1.0 : moments(fam, pt.u).mandel_q;
      return {pt.nbar, pt.u, req.eta * q};
    }
    case Quantity::helstrom:
    case Quantity::delta:
    case Quantity::log_helstrom: {
      HelstromRecord r;
      double u_eff = kNaN;
      if (req.eta == 1.0 && at_spin_top(fam, pt.nbar)) {
        r.nbar = pt.nbar;
        r.xi0 = req.xi0;
        r.overlap_sq = 0.0;
        r.p_h = 0.0;
        r.delta = -std::exp(-pt.nbar);
        u_eff = pt.u;
      } else {
        r = helstrom_of_nbar(fam, pt.nbar, req.xi0, req.eta);
        u_eff = invert_nbar(fam, req.eta * pt.nbar);
      }
      if (req.quantity == Quantity::delta) return {pt.nbar, r.delta};
      if (req.quantity == Quantity::helstrom) return {pt.nbar, u_eff, r.overlap_sq, r.p_h, r.delta};
      return {pt.nbar, r.p_h, std::log10(r.p_h)};
    }
  }
  return {};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

Quantity parse_quantity(std::string_view name) {
  for (const auto& [q, n] : kQuantities) {
    if (n == name) return q;
  }
  throw InvalidArgument("unknown quantity '" + std::string(name) + "'");
}

std::string_view quantity_name(Quantity q) {
  for (const auto& [k, n] : kQuantities) {
    if (k == q) return n;
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "u") return Axis::u;
  if (name == "nbar") return Axis::nbar;
  throw InvalidArgument("axis must be u or nbar, got '" + std::string(name) + "'");
}

Axis default_axis(Quantity q) {
  return q == Quantity::pn_table || q == Quantity::nbar_of_u ? Axis::u : Axis::nbar;
}

std::vector<double> make_grid(double lo, double hi, int count, bool log_grid) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("grid needs finite lo < hi");
  if (count < 2) throw InvalidArgument("grid needs count >= 2");
  if (log_grid && !(lo > 0.0)) throw InvalidArgument("log grid needs lo > 0");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    g[i] = log_grid ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

int worker_count() {
  if (const char* env = std::getenv("ANCS_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepTable run_sweep(const SweepRequest& req, int workers) {
  if (!(req.eta > 0.0 && req.eta <= 1.0)) throw InvalidArgument("eta must lie in (0, 1]");
  if (!(req.xi0 > 0.0 && req.xi0 < 1.0)) throw InvalidArgument("xi0 must lie in (0, 1)");
  const AnFamily fam = make_family(req.family);
  const std::vector<double> grid = make_grid(req.lo, req.hi, req.count, req.log_grid);

  // Fail fast on the domain before spawning workers.
  if (req.axis == Axis::u) {
    check_domain(fam, grid.front());
    check_domain(fam, grid.back());
  } else if (!(grid.front() >= 0.0) || (grid.back() >= nbar_supremum(fam) && !at_spin_top(fam, grid.back()))) {
    throw DomainError(fam.label() + ": nbar grid outside the reachable range");
  }

  SweepTable t;
  t.meta = {{"family", fam.label()},
            {"quantity", std::string(quantity_name(req.quantity))},
            {"axis", req.axis == Axis::u ? "u" : "nbar"},
            {"eta", format_double(req.eta)},
            {"xi0", format_double(req.xi0)},
            {"version", ANCS_VERSION}};
  switch (req.quantity) {
    case Quantity::pn_table: t.columns = {"u", "nbar"}; break;
    case Quantity::nbar_of_u: t.columns = {"u", "nbar", "nbar_detected"}; break;
    case Quantity::mandel_of_nbar: t.columns = {"nbar", "u", "mandel_q"}; break;
    case Quantity::helstrom: t.columns = {"nbar", "u", "overlap_sq", "p_h", "delta"}; break;
    case Quantity::delta: t.columns = {"nbar", "delta"}; break;
    case Quantity::log_helstrom: t.columns = {"nbar", "p_h", "log10_p_h"}; break;
  }

  t.rows.resize(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        t.rows[i] = row_for(req, fam, grid[i]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::min<int>(workers > 0 ? workers : worker_count(), static_cast<int>(grid.size()));
  std::vector<std::jthread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  if (req.quantity == Quantity::pn_table) {
    // Rows truncate at different n; pad everything to the longest one.
    std::size_t width = 0;
    for (const auto& row : t.rows) width = std::max(width, row.size());
    for (auto& row : t.rows) row.resize(width, 0.0);
    for (std::size_t n = 0; n + 2 < width; ++n) t.columns.push_back("P_" + std::to_string(n));
  }
  return t;
}

void write_csv(const SweepTable& t, std::ostream& os) {
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

void write_json(const SweepTable& t, std::ostream& os) {
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) r.push_back(v);
      else r.push_back(nullptr);
    }
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(1) << '\n';
}

SweepTable read_json(std::istream& is) {
  const nlohmann::ordered_json j = nlohmann::ordered_json::parse(is);
  SweepTable t;
  for (const auto& [k, v] : j.at("meta").items()) t.meta.emplace_back(k, v.get<std::string>());
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_null() ? kNaN : v.get<double>());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ancs
