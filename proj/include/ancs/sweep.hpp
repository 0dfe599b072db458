#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ancs/families.hpp"

namespace ancs {

enum class Quantity { pn_table, nbar_of_u, mandel_of_nbar, helstrom, delta, log_helstrom };
enum class Axis { u, nbar };

Quantity parse_quantity(std::string_view name);
std::string_view quantity_name(Quantity q);
Axis parse_axis(std::string_view name);
// u for pn_table and nbar_of_u, nbar for the rest.
Axis default_axis(Quantity q);

struct SweepRequest {
  FamilySpec family;
  Quantity quantity = Quantity::nbar_of_u;
  Axis axis = Axis::u;
  double lo = 0.0;
  double hi = 1.0;
  int count = 101;
  bool log_grid = false;
  double eta = 1.0;
  double xi0 = 0.5;
};

struct SweepTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::vector<double> make_grid(double lo, double hi, int count, bool log_grid);

// Worker count from ANCS_WORKERS, else hardware concurrency.
int worker_count();

// Rows are independent and computed by up to `workers` threads (0 = default);
// the table is always in grid order. Throws InvalidArgument / DomainError.
SweepTable run_sweep(const SweepRequest& req, int workers = 0);

// 17 significant digits, LF endings, `#` metadata lines then one header row.
void write_csv(const SweepTable& t, std::ostream& os);
// {"meta": {...}, "columns": [...], "rows": [[...], ...]}; non-finite values as null.
void write_json(const SweepTable& t, std::ostream& os);
// Inverse of write_json; null reads back as NaN.
SweepTable read_json(std::istream& is);

}  // namespace ancs
