#pragma once
// On-disk formats for count tables and grid functions.
//
// CSV: a "lambda,count" header line, then one row per lambda.  Export only;
// the CSV carries no form metadata.
//
// Binary table: little-endian 64-bit header {n, k, q, lambda_cap}, then the
// counts for lambda = 0..lambda_cap run-length encoded as (value, run) pairs
// of 64-bit words.  Count tables are long stretches of repeated small values
// (zeros between represented lambdas at high degree), so RLE is the compact
// choice.  q is the congruence modulus; the residue tuple itself is not
// persisted — a reloaded table knows its stride but not which class it was.
//
// Binary grid: the same 4-word header layout, reinterpreted as
// {dimension, kind (0 box / 1 torus), side, half_width}, then one (re, im)
// pair of IEEE doubles per cell in row-major order.

#include <string>

#include "diomax/counting.hpp"
#include "diomax/operators.hpp"

namespace diomax {

void write_table_csv(const RepCountTable& table, const std::string& path);

void write_table_binary(const RepCountTable& table, const std::string& path);
RepCountTable read_table_binary(const std::string& path);

void write_grid_binary(const GridFunction& grid, const std::string& path);
GridFunction read_grid_binary(const std::string& path);

/// Generic numeric series sink for experiment sidecar files: a header line of
/// column names, then rows printed with %.17g (lossless doubles).
void write_series_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

}  // namespace diomax
