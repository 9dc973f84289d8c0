#include "diomax/table_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace diomax {

namespace {

void put_u64(std::ostream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (unsigned char)(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw input_error("table_io: truncated file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(buf[i]) << (8 * i);
  return v;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw input_error("table_io: cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("table_io: cannot open " + path);
  return in;
}

}  // namespace

void write_table_csv(const RepCountTable& table, const std::string& path) {
  std::ofstream out = open_out(path, false);
  out << "lambda,count\n";
  for (int64_t lambda = 0; lambda <= table.lambda_cap; ++lambda)
    out << lambda << ',' << table.counts[size_t(lambda)] << '\n';
  if (!out) throw input_error("table_io: write failed on " + path);
}

void write_table_binary(const RepCountTable& table, const std::string& path) {
  std::ofstream out = open_out(path, true);
  put_u64(out, uint64_t(table.n));
  put_u64(out, uint64_t(table.k));
  put_u64(out, uint64_t(table.congruence.modulus));
  put_u64(out, uint64_t(table.lambda_cap));
  size_t i = 0;
  while (i < table.counts.size()) {
    uint64_t value = table.counts[i];
    size_t j = i;
    while (j < table.counts.size() && table.counts[j] == value) ++j;
    put_u64(out, value);
    put_u64(out, uint64_t(j - i));
    i = j;
  }
  if (!out) throw input_error("table_io: write failed on " + path);
}

RepCountTable read_table_binary(const std::string& path) {
  std::ifstream in = open_in(path);
  RepCountTable table;
  table.n = int(get_u64(in));
  table.k = int(get_u64(in));
  table.congruence.modulus = int64_t(get_u64(in));
  table.lambda_cap = int64_t(get_u64(in));
  if (table.n < 1 || table.k < 1 || table.congruence.modulus < 1 ||
      table.lambda_cap < 0 || table.lambda_cap > (int64_t(1) << 40))
    throw input_error("table_io: implausible table header in " + path);
  uint64_t total = uint64_t(table.lambda_cap) + 1;
  table.counts.reserve(size_t(total));
  while (table.counts.size() < total) {
    uint64_t value = get_u64(in);
    uint64_t run = get_u64(in);
    if (run == 0 || run > total - table.counts.size())
      throw input_error("table_io: corrupt run length in " + path);
    table.counts.insert(table.counts.end(), size_t(run), value);
  }
  return table;
}

void write_grid_binary(const GridFunction& grid, const std::string& path) {
  std::ofstream out = open_out(path, true);
  put_u64(out, uint64_t(grid.dimension()));
  put_u64(out, grid.kind() == GridKind::box ? 0 : 1);
  put_u64(out, uint64_t(grid.side()));
  put_u64(out, grid.kind() == GridKind::box ? uint64_t(grid.half_width()) : 0);
  for (const cplx& v : grid.values()) {
    put_u64(out, std::bit_cast<uint64_t>(v.real()));
    put_u64(out, std::bit_cast<uint64_t>(v.imag()));
  }
  if (!out) throw input_error("table_io: write failed on " + path);
}

GridFunction read_grid_binary(const std::string& path) {
  std::ifstream in = open_in(path);
  int n = int(get_u64(in));
  uint64_t kind = get_u64(in);
  int64_t side = int64_t(get_u64(in));
  int64_t half = int64_t(get_u64(in));
  if (n < 1 || n > 16 || kind > 1 || side < 1)
    throw input_error("table_io: implausible grid header in " + path);
  GridFunction grid = kind == 0 ? GridFunction::box(n, half)
                                : GridFunction::torus(n, side);
  if (grid.side() != side)
    throw input_error("table_io: inconsistent grid header in " + path);
  for (cplx& v : grid.values()) {
    double re = std::bit_cast<double>(get_u64(in));
    double im = std::bit_cast<double>(get_u64(in));
    v = cplx(re, im);
  }
  return grid;
}

void write_series_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path, false);
  for (size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << '\n';
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw input_error("table_io: ragged CSV row");
    for (size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw input_error("table_io: write failed on " + path);
}

}  // namespace diomax
