#include "diomax/operators.hpp"

#include <algorithm>
#include <cmath>

#include "diomax/arith.hpp"
#include "diomax/fft.hpp"
#include "diomax/rng.hpp"

namespace diomax {

namespace {

int64_t checked_cells(int dimension, int64_t side) {
  uint64_t total = 1;
  for (int i = 0; i < dimension; ++i) {
    if (__builtin_mul_overflow(total, uint64_t(side), &total) ||
        total > (uint64_t(1) << 34))
      throw budget_error("grid too large to materialize");
  }
  return int64_t(total);
}

}  // namespace

GridFunction GridFunction::box(int dimension, int64_t T) {
  if (dimension < 1 || T < 0) throw input_error("GridFunction: bad box shape");
  GridFunction g;
  g.kind_ = GridKind::box;
  g.n_ = dimension;
  g.T_ = T;
  g.side_ = 2 * T + 1;
  g.values_.assign(size_t(checked_cells(dimension, g.side_)), cplx(0, 0));
  return g;
}

GridFunction GridFunction::torus(int dimension, int64_t N) {
  if (dimension < 1 || N < 1) throw input_error("GridFunction: bad torus shape");
  GridFunction g;
  g.kind_ = GridKind::torus;
  g.n_ = dimension;
  g.side_ = N;
  g.values_.assign(size_t(checked_cells(dimension, N)), cplx(0, 0));
  return g;
}

int64_t GridFunction::half_width() const {
  if (kind_ != GridKind::box) throw input_error("half_width: torus grid");
  return T_;
}

namespace {

int64_t flat_index(GridKind kind, int n, int64_t side, int64_t T,
                   const std::vector<int64_t>& x, bool* inside) {
  *inside = true;
  int64_t idx = 0;
  for (int i = 0; i < n; ++i) {
    int64_t c = x[size_t(i)];
    if (kind == GridKind::box) {
      c += T;
      if (c < 0 || c >= side) {
        *inside = false;
        return 0;
      }
    } else {
      c = mod_i64(c, side);
    }
    idx = idx * side + c;
  }
  return idx;
}

}  // namespace

cplx& GridFunction::at(const std::vector<int64_t>& x) {
  if (int(x.size()) != n_) throw input_error("GridFunction: arity mismatch");
  bool inside;
  int64_t idx = flat_index(kind_, n_, side_, T_, x, &inside);
  if (!inside) throw input_error("GridFunction: coordinate outside the box");
  return values_[size_t(idx)];
}

const cplx& GridFunction::at(const std::vector<int64_t>& x) const {
  return const_cast<GridFunction*>(this)->at(x);
}

cplx GridFunction::value_or_zero(const std::vector<int64_t>& x) const {
  if (int(x.size()) != n_) throw input_error("GridFunction: arity mismatch");
  bool inside;
  int64_t idx = flat_index(kind_, n_, side_, T_, x, &inside);
  return inside ? values_[size_t(idx)] : cplx(0, 0);
}

std::vector<int64_t> GridFunction::coordinates(int64_t flat) const {
  std::vector<int64_t> x(static_cast<size_t>(n_));
  for (int i = n_ - 1; i >= 0; --i) {
    int64_t c = flat % side_;
    flat /= side_;
    x[size_t(i)] = kind_ == GridKind::box ? c - T_ : c;
  }
  return x;
}

double GridFunction::norm(double p) const {
  if (!(p > 0)) throw input_error("norm: exponent must be positive");
  if (std::isinf(p)) {
    double m = 0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  KahanSum acc;
  for (const cplx& v : values_) acc.add(std::pow(std::abs(v), p));
  return std::pow(acc.value(), 1.0 / p);
}

cplx GridFunction::total() const {
  KahanCSum acc;
  for (const cplx& v : values_) acc.add(v);
  return acc.value();
}

// ------------------------------------------------------------------ average

WeightedSolutions weighted_solutions(const IntegralForm& form,
                                     const CutoffPsi& psi, int64_t lambda,
                                     WorkBudget* budget) {
  WeightedSolutions ws;
  ws.lambda = lambda;
  ws.points = enumerate_solutions(form, lambda, psi, budget);
  double scale = lambda > 0 ? std::pow(double(lambda), 1.0 / form.degree()) : 1.0;
  KahanSum total;
  std::vector<double> y(size_t(form.dimension()));
  for (const auto& x : ws.points) {
    for (int i = 0; i < form.dimension(); ++i)
      y[size_t(i)] = double(x[size_t(i)]) / scale;
    double w = psi(y);
    ws.weights.push_back(w);
    total.add(w);
    for (int64_t c : x)
      ws.radius = std::max<int64_t>(ws.radius, std::llabs(c));
  }
  ws.weight_total = total.value();
  return ws;
}

GridFunction apply_average(const WeightedSolutions& sols, const GridFunction& f,
                           WorkBudget* budget) {
  if (!(sols.weight_total > 0))
    throw input_error("apply_average: lambda carries no psi-mass");
  GridFunction out = f.kind() == GridKind::box
                         ? GridFunction::box(f.dimension(),
                                             f.half_width() + sols.radius)
                         : GridFunction::torus(f.dimension(), f.side());
  if (budget)
    budget->charge(uint64_t(f.cells()) * uint64_t(sols.points.size()),
                   "apply_average");
  double inv = 1.0 / sols.weight_total;
  std::vector<int64_t> y(size_t(f.dimension()));
  for (int64_t flat = 0; flat < f.cells(); ++flat) {
    cplx v = f.values()[size_t(flat)];
    if (v == cplx(0, 0)) continue;
    auto z = f.coordinates(flat);
    for (size_t s = 0; s < sols.points.size(); ++s) {
      double w = sols.weights[s];
      if (w == 0.0) continue;
      for (int i = 0; i < f.dimension(); ++i)
        y[size_t(i)] = z[size_t(i)] + sols.points[s][size_t(i)];
      out.at(y) += inv * w * v;  // (Af)(z + x) accumulates f(z) psi(x)/r
    }
  }
  return out;
}

GridFunction apply_average(const IntegralForm& form, const CutoffPsi& psi,
                           int64_t lambda, const GridFunction& f,
                           WorkBudget* budget) {
  return apply_average(weighted_solutions(form, psi, lambda, budget), f, budget);
}

// --------------------------------------------------------------- multiplier

GridFunction apply_multiplier(
    const std::function<cplx(const std::vector<double>&)>& symbol,
    const GridFunction& f, WorkBudget* budget) {
  if (f.kind() != GridKind::torus)
    throw input_error("apply_multiplier: torus input required");
  int n = f.dimension();
  int64_t N = f.side();
  if (budget)
    budget->charge(uint64_t(f.cells()) * uint64_t(64 + 2 * N), "apply_multiplier");
  GridFunction out = f;
  std::vector<int64_t> shape(size_t(n), N);
  fft_forward_nd(out.values(), shape);
  std::vector<double> xi(static_cast<size_t>(n));
  for (int64_t flat = 0; flat < out.cells(); ++flat) {
    int64_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      int64_t m = rem % N;
      rem /= N;
      if (2 * m >= N) m -= N;  // fold to [-1/2, 1/2)
      xi[size_t(i)] = double(m) / double(N);
    }
    out.values()[size_t(flat)] *= symbol(xi);
  }
  fft_inverse_nd(out.values(), shape);
  return out;
}

GridFunction maximal_apply(const IntegralForm& form, const CutoffPsi& psi,
                           const std::vector<int64_t>& lambdas,
                           const GridFunction& f, WorkBudget* budget) {
  if (lambdas.empty()) throw input_error("maximal_apply: empty lambda list");
  std::vector<WeightedSolutions> sols;
  int64_t pad = 0;
  for (int64_t lambda : lambdas) {
    sols.push_back(weighted_solutions(form, psi, lambda, budget));
    pad = std::max(pad, sols.back().radius);
  }
  GridFunction out = f.kind() == GridKind::box
                         ? GridFunction::box(f.dimension(), f.half_width() + pad)
                         : GridFunction::torus(f.dimension(), f.side());
  std::vector<int64_t> x(size_t(f.dimension()));
  for (const auto& ws : sols) {
    GridFunction one = apply_average(ws, f, budget);
    for (int64_t flat = 0; flat < one.cells(); ++flat) {
      cplx v = one.values()[size_t(flat)];
      if (v == cplx(0, 0)) continue;
      auto y = one.coordinates(flat);
      cplx& slot = out.at(y);
      slot = cplx(std::max(slot.real(), std::abs(v)), 0.0);
    }
  }
  return out;
}

double norm_ratio(const GridFunction& g, const GridFunction& f, double p) {
  double nf = f.norm(p);
  if (!(nf > 0)) throw input_error("norm_ratio: zero input function");
  return g.norm(p) / nf;
}

MaximalProbe probe_maximal_level(
    const IntegralForm& form, const std::vector<int64_t>& lambdas, int j,
    double p, int64_t N,
    const std::function<cplx(int64_t lambda, const std::vector<double>&)>&
        level_symbol,
    uint64_t seed, WorkBudget* budget) {
  if (lambdas.empty()) throw input_error("probe_maximal_level: empty lambda list");
  int n = form.dimension();

  // Trial family: delta, residue-class indicators, seeded random signs.
  std::vector<GridFunction> trials;
  {
    GridFunction delta = GridFunction::torus(n, N);
    delta.values()[0] = cplx(1, 0);
    trials.push_back(delta);
    for (int64_t q : {int64_t(2), int64_t(3)}) {
      GridFunction ind = GridFunction::torus(n, N);
      for (int64_t flat = 0; flat < ind.cells(); ++flat) {
        auto x = ind.coordinates(flat);
        bool in = true;
        for (int64_t c : x) in = in && (c % q == 0);
        if (in) ind.values()[size_t(flat)] = cplx(1, 0);
      }
      trials.push_back(ind);
    }
    RandomStream rng(seed, 0x512Dull);
    GridFunction rad = GridFunction::torus(n, N);
    for (auto& v : rad.values())
      v = cplx(rng.next_u64() & 1 ? 1.0 : -1.0, 0.0);
    trials.push_back(rad);
  }

  MaximalProbe probe;
  probe.j = j;
  probe.p = p;
  for (const auto& f : trials) {
    GridFunction sup = GridFunction::torus(n, N);
    for (int64_t lambda : lambdas) {
      GridFunction g = apply_multiplier(
          [&](const std::vector<double>& xi) { return level_symbol(lambda, xi); },
          f, budget);
      for (size_t i = 0; i < sup.values().size(); ++i) {
        double m = std::max(sup.values()[i].real(), std::abs(g.values()[i]));
        sup.values()[i] = cplx(m, 0.0);
      }
    }
    probe.per_trial.push_back(norm_ratio(sup, f, p));
    probe.best = std::max(probe.best, probe.per_trial.back());
  }
  return probe;
}

}  // namespace diomax
