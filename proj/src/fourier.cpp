#include "torusdet/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

namespace torusdet {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_grid(int dim, int m) {
  require_dimension(dim);
  if (m < 1) throw InvalidArgument("grid size must be at least 1");
}

/// In-place-safe n-dimensional DFT with the given sign; no normalization.
std::vector<Complex> dft(const std::vector<Complex>& in, int dim, int m, int sign) {
  std::vector<Complex> src = in;
  std::vector<Complex> dst(in.size());
  std::vector<int> dims(static_cast<std::size_t>(dim), m);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(dim, dims.data(), reinterpret_cast<fftw_complex*>(src.data()),
                         reinterpret_cast<fftw_complex*>(dst.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return dst;
}

std::size_t grid_index(const MultiIndex& k, int m) {
  std::size_t idx = 0;
  for (int i = 0; i < k.dimension(); ++i) {
    const int r = ((k[i] % m) + m) % m;
    idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(r);
  }
  return idx;
}

}  // namespace

GridFunction::GridFunction(int dimension, int m) : dim(dimension), grid_size(m) {
  require_grid(dimension, m);
  std::size_t total = 1;
  for (int i = 0; i < dimension; ++i) total *= static_cast<std::size_t>(m);
  samples.assign(total, Complex(0.0, 0.0));
}

GridFunction GridFunction::sample(int dimension, int m,
                                  const std::function<Complex(std::span<const double>)>& f) {
  GridFunction g(dimension, m);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::vector<double> x = g.point(i);
    g.samples[i] = f(x);
  }
  return g;
}

std::vector<double> GridFunction::point(std::size_t i) const {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int a = dim - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = static_cast<double>(i % static_cast<std::size_t>(grid_size)) / grid_size;
    i /= static_cast<std::size_t>(grid_size);
  }
  return x;
}

LatticeSequence fourier_coeffs(const GridFunction& f, const TruncationWindow& w) {
  if (w.dim != f.dim) throw DimensionMismatch("window and grid dimensions differ");
  if (f.grid_size <= 2 * w.radius) {
    throw AliasingError("grid size " + std::to_string(f.grid_size) + " cannot resolve radius " +
                        std::to_string(w.radius) + " (needs M > 2N)");
  }
  const std::vector<Complex> spec = dft(f.samples, f.dim, f.grid_size, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(f.size());
  LatticeSequence out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex k = w.point_at(i);
    out.emplace(k, spec[grid_index(k, f.grid_size)] * scale);
  }
  return out;
}

GridFunction synthesize(const LatticeSequence& coeffs, int dim, int grid_size) {
  GridFunction g(dim, grid_size);
  const int limit = alias_free_radius(grid_size);
  std::vector<Complex> spec(g.size(), Complex(0.0, 0.0));
  for (const auto& [k, c] : coeffs) {
    if (k.dimension() != dim) throw DimensionMismatch("coefficient dimension differs from grid");
    if (c == Complex(0.0, 0.0)) continue;
    if (k.max_abs() > limit) {
      throw AliasingError("coefficient at " + k.to_string() + " aliases on a grid of size " +
                          std::to_string(grid_size));
    }
    spec[grid_index(k, grid_size)] += c;
  }
  g.samples = dft(spec, dim, grid_size, FFTW_BACKWARD);
  return g;
}

GridFunction gamma_apply(const SparseL1Matrix& a, const GridFunction& f) {
  if (a.dimension() != f.dim) throw DimensionMismatch("matrix and grid dimensions differ");
  const TruncationWindow w(f.dim, alias_free_radius(f.grid_size));
  LatticeSequence c = fourier_coeffs(f, w);
  double biggest = 0.0;
  for (const auto& [k, v] : c) biggest = std::max(biggest, std::abs(v));
  std::erase_if(c, [&](const auto& kv) { return std::abs(kv.second) <= 1e-13 * biggest; });
  return synthesize(torusdet::apply(a, c), f.dim, f.grid_size);
}

double sobolev_norm(const LatticeSequence& coeffs, double s) {
  double sum = 0.0;
  for (const auto& [k, v] : coeffs) {
    sum += std::pow(1.0 + static_cast<double>(k.norm_squared()), s) * std::norm(v);
  }
  return std::sqrt(sum);
}

double grid_l2_norm(const GridFunction& f) {
  double sum = 0.0;
  for (const auto& v : f.samples) sum += std::norm(v);
  return std::sqrt(sum / static_cast<double>(f.size()));
}

}  // namespace torusdet
