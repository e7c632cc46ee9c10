#include "torusdet/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace torusdet {

void require_dimension(int dim) {
  if (dim < 1 || dim > kMaxDimension) {
    throw InvalidArgument("dimension must lie in [1, " + std::to_string(kMaxDimension) +
                          "], got " + std::to_string(dim));
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> coords)
    : MultiIndex(std::span<const int>(coords.begin(), coords.size())) {}

MultiIndex::MultiIndex(std::span<const int> coords) {
  require_dimension(static_cast<int>(coords.size()));
  dim_ = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

MultiIndex MultiIndex::zero(int dim) {
  require_dimension(dim);
  MultiIndex k;
  k.dim_ = dim;
  return k;
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  MultiIndex k = zero(dim);
  k[axis] = 1;
  return k;
}

void require_same_dimension(const MultiIndex& a, const MultiIndex& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("multi-index dimensions differ: " + std::to_string(a.dimension()) +
                            " vs " + std::to_string(b.dimension()));
  }
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  require_same_dimension(*this, o);
  MultiIndex r = *this;
  for (int i = 0; i < dim_; ++i) r[i] += o[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  require_same_dimension(*this, o);
  MultiIndex r = *this;
  for (int i = 0; i < dim_; ++i) r[i] -= o[i];
  return r;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r = *this;
  for (int i = 0; i < dim_; ++i) r[i] = -r[i];
  return r;
}

std::int64_t MultiIndex::norm_squared() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += static_cast<std::int64_t>(coords_[i]) * coords_[i];
  return s;
}

int MultiIndex::max_abs() const {
  int m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(coords_[i]));
  return m;
}

int MultiIndex::total() const {
  int s = 0;
  for (int i = 0; i < dim_; ++i) s += coords_[i];
  return s;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

std::size_t MultiIndexHash::operator()(const MultiIndex& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.dimension());
  for (int c : k.coords()) {
    h ^= std::hash<int>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

double lp_norm(const LatticeSequence& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& [k, v] : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw InvalidArgument("lp_norm requires p >= 1");
  double s = 0.0;
  for (const auto& [k, v] : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

TruncationWindow::TruncationWindow(int dimension, int r) : dim(dimension), radius(r) {
  require_dimension(dimension);
  if (r < 0) throw InvalidArgument("window radius must be nonnegative");
}

std::size_t TruncationWindow::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(side());
  return s;
}

bool TruncationWindow::contains(const MultiIndex& k) const {
  return k.dimension() == dim && k.max_abs() <= radius;
}

std::size_t TruncationWindow::index_of(const MultiIndex& k) const {
  std::size_t idx = 0;
  const auto s = static_cast<std::size_t>(side());
  for (int i = 0; i < dim; ++i) idx = idx * s + static_cast<std::size_t>(k[i] + radius);
  return idx;
}

MultiIndex TruncationWindow::point_at(std::size_t index) const {
  MultiIndex k = MultiIndex::zero(dim);
  const auto s = static_cast<std::size_t>(side());
  for (int i = dim - 1; i >= 0; --i) {
    k[i] = static_cast<int>(index % s) - radius;
    index /= s;
  }
  return k;
}

std::vector<MultiIndex> enumerate_window(const TruncationWindow& w) {
  std::vector<MultiIndex> points;
  points.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) points.push_back(w.point_at(i));
  return points;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace torusdet
