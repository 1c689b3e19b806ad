#include "hydroham/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hydroham {

namespace {

void enumerate(int nvars, int degree, int var, MultiIndexBasis::Index& cur,
               std::vector<MultiIndexBasis::Index>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    return;
  }
  for (int d = degree; d >= 0; --d) {
    cur[var] = static_cast<std::uint8_t>(d);
    enumerate(nvars, degree - d, var + 1, cur, out);
  }
  cur[var] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MultiIndexBasis::MultiIndexBasis(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1) throw std::invalid_argument("jet needs at least one variable");
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order out of range");
  Index cur(static_cast<std::size_t>(nvars), 0);
  for (int deg = 0; deg <= order; ++deg) {
    const std::size_t before = indices_.size();
    enumerate(nvars, deg, 0, cur, indices_);
    degrees_.insert(degrees_.end(), indices_.size() - before, deg);
  }
  std::uint64_t span = 1;
  for (int i = 0; i < nvars; ++i) {
    span *= static_cast<std::uint64_t>(order + 1);
    if (span > (1u << 26)) throw std::invalid_argument("jet basis too large");
  }
  lookup_.assign(span, -1);
  for (std::size_t p = 0; p < indices_.size(); ++p) lookup_[key(indices_[p])] = static_cast<long>(p);

  Index sum(static_cast<std::size_t>(nvars));
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    for (std::size_t b = 0; b < indices_.size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      for (int v = 0; v < nvars; ++v) sum[v] = static_cast<std::uint8_t>(indices_[a][v] + indices_[b][v]);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(lookup_[key(sum)])});
    }
  }
}

std::uint64_t MultiIndexBasis::key(std::span<const std::uint8_t> idx) const {
  std::uint64_t k = 0;
  for (int v = nvars_ - 1; v >= 0; --v) k = k * static_cast<std::uint64_t>(order_ + 1) + idx[v];
  return k;
}

long MultiIndexBasis::position(std::span<const std::uint8_t> idx) const {
  if (static_cast<int>(idx.size()) != nvars_) throw std::invalid_argument("multi-index arity mismatch");
  int deg = 0;
  for (auto a : idx) deg += a;
  if (deg > order_) return -1;
  return lookup_[key(idx)];
}

std::shared_ptr<const MultiIndexBasis> MultiIndexBasis::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<MultiIndexBasis>(nvars, order);
  return slot;
}

// Jet ------------------------------------------------------------------------

Jet::Jet(int nvars, int order)
    : basis_(MultiIndexBasis::get(nvars, order)), coeffs_(basis_->size(), 0.0) {}

Jet Jet::constant(int nvars, int order, double value) {
  Jet j(nvars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int order, int k, double value) {
  if (k < 0 || k >= nvars) throw std::out_of_range("jet variable index");
  Jet j(nvars, order);
  j.coeffs_[0] = value;
  if (order >= 1) {
    MultiIndexBasis::Index e(static_cast<std::size_t>(nvars), 0);
    e[k] = 1;
    j.coeffs_[j.basis_->position(e)] = 1.0;
  }
  return j;
}

double Jet::coefficient(std::span<const std::uint8_t> idx) const {
  const long p = basis_->position(idx);
  if (p < 0) throw std::out_of_range("multi-index exceeds jet order");
  return coeffs_[p];
}

double Jet::partial(std::span<const std::uint8_t> idx) const {
  double f = 1.0;
  for (auto a : idx) f *= factorial(a);
  return coefficient(idx) * f;
}

double Jet::d(int k) const {
  MultiIndexBasis::Index e(static_cast<std::size_t>(nvars()), 0);
  e.at(k) += 1;
  return partial(e);
}

double Jet::d(int k, int l) const {
  MultiIndexBasis::Index e(static_cast<std::size_t>(nvars()), 0);
  e.at(k) += 1;
  e.at(l) += 1;
  return partial(e);
}

double Jet::d(int k, int l, int m) const {
  MultiIndexBasis::Index e(static_cast<std::size_t>(nvars()), 0);
  e.at(k) += 1;
  e.at(l) += 1;
  e.at(m) += 1;
  return partial(e);
}

Jet Jet::derivative(int k) const {
  if (order() < 1) throw std::logic_error("cannot differentiate an order-0 jet");
  if (k < 0 || k >= nvars()) throw std::out_of_range("jet variable index");
  Jet out(nvars(), order() - 1);
  MultiIndexBasis::Index up;
  for (std::size_t p = 0; p < out.basis_->size(); ++p) {
    up = out.basis_->index(p);
    up[k] += 1;
    out.coeffs_[p] = coeffs_[basis_->position(up)] * up[k];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw std::logic_error("cannot raise jet order by truncation");
  Jet out(nvars(), order);
  // graded ordering: the lower-order basis is a prefix of this one
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

void Jet::require_same_shape(const Jet& o) const {
  if (basis_ != o.basis_) throw std::invalid_argument("jet shape mismatch");
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_shape(b);
  Jet out(a.nvars(), a.order());
  for (const auto& t : a.basis_->products()) out.coeffs_[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
  return out;
}

Jet Jet::compose(std::span<const double> taylor) const {
  if (static_cast<int>(taylor.size()) < order() + 1) throw std::invalid_argument("compose: too few coefficients");
  Jet h = *this;
  h.coeffs_[0] = 0.0;
  // Horner in the nilpotent part h
  Jet acc = Jet::constant(nvars(), order(), taylor[order()]);
  for (int m = order() - 1; m >= 0; --m) {
    acc = acc * h;
    acc.coeffs_[0] += taylor[m];
  }
  return acc;
}

Jet Jet::reciprocal() const {
  const double x = value();
  std::array<double, kMaxJetOrder + 1> t{};
  double inv = 1.0 / x;
  double p = inv;
  for (int m = 0; m <= order(); ++m) {
    t[m] = (m % 2 == 0 ? 1.0 : -1.0) * p;
    p *= inv;
  }
  return compose(std::span<const double>(t.data(), order() + 1));
}

Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

Jet exp(const Jet& x) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double e = std::exp(x.value());
  for (int m = 0; m <= x.order(); ++m) t[m] = e / factorial(m);
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet log(const Jet& x) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double v = x.value();
  t[0] = std::log(v);
  double p = 1.0;
  for (int m = 1; m <= x.order(); ++m) {
    p /= v;
    t[m] = (m % 2 == 1 ? 1.0 : -1.0) * p / m;
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet sin(const Jet& x) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const double cycle[4] = {s, c, -s, -c};
  for (int m = 0; m <= x.order(); ++m) t[m] = cycle[m % 4] / factorial(m);
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet cos(const Jet& x) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const double cycle[4] = {c, -s, -c, s};
  for (int m = 0; m <= x.order(); ++m) t[m] = cycle[m % 4] / factorial(m);
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet pow(const Jet& x, double p) {
  // generalized binomial: (x0 + h)^p = sum C(p, m) x0^(p - m) h^m
  std::array<double, kMaxJetOrder + 1> t{};
  const double v = x.value();
  double binom = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    t[m] = binom * std::pow(v, p - m);
    binom *= (p - m) / (m + 1);
  }
  return x.compose(std::span<const double>(t.data(), x.order() + 1));
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet pow_int(const Jet& x, long long p) {
  if (p < 0) return pow_int(x, -p).reciprocal();
  Jet result = Jet::constant(x.nvars(), x.order(), 1.0);
  Jet base = x;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return result;
}

// Gauss-Jordan with partial pivoting on the degree-0 values.
std::vector<Jet> invert_jet_matrix(std::vector<Jet> a, int n) {
  const int order = a.front().order();
  const int nv = a.front().nvars();
  std::vector<Jet> inv;
  inv.reserve(a.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv.push_back(Jet::constant(nv, order, i == j ? 1.0 : 0.0));
  }
  auto at = [n](std::vector<Jet>& m, int i, int j) -> Jet& { return m[static_cast<std::size_t>(i) * n + j]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(at(a, r, col).value()) > std::abs(at(a, pivot, col).value())) pivot = r;
    }
    if (at(a, pivot, col).value() == 0.0) throw std::domain_error("singular jet matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(at(a, pivot, j), at(a, col, j));
        std::swap(at(inv, pivot, j), at(inv, col, j));
      }
    }
    const Jet r = at(a, col, col).reciprocal();
    for (int j = 0; j < n; ++j) {
      at(a, col, j) = at(a, col, j) * r;
      at(inv, col, j) = at(inv, col, j) * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet f = at(a, row, col);
      for (int j = 0; j < n; ++j) {
        at(a, row, j) -= f * at(a, col, j);
        at(inv, row, j) -= f * at(inv, col, j);
      }
    }
  }
  return inv;
}

}  // namespace hydroham
