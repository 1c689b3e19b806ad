#include "hydroham/geometry.hpp"

#include <cmath>
#include <string>

#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"

namespace hydroham {

DegenerateMetricError::DegenerateMetricError(double det, std::vector<double> point)
    : Error("degenerate metric: scaled |det| = " + std::to_string(std::abs(det)) + " at " +
            hydroham::to_string(Point(point))),
      det_(det),
      point_(std::move(point)) {}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void validate_entries(const std::vector<Expr>& entries, std::size_t expected, int n, const char* what) {
  if (n < 1) throw InvalidInput(std::string(what) + ": dimension must be >= 1");
  if (entries.size() != expected) {
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(expected) + " entries, got " +
                       std::to_string(entries.size()));
  }
  for (const auto& e : entries) {
    if (e.max_variable_index() > n) {
      throw InvalidInput(std::string(what) + ": entry '" + e.to_string() + "' uses a variable beyond dimension " +
                         std::to_string(n));
    }
  }
}

using JetMatrix = std::vector<Jet>;  // row-major n x n

JetMatrix metric_jets(const MetricField& g, const Point& p, int order) {
  JetMatrix m;
  m.reserve(g.entries.size());
  for (const auto& e : g.entries) m.push_back(eval_jet(e, p, order));
  return m;
}

Eigen::MatrixXd values(const JetMatrix& m, int n) {
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m[static_cast<std::size_t>(i) * n + j].value();
  }
  return out;
}

void require_nondegenerate(const Eigen::MatrixXd& m, const Point& p) {
  const double det = scaled_determinant(m);
  if (!(std::abs(det) >= kDegeneracyFloor)) throw DegenerateMetricError(det, p.vector());
}

void require_dimension(int n, const Point& p) {
  if (p.dimension() != n) {
    throw InvalidInput("point dimension " + std::to_string(p.dimension()) + " does not match field dimension " +
                       std::to_string(n));
  }
}

}  // namespace

MetricField::MetricField(int n) : dimension(n), entries(static_cast<std::size_t>(n) * n) {}

void MetricField::validate() const {
  validate_entries(entries, static_cast<std::size_t>(dimension) * dimension, dimension, "metric");
}

ConnectionField::ConnectionField(int n) : dimension(n), entries(static_cast<std::size_t>(n) * n * n) {}

void ConnectionField::validate() const {
  validate_entries(entries, static_cast<std::size_t>(dimension) * dimension * dimension, dimension,
                   "connection");
}

AffinorField::AffinorField(int n, int sign) : dimension(n), sign(sign), entries(static_cast<std::size_t>(n) * n) {}

void AffinorField::validate() const {
  if (sign != 1 && sign != -1) throw InvalidInput("affinor sign must be +1 or -1");
  validate_entries(entries, static_cast<std::size_t>(dimension) * dimension, dimension, "affinor");
}

Eigen::MatrixXd evaluate(const MetricField& g, const Point& p) {
  require_dimension(g.dimension, p);
  const int n = g.dimension;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = eval_scalar(g(i, j), p);
  }
  return m;
}

Eigen::MatrixXd evaluate(const AffinorField& w, const Point& p) {
  require_dimension(w.dimension, p);
  const int n = w.dimension;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = eval_scalar(w(i, j), p);
  }
  return m;
}

Tensor3 evaluate(const ConnectionField& b, const Point& p) {
  require_dimension(b.dimension, p);
  const int n = b.dimension;
  Tensor3 t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) t(i, j, k) = eval_scalar(b(i, j, k), p);
    }
  }
  return t;
}

double scaled_determinant(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = m;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double row_max = s.row(i).cwiseAbs().maxCoeff();
    if (row_max == 0.0 || !std::isfinite(row_max)) return 0.0;
    s.row(i) /= row_max;
  }
  return s.partialPivLu().determinant();
}

Eigen::MatrixXd invert_metric(const MetricField& g, const Point& p) {
  const Eigen::MatrixXd up = evaluate(g, p);
  require_nondegenerate(up, p);
  Eigen::MatrixXd low = up.inverse();
  return 0.5 * (low + low.transpose());
}

Tensor3 christoffel_from_b(const MetricField& g, const ConnectionField& b, const Point& p, Tensor3* term_scale) {
  if (b.dimension != g.dimension) throw InvalidInput("metric and connection dimensions differ");
  const int n = g.dimension;
  const Eigen::MatrixXd low = invert_metric(g, p);
  const Tensor3 bv = evaluate(b, p);
  Tensor3 gamma(n);
  if (term_scale) *term_scale = Tensor3(n);
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
          const double t = low(s, i) * bv(i, j, k);
          acc -= t;
          scale = std::max(scale, std::abs(t));
        }
        gamma(j, s, k) = acc;
        if (term_scale) (*term_scale)(j, s, k) = scale;
      }
    }
  }
  return gamma;
}

Tensor3 levi_civita(const MetricField& g, const Point& p) {
  require_dimension(g.dimension, p);
  const int n = g.dimension;
  const JetMatrix up = metric_jets(g, p, 1);
  const Eigen::MatrixXd gu = values(up, n);
  require_nondegenerate(gu, p);
  const Eigen::MatrixXd gl = gu.inverse();
  // d_k g_lower = -g_lower (d_k g_upper) g_lower
  std::vector<Eigen::MatrixXd> dlow(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd du(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) du(i, j) = up[static_cast<std::size_t>(i) * n + j].d(k);
    }
    dlow[k] = -gl * du * gl;
  }
  Tensor3 gamma(n);
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
          acc += gu(j, m) * (dlow[k](m, s) + dlow[s](m, k) - dlow[m](s, k));
        }
        gamma(j, s, k) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

PointFrame make_frame(const MetricField& g, const Point& p, int order) {
  require_dimension(g.dimension, p);
  if (order != 1 && order != 2) throw InvalidInput("frame order must be 1 or 2");
  const int n = g.dimension;
  const auto N = static_cast<std::size_t>(n);
  const JetMatrix up = metric_jets(g, p, order);

  PointFrame f;
  f.point = p;
  f.g_upper = values(up, n);
  require_nondegenerate(f.g_upper, p);
  const JetMatrix low = invert_jet_matrix(up, n);
  f.g_lower = values(low, n);

  f.dg_upper.resize(N);
  for (int k = 0; k < n; ++k) {
    f.dg_upper[k].resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) f.dg_upper[k](i, j) = up[i * N + j].d(k);
    }
  }

  // First-kind symbols as jets of order (order - 1), then raise the index.
  std::vector<std::vector<Jet>> dlow(N);  // dlow[k][m*n+s] = d_k g_{ms}
  for (int k = 0; k < n; ++k) {
    dlow[k].reserve(N * N);
    for (const auto& e : low) dlow[k].push_back(e.derivative(k));
  }
  const int jo = order - 1;
  std::vector<Jet> gamma_jets;  // (j, s, k) row-major
  gamma_jets.reserve(N * N * N);
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) {
        Jet acc(n, jo);
        for (int m = 0; m < n; ++m) {
          const Jet first = 0.5 * (dlow[k][m * N + s] + dlow[s][m * N + k] - dlow[m][s * N + k]);
          acc += up[j * N + m].truncated(jo) * first;
        }
        gamma_jets.push_back(std::move(acc));
      }
    }
  }
  auto G = [&](int a, int b, int c) -> const Jet& { return gamma_jets[(a * N + b) * N + c]; };

  f.gamma = Tensor3(n);
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) f.gamma(j, s, k) = G(j, s, k).value();
    }
  }

  if (order == 2) {
    Curvature c{Tensor4(n), Tensor4(n), Tensor4(n), Tensor4(n)};
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < n; ++s) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            double scale = 0.0;
            auto term = [&](double t) {
              acc += t;
              scale = std::max(scale, std::abs(t));
            };
            term(G(j, s, l).d(k));
            term(-G(j, s, k).d(l));
            for (int m = 0; m < n; ++m) {
              term(f.gamma(j, m, k) * f.gamma(m, s, l));
              term(-f.gamma(j, m, l) * f.gamma(m, s, k));
            }
            c.lower(j, s, k, l) = acc;
            c.lower_scale(j, s, k, l) = scale;
          }
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            double scale = 0.0;
            for (int s = 0; s < n; ++s) {
              acc += f.g_upper(i, s) * c.lower(j, s, k, l);
              scale += std::abs(f.g_upper(i, s)) * c.lower_scale(j, s, k, l);
            }
            c.raised(i, j, k, l) = acc;
            c.raised_scale(i, j, k, l) = scale;
          }
        }
      }
    }
    f.curvature = std::move(c);
  }
  return f;
}

Curvature riemann_curvature(const MetricField& g, const Point& p) { return *make_frame(g, p, 2).curvature; }

Tensor3 covariant_derivative_affinor(const AffinorField& w, const MetricField& g, const Point& p,
                                     Tensor3* term_scale) {
  if (w.dimension != g.dimension) throw InvalidInput("affinor and metric dimensions differ");
  const int n = g.dimension;
  const auto N = static_cast<std::size_t>(n);
  const PointFrame f = make_frame(g, p, 1);
  std::vector<Jet> wj;
  wj.reserve(N * N);
  for (const auto& e : w.entries) wj.push_back(eval_jet(e, p, 1));
  Tensor3 out(n);
  if (term_scale) *term_scale = Tensor3(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double acc = wj[i * N + j].d(k);
        double scale = std::abs(acc);
        for (int s = 0; s < n; ++s) {
          const double a = f.gamma(i, s, k) * wj[s * N + j].value();
          const double b = -f.gamma(s, j, k) * wj[i * N + s].value();
          acc += a + b;
          scale = std::max({scale, std::abs(a), std::abs(b)});
        }
        out(i, j, k) = acc;
        if (term_scale) (*term_scale)(i, j, k) = scale;
      }
    }
  }
  return out;
}

}  // namespace hydroham
