#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hydroham {

/// A point u = (u^1, ..., u^n); coordinates are 0-based.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  int dimension() const { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coordinates() const { return coords_; }
  const std::vector<double>& vector() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const Point& p);

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Where and how densely identities are sampled.
///
/// Point generation is counter-based: the coordinates of sample `index`
/// on resample `attempt` are a pure function of (seed, index, attempt), so
/// evaluation order and parallelism cannot change a report.
struct SamplePlan {
  std::vector<Interval> box;
  int count = 100;
  std::uint64_t seed = 20240917;
  double tolerance = 1e-9;
  double floor = 1e-12;
  /// Resample attempts allowed per sample point.
  int retry_budget = 32;

  static SamplePlan uniform(int n, double lo = -1.0, double hi = 1.0);

  int dimension() const { return static_cast<int>(box.size()); }

  /// Throws InvalidInput if count < 1, some lo >= hi, or tolerance <= 0.
  void validate() const;

  Point point(int index, int attempt = 0) const;

  SamplePlan with_tolerance(double tol) const {
    SamplePlan p = *this;
    p.tolerance = tol;
    return p;
  }
  SamplePlan with_count(int n) const {
    SamplePlan p = *this;
    p.count = n;
    return p;
  }
};

/// splitmix64 finalizer; exposed for tests.
std::uint64_t mix64(std::uint64_t x);

}  // namespace hydroham
