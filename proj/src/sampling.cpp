#include "hydroham/sampling.hpp"

#include <cmath>
#include <sstream>

#include "hydroham/errors.hpp"

namespace hydroham {

std::string to_string(const Point& p) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (int i = 0; i < p.dimension(); ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ')';
  return out.str();
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SamplePlan SamplePlan::uniform(int n, double lo, double hi) {
  SamplePlan p;
  p.box.assign(static_cast<std::size_t>(n), Interval{lo, hi});
  return p;
}

void SamplePlan::validate() const {
  if (box.empty()) throw InvalidInput("sample plan has no dimensions");
  if (count < 1) throw InvalidInput("sample count must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
  if (floor < 0.0) throw InvalidInput("absolute floor must be >= 0");
  if (retry_budget < 0) throw InvalidInput("retry budget must be >= 0");
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!(box[i].lo < box[i].hi)) {
      throw InvalidInput("sampling interval " + std::to_string(i + 1) + " must satisfy lo < hi");
    }
  }
}

Point SamplePlan::point(int index, int attempt) const {
  std::vector<double> coords(box.size());
  const std::uint64_t base = mix64(seed ^ mix64(static_cast<std::uint64_t>(index) * 0x100000001b3ULL +
                                                static_cast<std::uint64_t>(attempt)));
  for (std::size_t d = 0; d < box.size(); ++d) {
    const std::uint64_t bits = mix64(base + d);
    const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
    coords[d] = box[d].lo + unit * (box[d].hi - box[d].lo);
  }
  return Point(std::move(coords));
}

}  // namespace hydroham
