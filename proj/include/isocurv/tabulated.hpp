#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace isocurv {

/// One row of a tabulated function: abscissa, value and first derivative.
struct TableSample {
  double z = 0.0;
  double g = 0.0;
  double dg = 0.0;
};

/// Piecewise cubic Hermite interpolant through (z, g, g') samples, with the
/// Fritsch-Carlson limiter applied to slopes that would break monotonicity.
/// Evaluation is only defined inside [z_min, z_max].
class TabulatedFunction {
 public:
  struct Value {
    double g;
    double dg;
    double d2g;
  };

  /// Samples must have strictly monotone abscissae (decreasing input is
  /// reversed) and at least two rows.
  explicit TabulatedFunction(std::vector<TableSample> samples);

  Value evaluate(double z) const;

  double z_min() const { return samples_.front().z; }
  double z_max() const { return samples_.back().z; }
  const std::vector<TableSample>& samples() const { return samples_; }

  /// Number of node slopes the limiter had to modify.
  std::size_t limited_slopes() const { return limited_; }

 private:
  std::vector<TableSample> samples_;
  std::vector<double> slopes_;
  std::size_t limited_ = 0;
};

/// CSV with header "z,g,dg" and 17 significant digits.
void write_table(std::ostream& out, const std::vector<TableSample>& samples);
std::vector<TableSample> read_table(std::istream& in);

}  // namespace isocurv
