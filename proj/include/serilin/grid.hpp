#pragma once

#include <Eigen/Core>

#include <array>
#include <string>

namespace serilin {

/// Uniform tensor grid in one or two dimensions.
///
/// Periodic grids hold `count` samples at lo + i*h with h = (hi - lo)/count
/// (the right endpoint is identified with the left one). Non-periodic grids are
/// vertex grids holding both endpoints: `count` samples with h = (hi - lo)/(count - 1).
/// Two-dimensional grids are stored row-major in x: index = j*nx + i.
struct UniformGrid {
  int dimension = 1;
  std::array<int, 2> count{0, 1};
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 0.0};
  bool periodic = false;

  static UniformGrid periodic_unit(int samples);
  static UniformGrid interval(double lo, double hi, int points);
  static UniformGrid square(double lo, double hi, int pointsPerAxis);

  int size() const { return dimension == 1 ? count[0] : count[0] * count[1]; }
  double spacing(int axis = 0) const;
  double coordinate(int i, int axis = 0) const { return lo[axis] + i * spacing(axis); }
  int index(int i, int j) const { return j * count[0] + i; }

  bool operator==(const UniformGrid&) const = default;
};

std::string describe(const UniformGrid& grid);

template <typename Scalar>
struct BasicGridField {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  UniformGrid grid;
  Vector values;

  BasicGridField() = default;
  explicit BasicGridField(const UniformGrid& g) : grid(g), values(Vector::Zero(g.size())) {}
  BasicGridField(const UniformGrid& g, Vector v) : grid(g), values(std::move(v)) {}

  Eigen::Index size() const { return values.size(); }
  Scalar& operator[](Eigen::Index i) { return values[i]; }
  const Scalar& operator[](Eigen::Index i) const { return values[i]; }
};

using GridField = BasicGridField<double>;

/// Samples f(x) on a one-dimensional grid.
template <typename F>
GridField sample(const UniformGrid& grid, F&& f) {
  GridField out(grid);
  for (int i = 0; i < grid.count[0]; ++i) out[i] = f(grid.coordinate(i));
  return out;
}

/// Samples f(x, y) on a two-dimensional grid.
template <typename F>
GridField sample2d(const UniformGrid& grid, F&& f) {
  GridField out(grid);
  for (int j = 0; j < grid.count[1]; ++j)
    for (int i = 0; i < grid.count[0]; ++i)
      out[grid.index(i, j)] = f(grid.coordinate(i, 0), grid.coordinate(j, 1));
  return out;
}

/// Throws StructuralError when the two grids differ.
void require_same_grid(const UniformGrid& a, const UniformGrid& b, const char* context);

}  // namespace serilin
