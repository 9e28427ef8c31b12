#include "serilin/grid.hpp"

#include "serilin/errors.hpp"

#include <sstream>

namespace serilin {

UniformGrid UniformGrid::periodic_unit(int samples) {
  if (samples < 2) throw ArgumentError("periodic grid needs at least 2 samples");
  UniformGrid g;
  g.dimension = 1;
  g.count = {samples, 1};
  g.lo = {0.0, 0.0};
  g.hi = {1.0, 0.0};
  g.periodic = true;
  return g;
}

UniformGrid UniformGrid::interval(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw ArgumentError("interval grid needs hi > lo and >= 2 points");
  UniformGrid g;
  g.dimension = 1;
  g.count = {points, 1};
  g.lo = {lo, 0.0};
  g.hi = {hi, 0.0};
  g.periodic = false;
  return g;
}

UniformGrid UniformGrid::square(double lo, double hi, int pointsPerAxis) {
  if (pointsPerAxis < 2 || !(hi > lo)) throw ArgumentError("square grid needs hi > lo and >= 2 points");
  UniformGrid g;
  g.dimension = 2;
  g.count = {pointsPerAxis, pointsPerAxis};
  g.lo = {lo, lo};
  g.hi = {hi, hi};
  g.periodic = false;
  return g;
}

double UniformGrid::spacing(int axis) const {
  const double width = hi[axis] - lo[axis];
  return periodic ? width / count[axis] : width / (count[axis] - 1);
}

std::string describe(const UniformGrid& grid) {
  std::ostringstream os;
  os << (grid.periodic ? "periodic " : "") << grid.dimension << "d grid " << grid.count[0];
  if (grid.dimension == 2) os << "x" << grid.count[1];
  os << " on [" << grid.lo[0] << "," << grid.hi[0] << "]";
  if (grid.dimension == 2) os << "x[" << grid.lo[1] << "," << grid.hi[1] << "]";
  return os.str();
}

void require_same_grid(const UniformGrid& a, const UniformGrid& b, const char* context) {
  if (!(a == b)) {
    throw StructuralError(std::string(context) + ": grid mismatch (" + describe(a) + " vs " + describe(b) + ")");
  }
}

}  // namespace serilin
