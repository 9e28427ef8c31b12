#pragma once

#include "serilin/hierarchy.hpp"

#include <Eigen/Core>

#include <cmath>

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace serilin {

/// Integer partition of n in multiplicity form: mult[j-1] = p_j, sum j p_j = n.
struct Partition {
  std::vector<int> mult;

  int n() const;
  int norm() const;  // ||p||_1
  bool operator==(const Partition&) const = default;
};

/// All partitions of n (1 <= n <= 24), in a fixed deterministic order.
std::vector<Partition> enumerate_partitions(int n);

/// alpha_m(p) = m (m-1) ... (m - ||p|| + 1) / prod p_j!.
double partition_alpha(int m, const Partition& p);
/// beta(r) = (-1)^{||r|| - 1} (||r|| - 1)! / prod r_i!.
double partition_beta(const Partition& r);

/// Gradients of u_0..u_{K-1} at the forcing evaluation points. Each entry is a
/// points x dimension matrix; pair products <grad u_a, grad u_b> are cached.
class GradientTable {
 public:
  GradientTable() = default;
  explicit GradientTable(std::vector<Eigen::MatrixXd> gradients);

  int orders() const { return static_cast<int>(grads_.size()); }
  int points() const { return grads_.empty() ? 0 : static_cast<int>(grads_.front().rows()); }
  int dimension() const { return grads_.empty() ? 0 : static_cast<int>(grads_.front().cols()); }
  const Eigen::MatrixXd& gradient(int order) const { return grads_.at(order); }

  /// <grad u_a, grad u_b> per point (symmetric cache).
  const Eigen::VectorXd& pair(int a, int b) const;
  /// |grad u_0| == 0 at the point.
  bool degenerate(int point) const { return pair(0, 0)[point] == 0.0; }

 private:
  std::vector<Eigen::MatrixXd> grads_;
  mutable std::map<std::pair<int, int>, Eigen::VectorXd> pairs_;
};

/// Homotopy-dependent coefficient table H[l][m] = (1/m!) [delta^l] h(delta)^m for
/// 1 <= m <= l <= n.
std::vector<std::vector<double>> homotopy_power_table(const HomotopySpec& spec, int n);

/// Vector field F_n with (d/dt - Laplacian) u_n = div F_n for the p-Laplacian
/// homotopy. Uses gradients of orders 0..n-1 only. At points where grad u_0 = 0,
/// F_n = 0 when n = 1 or all lower gradients vanish there; otherwise a
/// SingularForcingError names the point.
Eigen::MatrixXd plap_forcing(int n, const GradientTable& table, const HomotopySpec& spec);

/// Source of order n for the free-space 1D Duhamel oracle: F(s, y), plus its
/// spatial extent (center and decay width) at time s.
struct DuhamelSource {
  std::function<double(double s, double y)> F;
  std::function<double(double s)> center = [](double) { return 0.0; };
  std::function<double(double s)> width = [](double s) { return std::sqrt(4.0 * s); };
};

struct DuhamelOptions {
  int timePanels = 12;
  int points = 20;
  double decayWidths = 9.0;
  double spatialPanel = 0.25;  // in units of the local length scale
};

/// u(t, x) = int_{t0}^{t} int H_2(t - s, x - y) d_y F(s, y) dy ds, evaluated as
/// int int d_x H_2(t - s, x - y) F(s, y) dy ds with singularity-removing substitutions.
/// DomainError when F has not decayed at the edges of its declared extent.
double duhamel_reference(const DuhamelSource& source, double t0, double t, double x,
                         const DuhamelOptions& options = {});

}  // namespace serilin
