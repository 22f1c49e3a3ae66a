#ifndef CATENOID_GRID_HPP
#define CATENOID_GRID_HPP

#include <stdexcept>
#include <vector>

namespace catenoid {

// Uniform grid on [-rho_max, rho_max] with rho = 0 as a node.
// Nodes are generated as (i - c)*h with integer center index c, so the
// node set is symmetric about 0 to the last bit.
struct RadialGrid {
  double rho_max = 0.0;
  int n_points = 0;
  double h = 0.0;

  RadialGrid() = default;
  RadialGrid(double rho_max_, int n_points_) : rho_max(rho_max_), n_points(n_points_) {
    if (!(rho_max > 0.0)) throw std::invalid_argument("RadialGrid: rho_max must be positive");
    if (n_points < 33) throw std::invalid_argument("RadialGrid: need n_points >= 33");
    if (n_points % 2 == 0) throw std::invalid_argument("RadialGrid: n_points must be odd so rho=0 is a node");
    h = 2.0 * rho_max / (n_points - 1);
  }

  int center() const { return (n_points - 1) / 2; }
  double node(int i) const { return (i - center()) * h; }

  std::vector<double> nodes() const {
    std::vector<double> r(n_points);
    for (int i = 0; i < n_points; ++i) r[i] = node(i);
    return r;
  }
};

}  // namespace catenoid

#endif
