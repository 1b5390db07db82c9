#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convin/polynomial.hpp"

namespace convin {

// Basic closed semialgebraic set {x : p_i(x) <= 0 for all i}. The order of
// the defining polynomials is preserved exactly as given; it affects the
// output of the inner-approximation loop. An optional ball bound adds
// ||x||^2 <= R^2 as an auxiliary compactifying constraint: it participates
// in relaxations but is excluded from the boundary-piece loop and from
// emitted inner approximations.
struct SemialgebraicSet {
  int n = 0;
  PolyVector ineqs;
  std::optional<double> ball_radius;

  // ||x||^2 - R^2 as a polynomial, if a ball bound is set.
  std::optional<Polynomial> ball_polynomial() const;
};

bool membership(const SemialgebraicSet& S, const std::vector<double>& x,
                double tol = 0.0);

struct RegionRaster {
  std::vector<std::array<double, 2>> bbox;  // per-axis [lo, hi]
  std::vector<int> resolution;              // grid counts per axis
  std::vector<uint8_t> mask;                // row-major membership grid

  std::size_t cells() const;
  std::size_t index(const std::vector<int>& idx) const;
  std::vector<double> gridpoint(const std::vector<int>& idx) const;
};

// Membership mask over a regular grid; supports n in {2, 3}.
RegionRaster rasterize(const SemialgebraicSet& S,
                       const std::vector<std::array<double, 2>>& bbox,
                       const std::vector<int>& resolution);

// CSV rows "x1,x2,inside" (2D) for plotting pipelines.
std::string raster_csv(const RegionRaster& r);

// Flat SVG with filled cells. The base set is drawn light gray; an optional
// inner-approximation raster over the same grid is overlaid dark gray.
std::string raster_svg(const RegionRaster& outer,
                       const RegionRaster* inner = nullptr);

}  // namespace convin
