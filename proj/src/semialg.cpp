#include "convin/semialg.hpp"

#include <sstream>
#include <stdexcept>

namespace convin {

std::optional<Polynomial> SemialgebraicSet::ball_polynomial() const {
  if (!ball_radius) return std::nullopt;
  Polynomial b(n);
  for (int j = 0; j < n; ++j) {
    Monomial m = Monomial::constant(n);
    m.exponents[j] = 2;
    b.add_term(m, 1.0);
  }
  b.add_term(Monomial::constant(n), -(*ball_radius) * (*ball_radius));
  return b;
}

bool membership(const SemialgebraicSet& S, const std::vector<double>& x,
                double tol) {
  if (static_cast<int>(x.size()) != S.n)
    throw std::invalid_argument("membership: point dimension mismatch");
  for (const auto& p : S.ineqs)
    if (p.eval(x) > tol) return false;
  if (auto b = S.ball_polynomial())
    if (b->eval(x) > tol) return false;
  return true;
}

std::size_t RegionRaster::cells() const {
  std::size_t c = 1;
  for (int r : resolution) c *= static_cast<std::size_t>(r);
  return c;
}

std::size_t RegionRaster::index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < idx.size(); ++d)
    flat = flat * resolution[d] + idx[d];
  return flat;
}

std::vector<double> RegionRaster::gridpoint(const std::vector<int>& idx) const {
  std::vector<double> x(idx.size());
  for (std::size_t d = 0; d < idx.size(); ++d) {
    double lo = bbox[d][0], hi = bbox[d][1];
    x[d] = lo + (hi - lo) * idx[d] / (resolution[d] - 1);
  }
  return x;
}

RegionRaster rasterize(const SemialgebraicSet& S,
                       const std::vector<std::array<double, 2>>& bbox,
                       const std::vector<int>& resolution) {
  if (S.n != 2 && S.n != 3)
    throw std::invalid_argument("rasterize: only 2D and 3D sets supported");
  if (static_cast<int>(bbox.size()) != S.n ||
      static_cast<int>(resolution.size()) != S.n)
    throw std::invalid_argument("rasterize: bbox/resolution dimension mismatch");
  for (int r : resolution)
    if (r < 2) throw std::invalid_argument("rasterize: resolution must be >= 2");

  RegionRaster out;
  out.bbox = bbox;
  out.resolution = resolution;
  out.mask.assign(out.cells(), 0);

  std::vector<int> idx(S.n, 0);
  bool done = false;
  while (!done) {
    out.mask[out.index(idx)] = membership(S, out.gridpoint(idx), 0.0) ? 1 : 0;
    int d = S.n - 1;
    while (d >= 0 && ++idx[d] == resolution[d]) idx[d--] = 0;
    done = d < 0;
  }
  return out;
}

std::string raster_csv(const RegionRaster& r) {
  std::ostringstream out;
  if (r.resolution.size() == 2) {
    out << "x1,x2,inside\n";
    for (int i = 0; i < r.resolution[0]; ++i)
      for (int j = 0; j < r.resolution[1]; ++j) {
        auto x = r.gridpoint({i, j});
        out << x[0] << "," << x[1] << ","
            << int(r.mask[r.index({i, j})]) << "\n";
      }
  } else {
    out << "x1,x2,x3,inside\n";
    for (int i = 0; i < r.resolution[0]; ++i)
      for (int j = 0; j < r.resolution[1]; ++j)
        for (int k = 0; k < r.resolution[2]; ++k) {
          auto x = r.gridpoint({i, j, k});
          out << x[0] << "," << x[1] << "," << x[2] << ","
              << int(r.mask[r.index({i, j, k})]) << "\n";
        }
  }
  return out.str();
}

std::string raster_svg(const RegionRaster& outer, const RegionRaster* inner) {
  if (outer.resolution.size() != 2)
    throw std::invalid_argument("raster_svg: 2D rasters only");
  const int nx = outer.resolution[0], ny = outer.resolution[1];
  const double w = 600.0, h = 600.0;
  const double cw = w / nx, ch = h / ny;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  // Two tones: input set light gray, inner approximation dark gray.
  auto emit_layer = [&](const RegionRaster& r, const char* fill) {
    for (int j = 0; j < ny; ++j) {
      int run = -1;
      for (int i = 0; i <= nx; ++i) {
        bool on = i < nx && r.mask[r.index({i, j})];
        if (on && run < 0) run = i;
        if (!on && run >= 0) {
          out << "<rect x=\"" << run * cw << "\" y=\"" << (ny - 1 - j) * ch
              << "\" width=\"" << (i - run) * cw << "\" height=\"" << ch
              << "\" fill=\"" << fill << "\"/>\n";
          run = -1;
        }
      }
    }
  };
  emit_layer(outer, "#cccccc");
  if (inner) emit_layer(*inner, "#555555");
  out << "</svg>\n";
  return out.str();
}

}  // namespace convin
