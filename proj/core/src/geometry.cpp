#include "fml/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fml/errors.hpp"

namespace fml {

namespace {

// x -> linear * x + offset, linear row-major d x d.
struct Affine {
  std::vector<double> linear;
  std::vector<double> offset;

  static Affine identity(std::size_t d) {
    Affine a{std::vector<double>(d * d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i < d; ++i) a.linear[i * d + i] = 1.0;
    return a;
  }

  static Affine from(const SimilarityMap& s) {
    const std::size_t d = s.dimension();
    Affine a{std::vector<double>(d * d, 0.0), s.translation};
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double r = s.rotation.empty() ? (i == k ? 1.0 : 0.0) : s.rotation[i * d + k];
        a.linear[i * d + k] = s.ratio * r;
      }
    }
    return a;
  }

  // (*this) o inner
  Affine then_inner(const Affine& inner) const {
    const std::size_t d = offset.size();
    Affine out{std::vector<double>(d * d, 0.0), offset};
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += linear[i * d + j] * inner.linear[j * d + k];
        out.linear[i * d + k] = acc;
        out.offset[i] += linear[i * d + k] * inner.offset[k];
      }
    }
    return out;
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t d = offset.size();
    std::vector<double> y = offset;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) y[i] += linear[i * d + k] * x[k];
    }
    return y;
  }
};

std::vector<std::vector<double>> box_corners(const AxisBox& box) {
  const std::size_t d = box.dimension();
  std::vector<std::vector<double>> corners;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = (mask >> k) & 1 ? box.upper[k] : box.lower[k];
    corners.push_back(std::move(c));
  }
  if (d == 2) std::swap(corners[2], corners[3]);  // boundary order
  return corners;
}

void check_geometry(const IteratedFunctionSystem& ifs, const AxisBox& seed) {
  if (!ifs.has_geometry()) throw InvalidArgument("the IFS has no translations; geometry is unavailable");
  if (seed.lower.size() != static_cast<std::size_t>(ifs.ambient_dimension()) ||
      seed.upper.size() != seed.lower.size()) {
    throw InvalidArgument("seed box dimension does not match the IFS");
  }
}

std::pair<std::vector<double>, std::vector<double>> bounds(
    const std::vector<std::vector<double>>& vertices) {
  std::vector<double> lo = vertices.front();
  std::vector<double> hi = vertices.front();
  for (const auto& v : vertices) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  return {lo, hi};
}

}  // namespace

AxisBox AxisBox::unit(std::size_t dimension) {
  return AxisBox{std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0)};
}

std::vector<GenerationPiece> generation_geometry(const IteratedFunctionSystem& ifs, int n,
                                                 const AxisBox& seed, std::size_t max_pieces) {
  if (n < 0) throw InvalidArgument("generation must be nonnegative");
  check_geometry(ifs, seed);
  std::size_t count = 1;
  for (int k = 0; k < n; ++k) {
    if (count > max_pieces / static_cast<std::size_t>(ifs.arity())) {
      throw ResourceLimitError("generation " + std::to_string(n) + " would produce more than " +
                               std::to_string(max_pieces) + " pieces");
    }
    count *= static_cast<std::size_t>(ifs.arity());
  }

  const std::size_t d = seed.dimension();
  std::vector<Affine> maps;
  for (const SimilarityMap& s : ifs.maps()) maps.push_back(Affine::from(s));
  const auto corners = box_corners(seed);

  std::vector<std::pair<Word, Affine>> level{{Word{}, Affine::identity(d)}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<Word, Affine>> next;
    next.reserve(level.size() * maps.size());
    for (const auto& [w, a] : level) {
      for (std::size_t i = 0; i < maps.size(); ++i) {
        next.emplace_back(w.child(static_cast<Word::Symbol>(i)), a.then_inner(maps[i]));
      }
    }
    level = std::move(next);
  }

  std::vector<GenerationPiece> out;
  out.reserve(level.size());
  for (const auto& [w, a] : level) {
    GenerationPiece piece{w, {}};
    for (const auto& c : corners) piece.vertices.push_back(a.apply(c));
    out.push_back(std::move(piece));
  }
  return out;
}

bool seed_images_disjoint(const IteratedFunctionSystem& ifs, const AxisBox& seed) {
  const auto pieces = generation_geometry(ifs, 1, seed);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> boxes;
  for (const auto& p : pieces) boxes.push_back(bounds(p.vertices));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      bool separated = false;
      for (std::size_t k = 0; k < seed.dimension() && !separated; ++k) {
        separated = boxes[i].second[k] < boxes[j].first[k] || boxes[j].second[k] < boxes[i].first[k];
      }
      if (!separated) return false;
    }
  }
  return true;
}

std::string render_svg(const std::vector<GenerationPiece>& pieces, const AxisBox& seed) {
  const std::size_t d = seed.dimension();
  if (d != 1 && d != 2) throw InvalidArgument("SVG output supports one- and two-dimensional sets");
  constexpr double size = 512.0;
  constexpr double pad = 8.0;
  const double sx = size / (seed.upper[0] - seed.lower[0]);
  const double sy = d == 2 ? size / (seed.upper[1] - seed.lower[1]) : 1.0;
  const double height = d == 2 ? size : 48.0;

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(size + 2 * pad)
      << "\" height=\"" << fmt(height + 2 * pad) << "\" viewBox=\"0 0 " << fmt(size + 2 * pad)
      << ' ' << fmt(height + 2 * pad) << "\">\n"
      << "<g fill=\"black\" stroke=\"none\">\n";
  for (const GenerationPiece& p : pieces) {
    if (d == 1) {
      const double a = std::min(p.vertices[0][0], p.vertices[1][0]);
      const double b = std::max(p.vertices[0][0], p.vertices[1][0]);
      svg << "<rect data-word=\"" << p.word.to_string() << "\" x=\"" << fmt(pad + (a - seed.lower[0]) * sx)
          << "\" y=\"" << fmt(pad) << "\" width=\"" << fmt((b - a) * sx) << "\" height=\""
          << fmt(height) << "\"/>\n";
    } else {
      svg << "<polygon data-word=\"" << p.word.to_string() << "\" points=\"";
      for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const double x = pad + (p.vertices[i][0] - seed.lower[0]) * sx;
        const double y = pad + size - (p.vertices[i][1] - seed.lower[1]) * sy;
        svg << (i ? " " : "") << fmt(x) << ',' << fmt(y);
      }
      svg << "\"/>\n";
    }
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace fml
