#pragma once

#include <string>
#include <vector>

#include "fml/ifs.hpp"
#include "fml/word.hpp"

namespace fml {

struct AxisBox {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  static AxisBox unit(std::size_t dimension);
};

/// The image S_w(seed) of the seed box: its 2^d corners, with bit k of the
/// corner index choosing lower/upper in coordinate k. For d = 2 the corners
/// are reordered to trace the boundary.
struct GenerationPiece {
  Word word;
  std::vector<std::vector<double>> vertices;
};

/// All m^n images S_{w_1} o ... o S_{w_n}(seed) in lexicographic word order.
/// Throws ResourceLimitError when m^n exceeds max_pieces and InvalidArgument
/// when the IFS has no geometry or the box dimension does not match.
std::vector<GenerationPiece> generation_geometry(const IteratedFunctionSystem& ifs, int n,
                                                 const AxisBox& seed,
                                                 std::size_t max_pieces = std::size_t{1} << 20);

/// Sufficient check for separation: the first-generation images of the seed
/// box have pairwise disjoint bounding boxes.
bool seed_images_disjoint(const IteratedFunctionSystem& ifs, const AxisBox& seed);

/// SVG drawing with one shape element per piece (rect for intervals,
/// polygon in the plane). Only d = 1 and d = 2 are supported.
std::string render_svg(const std::vector<GenerationPiece>& pieces, const AxisBox& seed);

}  // namespace fml
