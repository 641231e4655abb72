#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gdifs/gifs.hpp"

namespace gdifs {

// Numeric affine map a*z + b reached by composing equation terms to a fixed
// depth; type is the attractor index the composition ends at.
struct Piece {
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};
    int type = 1;
    int depth = 0;

    std::complex<double> apply(std::complex<double> z) const { return a * z + b; }
};

struct TaggedPoint {
    std::complex<double> z;
    int type = 1;
};

struct PointCloud {
    std::vector<TaggedPoint> points;
};

// All compositions of equation terms along paths of length `depth` starting
// from attractor k. Requires the system to carry its IFS maps.
std::vector<Piece> expand_pieces(const GifsSystem& system, int k, int depth);

// Plain IFS version: all words of length `depth`, type 1 throughout.
std::vector<Piece> expand_pieces(const IfsSpec& ifs, int depth);

// Images of the seeds under every depth-level piece map. Default seed: the
// fixed point of the first map.
PointCloud point_cloud(const GifsSystem& system, int k, int depth,
                       std::vector<std::complex<double>> seeds = {});
PointCloud point_cloud(const IfsSpec& ifs, int depth,
                       std::vector<std::complex<double>> seeds = {});

// Symmetric Hausdorff distance between finite clouds. Grid-accelerated but
// bit-equal to the quadratic scan.
double hausdorff_distance(const PointCloud& p, const PointCloud& q);

// Fixed 16-color palette cycled by attractor type.
const std::vector<std::string>& default_palette();

// SVG with one convex hull per piece (hull of a 32-point deeper sample),
// filled by type color. Deterministic bytes for fixed input.
std::string render_svg(const std::vector<Piece>& pieces, const GifsSystem& system,
                       const std::vector<std::string>& palette = default_palette());
// SVG scatter of a point cloud.
std::string render_svg(const PointCloud& cloud,
                       const std::vector<std::string>& palette = default_palette());

void emit_svg(const std::vector<Piece>& pieces, const GifsSystem& system,
              const std::string& path,
              const std::vector<std::string>& palette = default_palette());
void emit_svg(const PointCloud& cloud, const std::string& path,
              const std::vector<std::string>& palette = default_palette());

// DOT export with (i,j) edge labels; vertex 0 is the identity.
std::string render_dot(const LabeledDigraph& graph);
void emit_dot(const LabeledDigraph& graph, const std::string& path);

} // namespace gdifs
