#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "gdifs/config.hpp"
#include "gdifs/dimension.hpp"
#include "gdifs/errors.hpp"
#include "gdifs/render.hpp"

using namespace gdifs;

namespace {

PipelineConfig load_config(const std::string& leaf) {
    return parse_config(std::string(GDIFS_CONFIG_DIR) + "/" + leaf);
}

GifsSystem build_system(const PipelineConfig& config) {
    const LabeledDigraph nbr = build_neighbor_graph(*config.ifs);
    LabeledDigraph og = extract_overlap_graph(nbr);
    GifsSystem system = build_gifs(og);
    system.ifs = config.ifs;
    system.ratio = config.ifs->ratio;
    return system;
}

// Independent count oracle: number of depth-d pieces of B_k equals the k-th
// row sum of the d-th power of the incidence matrix.
long piece_count_oracle(const IncidenceMatrix& m, int k, int depth) {
    const int n = m.size();
    std::vector<mpq_class> row(n, 0);
    row[k - 1] = 1;
    for (int step = 0; step < depth; ++step) {
        std::vector<mpq_class> next(n, 0);
        for (int a = 0; a < n; ++a)
            if (row[a] != 0)
                for (int b = 0; b < n; ++b) next[b] += row[a] * m.entries[a][b];
        row = std::move(next);
    }
    mpq_class total = 0;
    for (const auto& q : row) total += q;
    return static_cast<long>(total.get_d());
}

// Plain quadratic-time directed Hausdorff distance for comparison.
double brute_hausdorff(const PointCloud& p, const PointCloud& q) {
    auto directed = [](const PointCloud& a, const PointCloud& b) {
        double worst = 0.0;
        for (const auto& x : a.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : b.points) {
                const double dx = x.z.real() - y.z.real();
                const double dy = x.z.imag() - y.z.imag();
                const double d = dx * dx + dy * dy;
                if (d < best) best = d;
            }
            if (best > worst) worst = best;
        }
        return worst;
    };
    return std::sqrt(std::max(directed(p, q), directed(q, p)));
}

PointCloud random_cloud(std::mt19937& rng, int n, double spread) {
    std::uniform_real_distribution<double> coord(-spread, spread);
    PointCloud cloud;
    for (int k = 0; k < n; ++k)
        cloud.points.push_back({{coord(rng), coord(rng)}, 1 + k % 3});
    return cloud;
}

} // namespace

TEST_CASE("piece expansion matches the incidence-power oracle") {
    const GifsSystem system = build_system(load_config("gaussian_square.json"));
    const IncidenceMatrix m = incidence_matrix(system);
    for (int depth = 0; depth <= 4; ++depth) {
        const auto pieces = expand_pieces(system, 1, depth);
        CHECK(static_cast<long>(pieces.size()) == piece_count_oracle(m, 1, depth));
        for (const Piece& p : pieces) {
            CHECK(p.depth == depth);
            CHECK(std::abs(std::abs(p.a) - std::pow(system.ratio, depth)) < 1e-9);
        }
    }

    SUBCASE("depth zero is the identity piece") {
        const auto pieces = expand_pieces(system, 1, 0);
        REQUIRE(pieces.size() == 1);
        CHECK(pieces[0].a == std::complex<double>(1.0, 0.0));
        CHECK(pieces[0].b == std::complex<double>(0.0, 0.0));
        CHECK(pieces[0].type == 1);
    }
    SUBCASE("rendering an imported system without maps is rejected") {
        const GifsSystem imported =
            build_gifs(*load_config("imported_overlap_graph.json").overlap_graph);
        CHECK_THROWS_AS(expand_pieces(imported, 1, 2), ValidationError);
    }
}

TEST_CASE("point clouds default to the first map's fixed point and stay bounded") {
    const PipelineConfig config = load_config("gaussian_square.json");
    const GifsSystem system = build_system(config);

    const PointCloud seed_only = point_cloud(system, 1, 0);
    REQUIRE(seed_only.points.size() == 1);
    const std::complex<double> a = config.ifs->maps[0].a.embed();
    const std::complex<double> b = config.ifs->maps[0].b.embed();
    CHECK(std::abs(seed_only.points[0].z - b / (1.0 - a)) < 1e-12);

    const double bound = 2.0 * config.ifs->bounding_radius() + 1e-9;
    const PointCloud cloud = point_cloud(system, 1, 5);
    for (const auto& p : cloud.points) CHECK(std::abs(p.z) <= bound);

    const PointCloud ifs_cloud = point_cloud(*config.ifs, 5);
    CHECK(ifs_cloud.points.size() == std::size_t(std::pow(4, 5)));
    for (const auto& p : ifs_cloud.points) CHECK(std::abs(p.z) <= bound);
}

TEST_CASE("grid-accelerated Hausdorff distance is bit-identical to brute force") {
    std::mt19937 rng(1123);
    for (int iter = 0; iter < 24; ++iter) {
        const int n = 30 + (iter * 97) % 900;
        PointCloud p = random_cloud(rng, n, 1.0 + iter);
        PointCloud q = random_cloud(rng, n / 2 + 1, 1.0 + iter / 2);
        const double fast = hausdorff_distance(p, q);
        const double slow = brute_hausdorff(p, q);
        CHECK(fast == slow); // bit-equal, not approximately equal
    }

    SUBCASE("identical clouds have distance zero") {
        PointCloud p = random_cloud(rng, 257, 3.0);
        CHECK(hausdorff_distance(p, p) == 0.0);
    }
    SUBCASE("known two-point distance") {
        PointCloud p, q;
        p.points.push_back({{0.0, 0.0}, 1});
        q.points.push_back({{3.0, 4.0}, 1});
        CHECK(hausdorff_distance(p, q) == 5.0);
    }
    SUBCASE("collinear clouds degenerate the grid safely") {
        PointCloud p, q;
        for (int k = 0; k < 64; ++k) {
            p.points.push_back({{double(k), 0.0}, 1});
            q.points.push_back({{double(k) + 0.25, 0.0}, 1});
        }
        CHECK(hausdorff_distance(p, q) == brute_hausdorff(p, q));
    }
    SUBCASE("empty clouds are rejected") {
        PointCloud p, q;
        q.points.push_back({{0.0, 0.0}, 1});
        CHECK_THROWS_AS(hausdorff_distance(p, q), ValidationError);
    }
}

TEST_CASE("SVG output is deterministic and well-formed") {
    const GifsSystem system = build_system(load_config("gaussian_square.json"));
    const auto pieces = expand_pieces(system, 1, 3);
    const std::string svg1 = render_svg(pieces, system);
    const std::string svg2 = render_svg(pieces, system);
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") != std::string::npos);
    CHECK(svg1.rfind("</svg>") != std::string::npos);
    CHECK(svg1.find("<polygon") != std::string::npos);
    CHECK(default_palette().size() == 16);

    const PointCloud cloud = point_cloud(system, 1, 3);
    const std::string dots = render_svg(cloud);
    CHECK(dots.find("<circle") != std::string::npos);

    const std::string path =
        (std::filesystem::temp_directory_path() / "gdifs_render_test.svg").string();
    emit_svg(pieces, system, path);
    CHECK(std::filesystem::file_size(path) == svg1.size());
    std::filesystem::remove(path);
}

TEST_CASE("DOT export names vertices and labels edges with map pairs") {
    const GifsSystem system = build_system(load_config("golden_triangle_plain.json"));
    const std::string dot = render_dot(system.graph);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    const bool has_pair_label = dot.find("(1,2)") != std::string::npos ||
                                dot.find("(2,1)") != std::string::npos;
    CHECK(has_pair_label);
}

TEST_CASE("CSV export starts with the header and one line per point") {
    PointCloud cloud;
    cloud.points.push_back({{0.5, -0.25}, 2});
    cloud.points.push_back({{1.0, 0.0}, 1});
    const std::string csv = cloud_to_csv(cloud);
    CHECK(csv.rfind("re,im,type\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find(",2\n") != std::string::npos);
}
