#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "toposon/rng.hpp"

namespace toposon {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point = Point2<double>;

/// Which per-node radius a construction reads.
enum class RadiusRole { comm, cov };

/// A transmitting node: position plus its communication, coverage and
/// rejection radii. Fictional perimeter nodes carry `boundary = true`.
struct Node {
    int id = 0;
    Point pos = Point::Zero();
    double r_comm = 0.0;
    double r_cov = 0.0;
    double r_rej = 0.0;
    bool boundary = false;

    double radius(RadiusRole role) const { return role == RadiusRole::comm ? r_comm : r_cov; }
};

/// Nodes on the square [0, side]^2. Ids are dense: nodes[i].id == i.
struct NodeSet {
    std::vector<Node> nodes;
    double side = 0.0;

    std::size_t size() const { return nodes.size(); }
    bool empty() const { return nodes.empty(); }

    const Node& operator[](std::size_t i) const { return nodes[i]; }
    Node& operator[](std::size_t i) { return nodes[i]; }

    std::vector<Point> positions() const;
    std::vector<int> ids() const;
    std::vector<int> boundary_ids() const;
    std::vector<int> interior_ids() const;

    /// Appends a node with the next dense id and returns that id.
    int append(const Point& pos, double r_comm, double r_cov, double r_rej, bool boundary);

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

enum class BoundaryMode { convex_hull, square_perimeter };

/// Homogeneous Poisson process on [0, side]^2. Radii are left at zero.
NodeSet sample_poisson(double intensity, double side, Rng& rng);

/// Draws the `sampled` radius of every node i.i.d. uniform on [lo, hi].
/// The other radii follow the half rule: r_cov = r_rej = r_comm / 2 when the
/// communication radius is drawn, r_comm = 2 r_cov and r_rej = r_cov when the
/// coverage radius is drawn.
NodeSet assign_radii_uniform(NodeSet ns, double lo, double hi, Rng& rng,
                             RadiusRole sampled = RadiusRole::comm);

/// Marks boundary nodes.
///
/// convex_hull flags the existing hull vertices. square_perimeter appends
/// fictional nodes around the square, evenly spaced with gap <= spacing and
/// coverage radius r_boundary; existing nodes are not touched.
NodeSet make_boundary(NodeSet ns, BoundaryMode mode, double spacing = 0.0, double r_boundary = 0.0);

/// Perimeter points of the square [0, side]^2 with gap <= spacing, walking
/// counter-clockwise from the origin.
std::vector<Point> square_perimeter_points(double side, double spacing);

/// Indices of the convex hull vertices of `pts` (collinear edge points excluded).
std::vector<std::size_t> convex_hull(std::span<const Point> pts);

/// Adds i.i.d. N(0, sigma^2) noise to both coordinates of the listed nodes.
NodeSet perturb_gaussian(NodeSet ns, std::span<const int> which, double sigma, Rng& rng);

// Minimum enclosing ball for tiny point tuples.

template <typename Scalar>
struct Disk {
    Point2<Scalar> center;
    Scalar radius;
};

template <typename Scalar>
Disk<Scalar> circumdisk(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c)
{
    const Point2<Scalar> ab = b - a;
    const Point2<Scalar> ac = c - a;
    const Scalar d = Scalar(2) * (ab.x() * ac.y() - ab.y() * ac.x());
    if (d == Scalar(0)) return {a, std::numeric_limits<Scalar>::infinity()};
    const Scalar ab2 = ab.squaredNorm();
    const Scalar ac2 = ac.squaredNorm();
    const Point2<Scalar> offset((ac.y() * ab2 - ab.y() * ac2) / d, (ab.x() * ac2 - ac.x() * ab2) / d);
    return {a + offset, offset.norm()};
}

/// Radius of the smallest disk containing all of `pts` (1 to 4 points).
///
/// The optimum is always the diametral disk of a pair or the circumdisk of a
/// triple; every candidate is checked for containment and the smallest valid
/// one wins.
template <typename Scalar>
Scalar min_enclosing_ball_radius(std::span<const Point2<Scalar>> pts)
{
    if (pts.empty()) throw std::invalid_argument("min_enclosing_ball_radius: empty input");
    if (pts.size() > 4) throw std::invalid_argument("min_enclosing_ball_radius: at most 4 points");
    if (pts.size() == 1) return Scalar(0);

    Scalar max_pair = Scalar(0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            max_pair = std::max(max_pair, (pts[i] - pts[j]).norm());

    const Scalar tol = Scalar(1e-12) * (Scalar(1) + max_pair);
    auto encloses = [&](const Disk<Scalar>& disk) {
        return std::all_of(pts.begin(), pts.end(), [&](const Point2<Scalar>& p) {
            return (p - disk.center).norm() <= disk.radius + tol;
        });
    };

    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Disk<Scalar> diametral{(pts[i] + pts[j]) / Scalar(2), (pts[i] - pts[j]).norm() / Scalar(2)};
            if (diametral.radius < best && encloses(diametral)) best = diametral.radius;
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const Disk<Scalar> circ = circumdisk(pts[i], pts[j], pts[k]);
                if (circ.radius < best && encloses(circ)) best = circ.radius;
            }
        }
    }
    return best;
}

template <typename Scalar>
Scalar min_enclosing_ball_radius(std::initializer_list<Point2<Scalar>> pts)
{
    return min_enclosing_ball_radius(std::span<const Point2<Scalar>>(pts.begin(), pts.size()));
}

/// Boolean coverage raster of [x0, x0 + extent]^2 sampled at cell centers.
class CoverageRaster {
public:
    CoverageRaster(int resolution, double origin, double extent);

    int resolution() const { return resolution_; }
    double cell_size() const { return extent_ / resolution_; }
    Point cell_center(int ix, int iy) const;

    /// Marks every cell whose center lies strictly inside the disk.
    void add_disk(const Point& center, double radius);

    bool covered(int ix, int iy) const { return cells_[static_cast<std::size_t>(iy) * resolution_ + ix] != 0; }
    std::size_t covered_count() const;
    double covered_fraction() const;

    /// Number of cells covered here and in `other` (same grid).
    std::size_t overlap_count(const CoverageRaster& other) const;

private:
    int resolution_;
    double origin_;
    double extent_;
    std::vector<unsigned char> cells_;
};

// Line format: "a=<side>" then "id x y r_comm r_cov r_rej boundary" per node.
void write_nodeset(std::ostream& out, const NodeSet& ns);
NodeSet read_nodeset(std::istream& in);

} // namespace toposon
