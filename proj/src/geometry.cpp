#include "toposon/geometry.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace toposon {

std::vector<Point> NodeSet::positions() const
{
    std::vector<Point> out;
    out.reserve(nodes.size());
    for (const Node& n : nodes) out.push_back(n.pos);
    return out;
}

std::vector<int> NodeSet::ids() const
{
    std::vector<int> out(nodes.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<int> NodeSet::boundary_ids() const
{
    std::vector<int> out;
    for (const Node& n : nodes)
        if (n.boundary) out.push_back(n.id);
    return out;
}

std::vector<int> NodeSet::interior_ids() const
{
    std::vector<int> out;
    for (const Node& n : nodes)
        if (!n.boundary) out.push_back(n.id);
    return out;
}

int NodeSet::append(const Point& pos, double r_comm, double r_cov, double r_rej, bool boundary)
{
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(Node{id, pos, r_comm, r_cov, r_rej, boundary});
    return id;
}

void NodeSet::validate() const
{
    if (!(side > 0.0)) throw std::invalid_argument("NodeSet: side must be positive");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.id != static_cast<int>(i)) throw std::invalid_argument("NodeSet: ids must be dense 0..N-1");
        if (!n.pos.allFinite()) throw std::invalid_argument("NodeSet: non-finite position");
        if (n.r_comm < 0 || n.r_cov < 0 || n.r_rej < 0) throw std::invalid_argument("NodeSet: negative radius");
        if (n.r_rej > n.r_comm) throw std::invalid_argument("NodeSet: r_rej exceeds r_comm");
    }
}

NodeSet sample_poisson(double intensity, double side, Rng& rng)
{
    if (!(intensity > 0.0) || !(side > 0.0)) throw std::invalid_argument("sample_poisson: intensity and side must be positive");
    NodeSet ns;
    ns.side = side;
    const auto count = rng.poisson(intensity * side * side);
    ns.nodes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        ns.append(Point(x, y), 0.0, 0.0, 0.0, false);
    }
    return ns;
}

NodeSet assign_radii_uniform(NodeSet ns, double lo, double hi, Rng& rng, RadiusRole sampled)
{
    if (!(lo > 0.0)) throw std::invalid_argument("assign_radii_uniform: lo must be positive");
    if (lo > hi) throw std::invalid_argument("assign_radii_uniform: lo > hi");
    for (Node& n : ns.nodes) {
        const double r = lo == hi ? lo : rng.uniform(lo, hi);
        if (sampled == RadiusRole::comm) {
            n.r_comm = r;
            n.r_cov = r / 2.0;
            n.r_rej = r / 2.0;
        } else {
            n.r_cov = r;
            n.r_comm = 2.0 * r;
            n.r_rej = r;
        }
    }
    return ns;
}

std::vector<Point> square_perimeter_points(double side, double spacing)
{
    if (!(spacing > 0.0)) throw std::invalid_argument("square_perimeter: spacing must be positive");
    const int per_side = static_cast<int>(std::ceil(side / spacing - 1e-12));
    const double gap = side / per_side;
    std::vector<Point> pts;
    pts.reserve(4 * per_side);
    for (int i = 0; i < per_side; ++i) pts.emplace_back(i * gap, 0.0);
    for (int i = 0; i < per_side; ++i) pts.emplace_back(side, i * gap);
    for (int i = 0; i < per_side; ++i) pts.emplace_back(side - i * gap, side);
    for (int i = 0; i < per_side; ++i) pts.emplace_back(0.0, side - i * gap);
    return pts;
}

std::vector<std::size_t> convex_hull(std::span<const Point> pts)
{
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
    });
    if (order.size() < 3) return order;

    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const Point oa = pts[a] - pts[o];
        const Point ob = pts[b] - pts[o];
        return oa.x() * ob.y() - oa.y() * ob.x();
    };

    // Andrew's monotone chain; `<= 0` drops collinear points.
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (std::size_t i : order) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
        hull[k++] = i;
    }
    for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
        const std::size_t i = order[t];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    return hull;
}

NodeSet make_boundary(NodeSet ns, BoundaryMode mode, double spacing, double r_boundary)
{
    if (mode == BoundaryMode::convex_hull) {
        const auto pts = ns.positions();
        const auto hull = convex_hull(pts);
        if (hull.size() < 3) throw std::invalid_argument("make_boundary: convex hull needs 3 non-collinear nodes");
        for (std::size_t i : hull) ns.nodes[i].boundary = true;
        return ns;
    }
    if (!(spacing > 0.0)) throw std::invalid_argument("make_boundary: spacing must be positive");
    for (const Point& p : square_perimeter_points(ns.side, spacing))
        ns.append(p, 2.0 * r_boundary, r_boundary, r_boundary, true);
    return ns;
}

NodeSet perturb_gaussian(NodeSet ns, std::span<const int> which, double sigma, Rng& rng)
{
    if (sigma < 0.0) throw std::invalid_argument("perturb_gaussian: negative sigma");
    for (int id : which)
        if (id < 0 || id >= static_cast<int>(ns.size())) throw std::invalid_argument("perturb_gaussian: unknown id");
    if (sigma == 0.0) return ns;
    for (int id : which) {
        Node& n = ns.nodes[id];
        const double dx = rng.normal(0.0, sigma);
        const double dy = rng.normal(0.0, sigma);
        n.pos += Point(dx, dy);
    }
    return ns;
}

CoverageRaster::CoverageRaster(int resolution, double origin, double extent)
    : resolution_(resolution), origin_(origin), extent_(extent),
      cells_(static_cast<std::size_t>(resolution) * resolution, 0)
{
    if (resolution <= 0 || !(extent > 0.0)) throw std::invalid_argument("CoverageRaster: bad grid");
}

Point CoverageRaster::cell_center(int ix, int iy) const
{
    const double h = cell_size();
    return {origin_ + (ix + 0.5) * h, origin_ + (iy + 0.5) * h};
}

void CoverageRaster::add_disk(const Point& center, double radius)
{
    if (!(radius > 0.0)) return;
    const double h = cell_size();
    auto clamp_index = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, resolution_ - 1); };
    const int x0 = clamp_index((center.x() - radius - origin_) / h - 0.5);
    const int x1 = clamp_index((center.x() + radius - origin_) / h + 0.5);
    const int y0 = clamp_index((center.y() - radius - origin_) / h - 0.5);
    const int y1 = clamp_index((center.y() + radius - origin_) / h + 0.5);
    const double r2 = radius * radius;
    for (int iy = y0; iy <= y1; ++iy) {
        const double dy = origin_ + (iy + 0.5) * h - center.y();
        for (int ix = x0; ix <= x1; ++ix) {
            const double dx = origin_ + (ix + 0.5) * h - center.x();
            if (dx * dx + dy * dy < r2) cells_[static_cast<std::size_t>(iy) * resolution_ + ix] = 1;
        }
    }
}

std::size_t CoverageRaster::covered_count() const
{
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

double CoverageRaster::covered_fraction() const
{
    return static_cast<double>(covered_count()) / static_cast<double>(cells_.size());
}

std::size_t CoverageRaster::overlap_count(const CoverageRaster& other) const
{
    if (other.cells_.size() != cells_.size()) throw std::invalid_argument("CoverageRaster: grid mismatch");
    std::size_t n = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) n += (cells_[i] & other.cells_[i]);
    return n;
}

namespace {

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

void write_nodeset(std::ostream& out, const NodeSet& ns)
{
    out << "a=" << format_double(ns.side) << '\n';
    for (const Node& n : ns.nodes) {
        out << n.id << ' ' << format_double(n.pos.x()) << ' ' << format_double(n.pos.y()) << ' '
            << format_double(n.r_comm) << ' ' << format_double(n.r_cov) << ' ' << format_double(n.r_rej) << ' '
            << (n.boundary ? 1 : 0) << '\n';
    }
}

NodeSet read_nodeset(std::istream& in)
{
    NodeSet ns;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            if (line.rfind("a=", 0) != 0) throw std::runtime_error("nodeset: expected 'a=<side>' header");
            ns.side = std::stod(line.substr(2));
            have_header = true;
            continue;
        }
        std::istringstream fields(line);
        Node n;
        int boundary = 0;
        double x = 0, y = 0;
        if (!(fields >> n.id >> x >> y >> n.r_comm >> n.r_cov >> n.r_rej >> boundary))
            throw std::runtime_error("nodeset: malformed line " + std::to_string(lineno));
        n.pos = Point(x, y);
        n.boundary = boundary != 0;
        ns.nodes.push_back(n);
    }
    if (!have_header) throw std::runtime_error("nodeset: missing header");
    ns.validate();
    return ns;
}

} // namespace toposon
