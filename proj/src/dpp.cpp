#include "toposon/dpp.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace toposon {

namespace {

constexpr double kRelativePivotFloor = 1e-12;
constexpr double kLogDetFloor = -700.0;

} // namespace

GinibreKernel::GinibreKernel(std::size_t n_modes, double scale, const Point& center)
    : n_modes_(n_modes), scale_(scale), center_(center)
{
    if (n_modes == 0) throw std::invalid_argument("GinibreKernel: need at least one mode");
    if (!(scale > 0.0)) throw std::invalid_argument("GinibreKernel: scale must be positive");
}

GinibreKernel GinibreKernel::for_square(double side, std::size_t n_points, std::size_t n_modes)
{
    if (!(side > 0.0)) throw std::invalid_argument("GinibreKernel: side must be positive");
    const std::size_t n = std::max<std::size_t>(n_points, 1);
    const double scale = std::sqrt(std::numbers::pi * static_cast<double>(n)) / side;
    return GinibreKernel(n_modes > 0 ? n_modes : 2 * n, scale, Point(side / 2.0, side / 2.0));
}

Eigen::VectorXcd GinibreKernel::modes(const Point& p) const
{
    const Point q = scale_ * (p - center_);
    const std::complex<double> z(q.x(), q.y());
    Eigen::VectorXcd phi(static_cast<Eigen::Index>(n_modes_));
    // phi_k = phi_{k-1} * z / sqrt(k) keeps every term O(1) in magnitude.
    phi(0) = std::exp(-std::norm(z) / 2.0) / std::sqrt(std::numbers::pi);
    for (Eigen::Index k = 1; k < phi.size(); ++k) phi(k) = phi(k - 1) * z / std::sqrt(static_cast<double>(k));
    return phi;
}

std::complex<double> GinibreKernel::operator()(const Point& x, const Point& y) const
{
    // Eigen's dot conjugates its left operand.
    return modes(y).dot(modes(x));
}

Eigen::MatrixXcd kernel_matrix(const GinibreKernel& k, std::span<const Point> pts)
{
    if (pts.size() > k.n_modes()) throw std::invalid_argument("kernel_matrix: more points than kernel modes");
    const auto n = static_cast<Eigen::Index>(pts.size());
    // K = Phi Phi^H with the mode vectors as rows of Phi.
    Eigen::MatrixXcd phi(n, static_cast<Eigen::Index>(k.n_modes()));
    for (Eigen::Index i = 0; i < n; ++i) phi.row(i) = k.modes(pts[static_cast<std::size_t>(i)]).transpose();
    return phi * phi.adjoint();
}

double log_det_psd(const Eigen::MatrixXcd& m)
{
    if (m.rows() == 0) return 0.0;
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::MatrixXcd& l = llt.matrixLLT();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double pivot = std::norm(l(i, i));
        if (!(pivot > kRelativePivotFloor * m(i, i).real())) return -std::numeric_limits<double>::infinity();
        log_det += std::log(pivot);
    }
    return log_det < kLogDetFloor ? -std::numeric_limits<double>::infinity() : log_det;
}

Placement sample_conditional(const GinibreKernel& k, std::span<const Point> fixed, std::size_t n_new, double side,
                             std::size_t mcmc_steps, Rng& rng, McmcStats* stats)
{
    Placement out;
    out.fixed.assign(fixed.begin(), fixed.end());
    if (n_new == 0) return out;
    if (fixed.size() + n_new > k.n_modes()) throw std::invalid_argument("sample_conditional: more points than kernel modes");

    const auto n_fixed = static_cast<Eigen::Index>(fixed.size());
    const auto n = n_fixed + static_cast<Eigen::Index>(n_new);
    const auto m = static_cast<Eigen::Index>(k.n_modes());

    std::vector<Point> pts(fixed.begin(), fixed.end());
    for (std::size_t i = 0; i < n_new; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        pts.emplace_back(x, y);
    }

    Eigen::MatrixXcd phi(n, m);
    for (Eigen::Index i = 0; i < n; ++i) phi.row(i) = k.modes(pts[static_cast<std::size_t>(i)]).transpose();
    Eigen::MatrixXcd kmat = phi * phi.adjoint();
    double current = log_det_psd(kmat);

    const std::size_t steps = mcmc_steps > 0 ? mcmc_steps : 200 * n_new;
    Eigen::VectorXcd proposal_row(m);
    Eigen::VectorXcd proposal_col(n);
    for (std::size_t step = 0; step < steps; ++step) {
        const auto j = n_fixed + static_cast<Eigen::Index>(rng.index(n_new));
        const double cx = rng.uniform(0.0, side);
        const double cy = rng.uniform(0.0, side);
        const Point candidate(cx, cy);
        const double u = rng.uniform();

        proposal_row = k.modes(candidate);
        proposal_col = phi * proposal_row.conjugate();
        proposal_col(j) = proposal_row.squaredNorm();

        Eigen::MatrixXcd trial = kmat;
        trial.col(j) = proposal_col;
        trial.row(j) = proposal_col.adjoint();
        const double proposed = log_det_psd(trial);

        if (stats) ++stats->proposals;
        // Symmetric proposal: accept with probability min(1, det'/det).
        const bool accept = std::isinf(current) && current < 0 ? !std::isinf(proposed)
                                                               : std::log(u) < proposed - current;
        if (!accept) continue;
        if (stats) ++stats->accepted;
        pts[static_cast<std::size_t>(j)] = candidate;
        phi.row(j) = proposal_row.transpose();
        kmat = std::move(trial);
        current = proposed;
    }

    out.free.assign(pts.begin() + n_fixed, pts.end());
    return out;
}

} // namespace toposon
