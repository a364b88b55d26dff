#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "toposon/geometry.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// Truncated Ginibre kernel K(x, y) = sum_{k < n_modes} phi_k(x) conj(phi_k(y)),
/// phi_k(z) = exp(-|z|^2 / 2) z^k / sqrt(pi k!), evaluated after mapping the
/// plane point p to z = scale * (p - center).
///
/// The Ginibre process has intensity 1/pi, so scale = sqrt(pi * n / side^2)
/// places n points per side^2 on average.
class GinibreKernel {
public:
    GinibreKernel(std::size_t n_modes, double scale, const Point& center);

    /// Kernel for n_points on [0, side]^2; n_modes = 0 picks 2 * n_points.
    static GinibreKernel for_square(double side, std::size_t n_points, std::size_t n_modes = 0);

    std::size_t n_modes() const { return n_modes_; }
    double scale() const { return scale_; }
    const Point& center() const { return center_; }

    /// phi_0..phi_{n_modes-1} at p.
    Eigen::VectorXcd modes(const Point& p) const;

    std::complex<double> operator()(const Point& x, const Point& y) const;

private:
    std::size_t n_modes_;
    double scale_;
    Point center_;
};

/// K(x_i, x_j) over the points; throws std::invalid_argument when there are
/// more points than modes.
Eigen::MatrixXcd kernel_matrix(const GinibreKernel& k, std::span<const Point> pts);

/// log det of a Hermitian positive semidefinite kernel matrix; -infinity when
/// it is numerically singular (a Cholesky pivot below 1e-12 of its diagonal
/// entry) or the log-determinant drops below -700.
double log_det_psd(const Eigen::MatrixXcd& m);

struct Placement {
    std::vector<Point> fixed;
    std::vector<Point> free;
};

struct McmcStats {
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

/// Draws n_new points in [0, side]^2 from the DPP conditioned on `fixed`.
///
/// Metropolis-Hastings on the joint density proportional to
/// det K(fixed + free): each step moves one free point to a uniform proposal
/// in the square. `mcmc_steps` = 0 selects 200 * n_new steps.
Placement sample_conditional(const GinibreKernel& k, std::span<const Point> fixed, std::size_t n_new, double side,
                             std::size_t mcmc_steps, Rng& rng, McmcStats* stats = nullptr);

} // namespace toposon
