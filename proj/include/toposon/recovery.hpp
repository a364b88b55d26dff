#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toposon/geometry.hpp"
#include "toposon/homology.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// A damaged network: Poisson survivors reaching a target mean coverage,
/// fenced by fictional perimeter nodes.
struct DamageScenario {
    double coverage_fraction = 0.8;
    double r = 0.5;
    double side = 2.0;
    double boundary_spacing = 0.5;
};

/// Intensity whose Boolean model with disks of radius r covers `fraction`
/// of the plane on average: -ln(1 - fraction) / (pi r^2).
double damage_intensity(double fraction, double r);

/// Survivors with common coverage radius r plus the square fence. Survivors
/// are drawn on the square dilated by r and kept when their disk meets the
/// square, so they may sit slightly outside it.
NodeSet gen_damaged(const DamageScenario& ds, Rng& rng);

struct KernelConfig {
    std::size_t n_modes = 0;     // 0: twice the point count of each draw
    std::size_t mcmc_steps = 0;  // 0: 200 per new point
    int max_doublings = 30;
};

struct RecoveryResult {
    std::vector<Point> added_final;  // added nodes that survive
    std::size_t n_added_total = 0;   // added nodes before reduction
    BettiPair betti_final;
};

/// Thrown when the growth loop exceeds its doubling budget.
class RecoveryFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rips complex of the network with every node at coverage radius r
/// (edge iff distance < 2r), truncated at dimension 2.
BettiPair coverage_betti(const NodeSet& ns, double r);

/// Patches the network with DPP-placed nodes until it is connected and
/// hole-free, then removes superfluous additions by reduction; original and
/// boundary nodes are never removed.
RecoveryResult recover(const NodeSet& ns, double r, const KernelConfig& kernel, Rng& rng);

/// Greedy baseline: on a grid of candidate sites, repeatedly adds the site
/// farthest from every node until that distance is at most r.
RecoveryResult set_cover_baseline(const NodeSet& ns, double r, double grid_step);

/// `ns` plus the given points as ordinary nodes of coverage radius r.
NodeSet with_added_nodes(const NodeSet& ns, std::span<const Point> added, double r);

enum class Planner { homology, set_cover };

Planner parse_planner(const std::string& name);
std::string to_string(Planner p);

struct RecoveryKnobs {
    KernelConfig kernel;
    double grid_step = 0.0; // 0: r / 5
};

/// One seed of the robustness experiment.
struct RobustnessSample {
    std::size_t n_initial = 0;
    std::size_t n_added_total = 0;
    std::size_t n_added_kept = 0;
    BettiPair betti_planned;
    std::size_t beta1_perturbed = 0;
};

/// Generate a damaged network, plan with `planner`, perturb only the added
/// nodes by N(0, sigma^2) per coordinate and recount holes. Everything draws
/// from `rng` in that order.
RobustnessSample robustness_sample(Planner planner, const DamageScenario& ds, double sigma, const RecoveryKnobs& knobs,
                                   Rng& rng);

struct RobustnessStats {
    double mean_beta1 = 0.0;
    double p_beta1_zero = 0.0;
    double mean_added_kept = 0.0;
    std::size_t runs = 0;
    std::size_t failures = 0;
};

/// robustness_sample over seeds seed0 .. seed0 + n_seeds - 1.
RobustnessStats robustness_study(Planner planner, const DamageScenario& ds, double sigma, std::size_t n_seeds,
                                 std::uint64_t seed0, const RecoveryKnobs& knobs = {});

} // namespace toposon
