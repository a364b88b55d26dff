#include "toposon/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toposon/complex.hpp"
#include "toposon/dpp.hpp"
#include "toposon/reduction.hpp"

namespace toposon {

double damage_intensity(double fraction, double r)
{
    if (!(fraction >= 0.0 && fraction < 1.0)) throw std::invalid_argument("damage_intensity: fraction must lie in [0, 1)");
    if (!(r > 0.0)) throw std::invalid_argument("damage_intensity: radius must be positive");
    return -std::log1p(-fraction) / (std::numbers::pi * r * r);
}

NodeSet gen_damaged(const DamageScenario& ds, Rng& rng)
{
    // Sampling on the square dilated by r makes the disk union stationary
    // inside the square, so its expected covered share is exactly the target.
    // Nodes whose disk misses the square are dropped.
    const double lambda = damage_intensity(ds.coverage_fraction, ds.r);
    NodeSet ns;
    ns.side = ds.side;
    if (lambda > 0.0) {
        const NodeSet window = sample_poisson(lambda, ds.side + 2.0 * ds.r, rng);
        for (const Node& w : window.nodes) {
            const Point p = w.pos - Point(ds.r, ds.r);
            const Point nearest = p.cwiseMax(0.0).cwiseMin(ds.side);
            if ((p - nearest).norm() < ds.r) ns.append(p, 2.0 * ds.r, ds.r, ds.r, false);
        }
    }
    return make_boundary(std::move(ns), BoundaryMode::square_perimeter, ds.boundary_spacing, ds.r);
}

NodeSet with_added_nodes(const NodeSet& ns, std::span<const Point> added, double r)
{
    NodeSet out = ns;
    for (const Point& p : added) out.append(p, 2.0 * r, r, r, false);
    return out;
}

namespace {

SimplicialComplex common_radius_rips(const NodeSet& ns, double r, int max_dim)
{
    const auto ids = ns.ids();
    std::vector<std::pair<int, int>> edges;
    const double reach2 = 4.0 * r * r;
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = i + 1; j < ns.size(); ++j)
            if ((ns.nodes[i].pos - ns.nodes[j].pos).squaredNorm() < reach2)
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return clique_complex(ids, edges, max_dim);
}

} // namespace

BettiPair coverage_betti(const NodeSet& ns, double r)
{
    return betti(common_radius_rips(ns, r, 2));
}

RecoveryResult recover(const NodeSet& ns, double r, const KernelConfig& kernel, Rng& rng)
{
    if (!(r > 0.0)) throw std::invalid_argument("recover: radius must be positive");
    if (ns.boundary_ids().empty()) throw std::invalid_argument("recover: boundary nodes required");

    const auto fixed = ns.positions();
    const auto n_initial = static_cast<long long>(ns.interior_ids().size());
    const double side = ns.side;
    const auto bulk = static_cast<long long>(std::ceil(side * side / (std::numbers::pi * r * r)));
    std::size_t n_added = static_cast<std::size_t>(std::max(0LL, bulk - n_initial));

    // Every attempt redraws all additions; the existing nodes stay fixed.
    auto draw = [&](std::size_t count) {
        if (count == 0) return ns;
        const GinibreKernel k = GinibreKernel::for_square(side, fixed.size() + count, kernel.n_modes);
        const Placement placement = sample_conditional(k, fixed, count, side, kernel.mcmc_steps, rng);
        return with_added_nodes(ns, placement.free, r);
    };

    NodeSet patched = draw(n_added);
    BettiPair b = coverage_betti(patched, r);
    std::size_t growth = 1;
    int doublings = 0;
    while (b != BettiPair{1, 0}) {
        if (doublings >= kernel.max_doublings)
            throw RecoveryFailure("recover: network still has beta = (" + std::to_string(b.beta0) + ", " +
                                  std::to_string(b.beta1) + ") after " + std::to_string(doublings) +
                                  " growth steps with " + std::to_string(n_added) + " added nodes");
        n_added += growth;
        growth *= 2;
        ++doublings;
        patched = draw(n_added);
        b = coverage_betti(patched, r);
    }

    RecoveryResult result;
    result.n_added_total = n_added;
    if (n_added == 0) {
        result.betti_final = b;
        return result;
    }

    // Only the new nodes are candidates for removal.
    const auto originals = ns.ids();
    const SimplicialComplex x = common_radius_rips(patched, r, kUnboundedDim);
    const ReductionResult reduced = reduce(x, originals, rng);
    result.betti_final = betti(reduced.complex);
    for (int id = static_cast<int>(ns.size()); id < static_cast<int>(patched.size()); ++id)
        if (reduced.complex.has_vertex(id)) result.added_final.push_back(patched.nodes[id].pos);
    return result;
}

RecoveryResult set_cover_baseline(const NodeSet& ns, double r, double grid_step)
{
    if (!(r > 0.0) || !(grid_step > 0.0)) throw std::invalid_argument("set_cover_baseline: radius and grid step must be positive");
    const int per_axis = static_cast<int>(std::floor(ns.side / grid_step + 1e-9)) + 1;
    std::vector<Point> sites;
    sites.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int iy = 0; iy < per_axis; ++iy)
        for (int ix = 0; ix < per_axis; ++ix) sites.emplace_back(ix * grid_step, iy * grid_step);

    std::vector<double> nearest(sites.size(), std::numeric_limits<double>::infinity());
    auto absorb = [&](const Point& p) {
        for (std::size_t i = 0; i < sites.size(); ++i) nearest[i] = std::min(nearest[i], (sites[i] - p).norm());
    };
    for (const Node& n : ns.nodes) absorb(n.pos);

    RecoveryResult result;
    while (!sites.empty()) {
        const auto far = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
        if (nearest[far] <= r) break;
        result.added_final.push_back(sites[far]);
        absorb(sites[far]);
    }
    result.n_added_total = result.added_final.size();
    result.betti_final = coverage_betti(with_added_nodes(ns, result.added_final, r), r);
    return result;
}

Planner parse_planner(const std::string& name)
{
    if (name == "homology") return Planner::homology;
    if (name == "setcover" || name == "set_cover") return Planner::set_cover;
    throw std::invalid_argument("unknown planner '" + name + "'");
}

std::string to_string(Planner p)
{
    return p == Planner::homology ? "homology" : "setcover";
}

RobustnessSample robustness_sample(Planner planner, const DamageScenario& ds, double sigma, const RecoveryKnobs& knobs,
                                   Rng& rng)
{
    const NodeSet damaged = gen_damaged(ds, rng);
    RobustnessSample sample;
    sample.n_initial = damaged.interior_ids().size();

    const RecoveryResult plan = planner == Planner::homology
                                    ? recover(damaged, ds.r, knobs.kernel, rng)
                                    : set_cover_baseline(damaged, ds.r, knobs.grid_step > 0.0 ? knobs.grid_step : ds.r / 5.0);
    sample.n_added_total = plan.n_added_total;
    sample.n_added_kept = plan.added_final.size();
    sample.betti_planned = plan.betti_final;

    NodeSet patched = with_added_nodes(damaged, plan.added_final, ds.r);
    std::vector<int> added_ids;
    for (int id = static_cast<int>(damaged.size()); id < static_cast<int>(patched.size()); ++id) added_ids.push_back(id);
    patched = perturb_gaussian(std::move(patched), added_ids, sigma, rng);
    sample.beta1_perturbed = coverage_betti(patched, ds.r).beta1;
    return sample;
}

RobustnessStats robustness_study(Planner planner, const DamageScenario& ds, double sigma, std::size_t n_seeds,
                                 std::uint64_t seed0, const RecoveryKnobs& knobs)
{
    RobustnessStats stats;
    double beta1_sum = 0.0;
    double kept_sum = 0.0;
    std::size_t zero = 0;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        Rng rng(seed0 + i);
        try {
            const RobustnessSample s = robustness_sample(planner, ds, sigma, knobs, rng);
            beta1_sum += static_cast<double>(s.beta1_perturbed);
            kept_sum += static_cast<double>(s.n_added_kept);
            zero += s.beta1_perturbed == 0;
            ++stats.runs;
        } catch (const RecoveryFailure&) {
            ++stats.failures;
        }
    }
    if (stats.runs > 0) {
        stats.mean_beta1 = beta1_sum / static_cast<double>(stats.runs);
        stats.p_beta1_zero = static_cast<double>(zero) / static_cast<double>(stats.runs);
        stats.mean_added_kept = kept_sum / static_cast<double>(stats.runs);
    }
    return stats;
}

} // namespace toposon
