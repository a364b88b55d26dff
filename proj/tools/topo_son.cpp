// topo-son: command-line front end for the scenario driver and the
// per-network planners.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>

#include "toposon/complex.hpp"
#include "toposon/energy.hpp"
#include "toposon/experiments.hpp"
#include "toposon/frequency.hpp"
#include "toposon/homology.hpp"
#include "toposon/recovery.hpp"
#include "toposon/reduction.hpp"

namespace {

using namespace toposon;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSeedFailure = 3;

NodeSet load_nodes(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read node file " + path);
    NodeSet ns = read_nodeset(in);
    ns.validate();
    return ns;
}

// Writes to `path`, or to stdout when it is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

Table subset(const Table& t, const std::vector<std::string>& columns)
{
    Table out;
    out.columns = columns;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::vector<Value> row;
        for (const auto& c : columns) row.push_back(t.at(i, c));
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::size_t count_failures(const Table& t)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) n += t.number(i, "failed") != 0.0;
    return n;
}

void report_failures(const Table& t)
{
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.number(i, "failed") != 0.0)
            std::cerr << "seed " << t.text(i, "seed") << " failed: " << t.text(i, "error") << '\n';
}

Table run_seeds(const ScenarioConfig& cfg)
{
    RunReport rep = run_batch(cfg);
    return std::move(rep.records);
}

struct RunArgs {
    std::string config;
    std::optional<std::size_t> seeds;
    std::optional<std::uint64_t> seed0;
    std::optional<unsigned> threads;
    std::string out = ".";
};

int cmd_run(const RunArgs& a)
{
    ScenarioConfig cfg = load_config(a.config);
    if (a.seeds) cfg.seeds = *a.seeds;
    if (a.seed0) cfg.seed0 = *a.seed0;
    if (a.threads) cfg.threads = *a.threads;
    cfg.validate();
    const RunReport rep = run_batch(cfg);
    std::filesystem::create_directories(a.out);
    const auto path = std::filesystem::path(a.out) / (to_string(cfg.kind) + ".csv");
    emit_csv(rep, path);
    write_csv(std::cout, rep.aggregate);
    report_failures(rep.records);
    return rep.failures ? kExitSeedFailure : kExitOk;
}

struct FreqArgs {
    std::string nodes;
    std::string config;
    std::optional<std::size_t> seeds;
    std::uint64_t seed = 1;
    int resolution = 256;
    std::string out;
};

int cmd_plan_freq(const FreqArgs& a)
{
    Table rows;
    if (!a.nodes.empty()) {
        const NodeSet ns = load_nodes(a.nodes);
        Rng rng(a.seed);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::comm);
        const InterferenceGraph ig = interference_graph(ns);
        const FrequencyPlan planned = auto_plan(x, ig, rng);
        const FrequencyPlan greedy = greedy_coloring(ig);
        std::string cov;
        for (double f : coverage_per_frequency(ns, planned, a.resolution)) {
            if (!cov.empty()) cov += ';';
            cov += std::to_string(f);
        }
        rows.columns = {"seed", "failed", "N", "N_g", "N_f", "auto_coverage"};
        rows.rows.push_back({static_cast<double>(a.seed), 0.0, static_cast<double>(ns.size()),
                             static_cast<double>(greedy.n_freqs), static_cast<double>(planned.n_freqs), cov});
    } else {
        ScenarioConfig cfg = a.config.empty() ? default_config(ScenarioKind::frequency) : load_config(a.config);
        if (cfg.kind != ScenarioKind::frequency) throw ConfigError("plan-freq needs a frequency config");
        cfg.seed0 = a.seed;
        cfg.seeds = a.seeds.value_or(a.config.empty() ? 1 : cfg.seeds);
        cfg.resolution = a.resolution;
        cfg.validate();
        rows = run_seeds(cfg);
        report_failures(rows);
    }
    Output out(a.out);
    write_csv(out.stream(), subset(rows, {"seed", "N", "N_g", "N_f", "auto_coverage"}));
    return count_failures(rows) ? kExitSeedFailure : kExitOk;
}

struct ConserveArgs {
    std::string nodes;
    std::string config;
    std::optional<std::size_t> seeds;
    std::uint64_t seed = 1;
    bool literal_guard = false;
    std::string out;
};

int cmd_conserve(const ConserveArgs& a)
{
    Table rows;
    if (!a.nodes.empty()) {
        const NodeSet ns = load_nodes(a.nodes);
        if (ns.boundary_ids().empty()) throw ConfigError("conserve needs boundary nodes in the node file");
        Rng rng(a.seed);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
        const QoSGroups groups = make_qos_groups(x, rng);
        EnergyOptions options;
        options.halt_on_first_quota = a.literal_guard;
        const EnergyResult res = conserve(x, ns, groups, rng, options);
        const double n_o = groups.total_quota();
        const double n_k = static_cast<double>(res.kept.size());
        rows.columns = {"seed", "failed", "N", "N_o", "N_k", "N_k_minus_N_o", "energy_before", "energy_after"};
        rows.rows.push_back({static_cast<double>(a.seed), 0.0, static_cast<double>(ns.size()), n_o, n_k, n_k - n_o,
                             radius_energy(ns), radius_energy(res)});
    } else {
        ScenarioConfig cfg = a.config.empty() ? default_config(ScenarioKind::energy) : load_config(a.config);
        if (cfg.kind != ScenarioKind::energy) throw ConfigError("conserve needs an energy config");
        cfg.seed0 = a.seed;
        cfg.seeds = a.seeds.value_or(a.config.empty() ? 1 : cfg.seeds);
        cfg.halt_on_first_quota = cfg.halt_on_first_quota || a.literal_guard;
        cfg.validate();
        rows = run_seeds(cfg);
        report_failures(rows);
    }
    Output out(a.out);
    write_csv(out.stream(),
              subset(rows, {"seed", "N", "N_o", "N_k", "N_k_minus_N_o", "energy_before", "energy_after"}));
    return count_failures(rows) ? kExitSeedFailure : kExitOk;
}

struct RecoverArgs {
    double fraction = 0.8;
    std::string planner = "homology";
    double sigma = 0.1;
    double r = 0.5;
    std::size_t seeds = 1;
    std::uint64_t seed0 = 1;
    std::size_t mcmc_steps = 0;
    std::string out;
};

int cmd_recover(const RecoverArgs& a)
{
    ScenarioConfig cfg = default_config(ScenarioKind::recovery);
    cfg.coverage_fractions = {a.fraction};
    try {
        cfg.planners = {parse_planner(a.planner)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.sigma = a.sigma;
    cfg.r = a.r;
    cfg.seeds = a.seeds;
    cfg.seed0 = a.seed0;
    cfg.mcmc_steps = a.mcmc_steps;
    cfg.validate();
    const Table rows = run_seeds(cfg);
    report_failures(rows);
    Output out(a.out);
    write_csv(out.stream(), subset(rows, {"seed", "N_i", "n_added_total", "n_added_kept", "beta1_after_perturbation"}));
    return count_failures(rows) ? kExitSeedFailure : kExitOk;
}

struct BettiArgs {
    std::string nodes;
    std::string complex_file;
    std::string model = "rips";
    std::string role = "cov";
    double radius = 0.5;
    int max_dim = kUnboundedDim;
    bool reduce_flag = false;
    bool trace = false;
    std::uint64_t seed = 1;
    std::string write_complex_path;
};

int cmd_betti(const BettiArgs& a)
{
    if (a.nodes.empty() == a.complex_file.empty()) throw ConfigError("betti needs exactly one of --nodes or --complex");
    SimplicialComplex x;
    std::vector<int> flags;
    if (!a.complex_file.empty()) {
        std::ifstream in(a.complex_file);
        if (!in) throw ConfigError("cannot read complex file " + a.complex_file);
        x = read_complex(in);
    } else {
        const NodeSet ns = load_nodes(a.nodes);
        flags = ns.boundary_ids();
        if (a.model == "rips") x = rips_from_disks(ns, a.role == "comm" ? RadiusRole::comm : RadiusRole::cov, a.max_dim);
        else x = cech(ns, a.radius, a.max_dim);
    }
    if (!a.write_complex_path.empty()) {
        std::ofstream out(a.write_complex_path);
        if (!out) throw std::runtime_error("cannot write " + a.write_complex_path);
        write_complex(out, x);
    }
    const BettiPair b = betti(x);
    std::cout << "dimension " << x.dimension() << "\n";
    for (int k = 0; k <= x.dimension(); ++k) std::cout << "simplices[" << k << "] " << x.count(k) << "\n";
    std::cout << "beta0 " << b.beta0 << "\nbeta1 " << b.beta1 << "\n";
    if (!a.reduce_flag) return kExitOk;

    Rng rng(a.seed);
    const ReductionResult res = reduce(x, flags, rng, a.trace);
    if (a.trace)
        for (const TraceStep& s : res.trace)
            std::cout << "step " << s.step << " vertex " << s.vertex << " index " << s.index
                      << (s.removed ? " removed" : " flagged") << " beta " << s.betti.beta0 << ' ' << s.betti.beta1
                      << "\n";
    const BettiPair after = betti(res.complex);
    std::cout << "removed " << res.removed.size() << "\nkept " << res.complex.vertices().size() << "\n";
    std::cout << "beta0_after " << after.beta0 << "\nbeta1_after " << after.beta1 << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Topology-driven planning for cellular networks"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo scenario batch from a config file");
    run->add_option("config", run_args.config, "Scenario config (key = value lines)")->required();
    run->add_option("--seeds", run_args.seeds, "Override the seed count");
    run->add_option("--seed0", run_args.seed0, "Override the first seed");
    run->add_option("--threads", run_args.threads, "Worker threads (0: all cores)");
    run->add_option("--out", run_args.out, "Output directory for <kind>.csv and <kind>_raw.csv");

    FreqArgs freq_args;
    auto* freq = app.add_subcommand("plan-freq", "Plan frequencies for a node file or generated scenarios");
    freq->add_option("--nodes", freq_args.nodes, "Node file");
    freq->add_option("--config", freq_args.config, "Frequency scenario config");
    freq->add_option("--seeds", freq_args.seeds, "Number of generated scenarios");
    freq->add_option("--seed", freq_args.seed, "Seed (first seed for generated scenarios)");
    freq->add_option("--resolution", freq_args.resolution, "Coverage raster cells per side");
    freq->add_option("--out", freq_args.out, "Output CSV (stdout when omitted)");

    ConserveArgs cons_args;
    auto* cons = app.add_subcommand("conserve", "Switch off and shrink nodes under QoS and topology guards");
    cons->add_option("--nodes", cons_args.nodes, "Node file with boundary nodes");
    cons->add_option("--config", cons_args.config, "Energy scenario config");
    cons->add_option("--seeds", cons_args.seeds, "Number of generated scenarios");
    cons->add_option("--seed", cons_args.seed, "Seed (first seed for generated scenarios)");
    cons->add_flag("--literal-guard", cons_args.literal_guard, "Stop as soon as any group sits at its quota");
    cons->add_option("--out", cons_args.out, "Output CSV (stdout when omitted)");

    RecoverArgs rec_args;
    auto* rec = app.add_subcommand("recover", "Patch damaged networks and test robustness to misplacement");
    rec->add_option("--fraction", rec_args.fraction, "Mean covered fraction before recovery");
    rec->add_option("--planner", rec_args.planner, "homology or setcover");
    rec->add_option("--sigma", rec_args.sigma, "Std deviation of the placement perturbation");
    rec->add_option("--r", rec_args.r, "Common coverage radius");
    rec->add_option("--seeds", rec_args.seeds, "Number of seeds");
    rec->add_option("--seed0", rec_args.seed0, "First seed");
    rec->add_option("--mcmc-steps", rec_args.mcmc_steps, "Sampler steps per draw (0: 200 per new node)");
    rec->add_option("--out", rec_args.out, "Output CSV (stdout when omitted)");

    BettiArgs betti_args;
    auto* bet = app.add_subcommand("betti", "Print complex sizes and Betti numbers");
    bet->add_option("--nodes", betti_args.nodes, "Node file");
    bet->add_option("--complex", betti_args.complex_file, "Complex file");
    bet->add_option("--model", betti_args.model, "rips or cech")->check(CLI::IsMember({"rips", "cech"}));
    bet->add_option("--role", betti_args.role, "Radius used by rips: cov or comm")->check(CLI::IsMember({"cov", "comm"}));
    bet->add_option("--radius", betti_args.radius, "Common radius for cech");
    bet->add_option("--max-dim", betti_args.max_dim, "Largest simplex dimension");
    bet->add_flag("--reduce", betti_args.reduce_flag, "Run the reduction with boundary nodes flagged");
    bet->add_flag("--trace", betti_args.trace, "Print every reduction step");
    bet->add_option("--seed", betti_args.seed, "Reduction seed");
    bet->add_option("--write-complex", betti_args.write_complex_path, "Save the complex");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*freq) return cmd_plan_freq(freq_args);
        if (*cons) return cmd_conserve(cons_args);
        if (*rec) return cmd_recover(rec_args);
        return cmd_betti(betti_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
