#include "toposon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "toposon/complex.hpp"
#include "toposon/energy.hpp"
#include "toposon/frequency.hpp"
#include "toposon/homology.hpp"

namespace toposon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

bool parse_number(std::string_view s, double& out)
{
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string format_number(double x)
{
    if (std::isnan(x)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string join_numbers(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ';';
        out += format_number(xs[i]);
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& s)
{
    std::vector<double> out;
    if (s.empty()) return out;
    for (const std::string& item : split(s, ';')) {
        double x = 0.0;
        if (!parse_number(item, x)) throw std::runtime_error("malformed number list '" + s + "'");
        out.push_back(x);
    }
    return out;
}

std::string percent_label(double fraction)
{
    return format_number(std::round(fraction * 1e6) / 1e4) + "%";
}

} // namespace

ScenarioKind parse_kind(const std::string& name)
{
    if (name == "frequency") return ScenarioKind::frequency;
    if (name == "energy") return ScenarioKind::energy;
    if (name == "recovery") return ScenarioKind::recovery;
    throw ConfigError("unknown scenario kind '" + name + "'");
}

std::string to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::frequency: return "frequency";
    case ScenarioKind::energy: return "energy";
    case ScenarioKind::recovery: return "recovery";
    }
    return "unknown";
}

ScenarioConfig default_config(ScenarioKind kind)
{
    ScenarioConfig cfg;
    cfg.kind = kind;
    if (kind == ScenarioKind::energy) cfg.lambda = 6.0;
    if (kind == ScenarioKind::recovery) cfg.seeds = 1000;
    return cfg;
}

namespace {

double radius_lo(const ScenarioConfig& cfg)
{
    return cfg.r_min > 0.0 ? cfg.r_min : cfg.side / 10.0;
}

double radius_hi(const ScenarioConfig& cfg)
{
    return cfg.r_max > 0.0 ? cfg.r_max : 2.0 / std::sqrt(std::numbers::pi * cfg.lambda);
}

} // namespace

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(seeds > 0, "seeds must be positive");
    require(side > 0.0, "side must be positive");
    switch (kind) {
    case ScenarioKind::frequency:
    case ScenarioKind::energy:
        require(lambda > 0.0, "lambda must be positive");
        require(r_min >= 0.0 && r_max >= 0.0, "radius bounds must be non-negative");
        require(radius_lo(*this) <= radius_hi(*this), "r_min exceeds r_max");
        require(resolution >= 16, "resolution must be at least 16");
        require(boundary_spacing > 0.0, "boundary_spacing must be positive");
        require(boundary_radius >= 0.0, "boundary_radius must be non-negative");
        require(shrink_factor > 0.0 && shrink_factor < 1.0, "shrink_factor must lie in (0, 1)");
        require(radius_floor >= 0.0, "radius_floor must be non-negative");
        break;
    case ScenarioKind::recovery:
        require(!coverage_fractions.empty(), "coverage_fractions must not be empty");
        for (double f : coverage_fractions) require(f > 0.0 && f < 1.0, "coverage fractions must lie in (0, 1)");
        require(!planners.empty(), "planners must not be empty");
        require(r > 0.0, "r must be positive");
        require(sigma >= 0.0, "sigma must be non-negative");
        require(grid_step >= 0.0, "grid_step must be non-negative");
        require(boundary_spacing > 0.0, "boundary_spacing must be positive");
        require(max_doublings >= 0, "max_doublings must be non-negative");
        break;
    }
}

ScenarioConfig parse_config(std::istream& in)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        entries.emplace_back(std::move(key), std::move(value));
    }
    if (entries.empty() || entries.front().first != "kind") throw ConfigError("config must start with 'kind = ...'");
    ScenarioConfig cfg = default_config(parse_kind(entries.front().second));

    auto number = [](const std::string& key, const std::string& v) {
        double x = 0.0;
        if (!parse_number(v, x)) throw ConfigError(key + ": '" + v + "' is not a number");
        return x;
    };
    auto count = [&](const std::string& key, const std::string& v) -> std::uint64_t {
        std::uint64_t n = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
        if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
            throw ConfigError(key + ": '" + v + "' is not a non-negative integer");
        return n;
    };
    auto boolean = [](const std::string& key, const std::string& v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError(key + ": '" + v + "' is not a boolean");
    };

    const bool freq = cfg.kind == ScenarioKind::frequency;
    const bool energy = cfg.kind == ScenarioKind::energy;
    const bool recovery = cfg.kind == ScenarioKind::recovery;
    std::set<std::string> seen{"kind"};
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const auto& [key, v] = entries[i];
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        if (key == "kind") throw ConfigError("kind may appear only once");
        else if (key == "seeds") cfg.seeds = count(key, v);
        else if (key == "seed0") cfg.seed0 = count(key, v);
        else if (key == "threads") cfg.threads = static_cast<unsigned>(count(key, v));
        else if (key == "side") cfg.side = number(key, v);
        else if (key == "lambda" && !recovery) cfg.lambda = number(key, v);
        else if (key == "r_min" && !recovery) cfg.r_min = number(key, v);
        else if (key == "r_max" && !recovery) cfg.r_max = number(key, v);
        else if (key == "resolution" && freq) cfg.resolution = static_cast<int>(count(key, v));
        else if (key == "greedy_order" && freq) {
            if (v != "id" && v != "random") throw ConfigError("greedy_order must be 'id' or 'random'");
            cfg.greedy_random_order = v == "random";
        }
        else if (key == "boundary_spacing" && !freq) cfg.boundary_spacing = number(key, v);
        else if (key == "boundary_radius" && energy) cfg.boundary_radius = number(key, v);
        else if (key == "shrink_factor" && energy) cfg.shrink_factor = number(key, v);
        else if (key == "radius_floor" && energy) cfg.radius_floor = number(key, v);
        else if (key == "halt_on_first_quota" && energy) cfg.halt_on_first_quota = boolean(key, v);
        else if (key == "coverage_fractions" && recovery) {
            cfg.coverage_fractions.clear();
            for (const std::string& item : split(v, ',')) cfg.coverage_fractions.push_back(number(key, item));
        }
        else if (key == "planners" && recovery) {
            cfg.planners.clear();
            for (const std::string& item : split(v, ',')) {
                try {
                    cfg.planners.push_back(parse_planner(item));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
            }
        }
        else if (key == "r" && recovery) cfg.r = number(key, v);
        else if (key == "sigma" && recovery) cfg.sigma = number(key, v);
        else if (key == "grid_step" && recovery) cfg.grid_step = number(key, v);
        else if (key == "mcmc_steps" && recovery) cfg.mcmc_steps = count(key, v);
        else if (key == "n_modes" && recovery) cfg.n_modes = count(key, v);
        else if (key == "max_doublings" && recovery) cfg.max_doublings = static_cast<int>(count(key, v));
        else throw ConfigError("key '" + key + "' is not valid for kind " + to_string(cfg.kind));
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    return parse_config(in);
}

std::size_t Table::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

const Value& Table::at(std::size_t row, const std::string& name) const
{
    return rows.at(row).at(column(name));
}

double Table::number(std::size_t row, const std::string& name) const
{
    const Value& v = at(row, name);
    if (const double* d = std::get_if<double>(&v)) return *d;
    throw std::runtime_error("column '" + name + "' holds text");
}

std::string Table::text(std::size_t row, const std::string& name) const
{
    const Value& v = at(row, name);
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    return format_number(std::get<double>(v));
}

namespace {

const std::vector<std::string>& record_columns(ScenarioKind kind)
{
    static const std::vector<std::string> freq{"seed", "failed", "error", "N", "N_g", "N_f", "plan_valid",
                                               "auto_coverage", "greedy_coverage"};
    static const std::vector<std::string> energy{"seed", "failed", "error", "N", "N_o", "N_k", "N_k_minus_N_o",
                                                 "energy_before", "energy_after", "invariants_ok"};
    static const std::vector<std::string> recovery{"seed", "failed", "error", "scenario", "planner", "N_i",
                                                   "n_added_total", "n_added_kept", "beta1_planned",
                                                   "beta1_after_perturbation"};
    switch (kind) {
    case ScenarioKind::frequency: return freq;
    case ScenarioKind::energy: return energy;
    case ScenarioKind::recovery: break;
    }
    return recovery;
}

std::vector<Value> failed_row(ScenarioKind kind, std::uint64_t seed, const std::string& error)
{
    std::vector<Value> row(record_columns(kind).size(), Value(kNaN));
    row[0] = static_cast<double>(seed);
    row[1] = 1.0;
    row[2] = error;
    return row;
}

double min_max_ratio(const std::vector<double>& cov)
{
    if (cov.empty()) return kNaN;
    const auto [lo, hi] = std::minmax_element(cov.begin(), cov.end());
    return *hi > 0.0 ? *lo / *hi : kNaN;
}

std::vector<Value> frequency_seed(const ScenarioConfig& cfg, std::uint64_t seed)
{
    Rng rng(seed);
    NodeSet ns = sample_poisson(cfg.lambda, cfg.side, rng);
    ns = assign_radii_uniform(std::move(ns), radius_lo(cfg), radius_hi(cfg), rng, RadiusRole::comm);
    const SimplicialComplex x = rips_from_disks(ns, RadiusRole::comm);
    const InterferenceGraph ig = interference_graph(ns);
    const FrequencyPlan planned = auto_plan(x, ig, rng);

    std::vector<int> order(ns.size());
    std::iota(order.begin(), order.end(), 0);
    if (cfg.greedy_random_order) rng.shuffle(order.begin(), order.end());
    const FrequencyPlan greedy = greedy_coloring(ig, order);

    const bool valid = is_conflict_free(planned, ig) && is_conflict_free(greedy, ig);
    return {static_cast<double>(seed),
            0.0,
            std::string(),
            static_cast<double>(ns.size()),
            static_cast<double>(greedy.n_freqs),
            static_cast<double>(planned.n_freqs),
            valid ? 1.0 : 0.0,
            join_numbers(coverage_per_frequency(ns, planned, cfg.resolution)),
            join_numbers(coverage_per_frequency(ns, greedy, cfg.resolution))};
}

bool energy_invariants(const SimplicialComplex& x, const NodeSet& ns, const QoSGroups& groups, const EnergyResult& res)
{
    for (int b : ns.boundary_ids())
        if (!std::binary_search(res.kept.begin(), res.kept.end(), b)) return false;

    std::vector<int> kept_per_group(groups.quota.size(), 0);
    for (int v : res.kept) ++kept_per_group[static_cast<std::size_t>(groups.group(v) - 1)];
    for (std::size_t g = 0; g < kept_per_group.size(); ++g)
        if (kept_per_group[g] < groups.quota[g]) return false;

    NodeSet shrunk = ns;
    for (const auto& [v, r] : res.new_r_cov) {
        if (r > ns.nodes[v].r_cov) return false;
        shrunk.nodes[v].r_cov = r;
    }
    return betti(rips_from_disks(shrunk, res.kept, RadiusRole::cov, 2)) == betti(x);
}

std::vector<Value> energy_seed(const ScenarioConfig& cfg, std::uint64_t seed)
{
    Rng rng(seed);
    NodeSet ns = sample_poisson(cfg.lambda, cfg.side, rng);
    ns = assign_radii_uniform(std::move(ns), radius_lo(cfg), radius_hi(cfg), rng, RadiusRole::cov);
    const double rb = cfg.boundary_radius > 0.0 ? cfg.boundary_radius : cfg.side / 3.0;
    ns = make_boundary(std::move(ns), BoundaryMode::square_perimeter, cfg.boundary_spacing, rb);

    const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
    const QoSGroups groups = make_qos_groups(x, rng);
    EnergyOptions options;
    options.shrink_factor = cfg.shrink_factor;
    options.radius_floor = cfg.radius_floor;
    options.halt_on_first_quota = cfg.halt_on_first_quota;
    const EnergyResult res = conserve(x, ns, groups, rng, options);

    const double n_o = groups.total_quota();
    const double n_k = static_cast<double>(res.kept.size());
    return {static_cast<double>(seed),
            0.0,
            std::string(),
            static_cast<double>(ns.size()),
            n_o,
            n_k,
            n_k - n_o,
            radius_energy(ns),
            radius_energy(res),
            energy_invariants(x, ns, groups, res) ? 1.0 : 0.0};
}

} // namespace

Table run_seed(const ScenarioConfig& cfg, std::uint64_t seed)
{
    Table t;
    t.columns = record_columns(cfg.kind);
    if (cfg.kind != ScenarioKind::recovery) {
        try {
            t.rows.push_back(cfg.kind == ScenarioKind::frequency ? frequency_seed(cfg, seed) : energy_seed(cfg, seed));
        } catch (const std::exception& e) {
            t.rows.push_back(failed_row(cfg.kind, seed, e.what()));
        }
        return t;
    }

    RecoveryKnobs knobs;
    knobs.kernel.n_modes = cfg.n_modes;
    knobs.kernel.mcmc_steps = cfg.mcmc_steps;
    knobs.kernel.max_doublings = cfg.max_doublings;
    knobs.grid_step = cfg.grid_step;
    for (double fraction : cfg.coverage_fractions) {
        const DamageScenario ds{fraction, cfg.r, cfg.side, cfg.boundary_spacing};
        for (Planner planner : cfg.planners) {
            // Every planner sees the same damaged network for a given seed.
            Rng rng(seed);
            std::vector<Value> row;
            try {
                const RobustnessSample s = robustness_sample(planner, ds, cfg.sigma, knobs, rng);
                row = {static_cast<double>(seed),
                       0.0,
                       std::string(),
                       percent_label(fraction),
                       to_string(planner),
                       static_cast<double>(s.n_initial),
                       static_cast<double>(s.n_added_total),
                       static_cast<double>(s.n_added_kept),
                       static_cast<double>(s.betti_planned.beta1),
                       static_cast<double>(s.beta1_perturbed)};
            } catch (const std::exception& e) {
                row = failed_row(cfg.kind, seed, e.what());
                row[3] = percent_label(fraction);
                row[4] = to_string(planner);
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

namespace {

struct Mean {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double x) { sum += x; ++n; }
    double value() const { return n ? sum / static_cast<double>(n) : kNaN; }
};

std::vector<Value> stat_row(const std::string& table, const std::string& condition, std::size_t runs,
                            const std::string& statistic, double value)
{
    return {table, condition, static_cast<double>(runs), statistic, value};
}

std::vector<std::size_t> ok_rows(const Table& records)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < records.rows.size(); ++i)
        if (records.number(i, "failed") == 0.0) out.push_back(i);
    return out;
}

Table aggregate_frequency(const Table& records)
{
    Table t;
    t.columns = {"table", "condition", "runs", "statistic", "value"};
    const auto ok = ok_rows(records);
    if (ok.empty()) return t;

    std::map<int, Mean> nf_given_ng;
    std::map<int, std::vector<Mean>> auto_cov, greedy_cov;
    std::map<int, Mean> auto_ratio, greedy_ratio;
    Mean valid;
    for (std::size_t i : ok) {
        const int ng = static_cast<int>(records.number(i, "N_g"));
        const int nf = static_cast<int>(records.number(i, "N_f"));
        nf_given_ng[ng].add(nf);
        valid.add(records.number(i, "plan_valid"));

        auto fold = [](std::vector<Mean>& acc, const std::vector<double>& cov) {
            if (acc.size() < cov.size()) acc.resize(cov.size());
            for (std::size_t f = 0; f < cov.size(); ++f) acc[f].add(cov[f]);
        };
        const auto ac = parse_numbers(records.text(i, "auto_coverage"));
        const auto gc = parse_numbers(records.text(i, "greedy_coverage"));
        fold(auto_cov[nf], ac);
        fold(greedy_cov[ng], gc);
        if (const double r = min_max_ratio(ac); !std::isnan(r)) auto_ratio[nf].add(r);
        if (const double r = min_max_ratio(gc); !std::isnan(r)) greedy_ratio[ng].add(r);
    }

    const double total = static_cast<double>(ok.size());
    for (const auto& [ng, m] : nf_given_ng) {
        const std::string cond = "N_g=" + std::to_string(ng);
        t.rows.push_back(stat_row("I", cond, m.n, "occurrence_pct", 100.0 * static_cast<double>(m.n) / total));
        t.rows.push_back(stat_row("I", cond, m.n, "mean_N_f", m.value()));
    }
    auto coverage_rows = [&](const std::string& who, const std::string& var, const std::map<int, std::vector<Mean>>& cov,
                             const std::map<int, Mean>& ratio) {
        for (const auto& [k, per_f] : cov) {
            const std::string cond = who + " " + var + "=" + std::to_string(k);
            const std::size_t runs = per_f.empty() ? 0 : per_f.front().n;
            for (std::size_t f = 0; f < per_f.size(); ++f)
                t.rows.push_back(stat_row("II", cond, runs, "f" + std::to_string(f + 1) + "_pct", 100.0 * per_f[f].value()));
            const auto it = ratio.find(k);
            t.rows.push_back(stat_row("II", cond, runs, "min_max_ratio", it == ratio.end() ? kNaN : it->second.value()));
        }
    };
    coverage_rows("auto", "N_f", auto_cov, auto_ratio);
    coverage_rows("greedy", "N_g", greedy_cov, greedy_ratio);
    t.rows.push_back(stat_row("all", "", valid.n, "plan_valid_pct", 100.0 * valid.value()));
    return t;
}

Table aggregate_energy(const Table& records)
{
    Table t;
    t.columns = {"table", "condition", "runs", "statistic", "value"};
    const auto ok = ok_rows(records);
    if (ok.empty()) return t;

    Mean diff, n_o, n_k, saving, invariants;
    std::map<int, Mean> nk_given_no;
    for (std::size_t i : ok) {
        diff.add(records.number(i, "N_k_minus_N_o"));
        n_o.add(records.number(i, "N_o"));
        n_k.add(records.number(i, "N_k"));
        const double before = records.number(i, "energy_before");
        if (before > 0.0) saving.add(1.0 - records.number(i, "energy_after") / before);
        invariants.add(records.number(i, "invariants_ok"));
        nk_given_no[static_cast<int>(records.number(i, "N_o"))].add(records.number(i, "N_k"));
    }
    t.rows.push_back(stat_row("III", "all", diff.n, "mean_N_k_minus_N_o", diff.value()));
    t.rows.push_back(stat_row("III", "all", n_o.n, "mean_N_o", n_o.value()));
    t.rows.push_back(stat_row("III", "all", n_k.n, "mean_N_k", n_k.value()));
    t.rows.push_back(stat_row("III", "all", saving.n, "mean_energy_saving", saving.value()));
    const double total = static_cast<double>(ok.size());
    for (const auto& [no, m] : nk_given_no) {
        const std::string cond = "N_o=" + std::to_string(no);
        t.rows.push_back(stat_row("IV", cond, m.n, "occurrence_pct", 100.0 * static_cast<double>(m.n) / total));
        t.rows.push_back(stat_row("IV", cond, m.n, "mean_N_k", m.value()));
    }
    t.rows.push_back(stat_row("all", "", invariants.n, "invariants_ok_pct", 100.0 * invariants.value()));
    return t;
}

Table aggregate_recovery(const Table& records)
{
    Table t;
    t.columns = {"scenario", "planner", "mean_beta1", "p_beta1_zero", "mean_added_kept", "mean_added_total", "runs",
                 "failures"};
    struct Cell {
        Mean beta1, zero, kept, total;
        std::size_t failures = 0;
    };
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, Cell> cells;
    for (std::size_t i = 0; i < records.rows.size(); ++i) {
        const std::pair key{records.text(i, "scenario"), records.text(i, "planner")};
        if (!cells.contains(key)) order.push_back(key);
        Cell& c = cells[key];
        if (records.number(i, "failed") != 0.0) {
            ++c.failures;
            continue;
        }
        const double b1 = records.number(i, "beta1_after_perturbation");
        c.beta1.add(b1);
        c.zero.add(b1 == 0.0 ? 1.0 : 0.0);
        c.kept.add(records.number(i, "n_added_kept"));
        c.total.add(records.number(i, "n_added_total"));
    }
    for (const auto& key : order) {
        const Cell& c = cells.at(key);
        t.rows.push_back({key.first, key.second, c.beta1.value(), c.zero.value(), c.kept.value(), c.total.value(),
                          static_cast<double>(c.beta1.n), static_cast<double>(c.failures)});
    }
    return t;
}

} // namespace

Table aggregate(ScenarioKind kind, const Table& records)
{
    switch (kind) {
    case ScenarioKind::frequency: return aggregate_frequency(records);
    case ScenarioKind::energy: return aggregate_energy(records);
    case ScenarioKind::recovery: break;
    }
    return aggregate_recovery(records);
}

RunReport run_batch(const ScenarioConfig& cfg)
{
    cfg.validate();
    std::vector<Table> per_seed(cfg.seeds);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.seeds; i = next++) per_seed[i] = run_seed(cfg, cfg.seed0 + i);
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto n_threads = static_cast<unsigned>(std::min<std::size_t>(cfg.threads ? cfg.threads : hw, cfg.seeds));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    RunReport rep;
    rep.kind = cfg.kind;
    rep.records.columns = record_columns(cfg.kind);
    for (Table& t : per_seed)
        for (auto& row : t.rows) {
            if (std::get<double>(row[1]) != 0.0) ++rep.failures;
            rep.records.rows.push_back(std::move(row));
        }
    rep.aggregate = aggregate(cfg.kind, rep.records);
    return rep;
}

namespace {

void write_field(std::ostream& out, const Value& v)
{
    if (const double* d = std::get_if<double>(&v)) {
        out << format_number(*d);
        return;
    }
    const std::string& s = std::get<std::string>(v);
    double probe = 0.0;
    const bool needs_quotes = s.empty() || parse_number(s, probe) || s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

} // namespace

void write_csv(std::ostream& out, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ',';
        write_field(out, t.columns[i]);
    }
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            write_field(out, row[i]);
        }
        out << "\r\n";
    }
}

Table read_csv(std::istream& in)
{
    struct Cell {
        std::string text;
        bool quoted = false;
    };
    std::vector<std::vector<Cell>> lines;
    std::vector<Cell> row;
    Cell cell;
    bool in_quotes = false;
    bool any = false;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell = Cell{};
    };
    auto end_row = [&] {
        end_cell();
        lines.push_back(std::move(row));
        row.clear();
        any = false;
    };
    char c = 0;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.text += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                cell.text += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            in_quotes = true;
            cell.quoted = true;
        } else if (c == ',') {
            end_cell();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            end_row();
        } else if (c == '\n') {
            end_row();
        } else {
            cell.text += c;
        }
    }
    if (in_quotes) throw std::runtime_error("read_csv: unterminated quoted field");
    if (any) end_row();

    Table t;
    if (lines.empty()) return t;
    for (Cell& h : lines.front()) t.columns.push_back(std::move(h.text));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != t.columns.size()) throw std::runtime_error("read_csv: ragged row " + std::to_string(i));
        std::vector<Value> values;
        for (Cell& x : lines[i]) {
            double d = 0.0;
            if (x.quoted) values.emplace_back(std::move(x.text));
            else if (x.text.empty()) values.emplace_back(kNaN);
            else if (parse_number(x.text, d)) values.emplace_back(d);
            else values.emplace_back(std::move(x.text));
        }
        t.rows.push_back(std::move(values));
    }
    return t;
}

std::filesystem::path raw_path(const std::filesystem::path& path)
{
    std::filesystem::path out = path;
    out.replace_filename(path.stem().string() + "_raw" + path.extension().string());
    return out;
}

void emit_csv(const RunReport& rep, const std::filesystem::path& path)
{
    auto write = [](const std::filesystem::path& p, const Table& t) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        write_csv(out, t);
        if (!out) throw std::runtime_error("write failed for " + p.string());
    };
    write(path, rep.aggregate);
    write(raw_path(path), rep.records);
}

} // namespace toposon
