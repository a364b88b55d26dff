#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "toposon/experiments.hpp"

using namespace toposon;

namespace {

ScenarioConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string csv(const Table& t)
{
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

Table round_trip(const Table& t)
{
    std::istringstream in(csv(t));
    return read_csv(in);
}

ScenarioConfig small(ScenarioKind kind, std::size_t seeds)
{
    ScenarioConfig cfg = default_config(kind);
    cfg.seeds = seeds;
    cfg.threads = 4;
    if (kind == ScenarioKind::frequency) cfg.resolution = 64;
    if (kind == ScenarioKind::recovery) cfg.coverage_fractions = {0.6, 0.8};
    return cfg;
}

} // namespace

TEST_CASE("defaults per scenario kind")
{
    CHECK(default_config(ScenarioKind::frequency).lambda == 12.0);
    CHECK(default_config(ScenarioKind::energy).lambda == 6.0);
    CHECK(default_config(ScenarioKind::frequency).seeds == 2000);
    CHECK(default_config(ScenarioKind::recovery).seeds == 1000);
    CHECK(parse_kind("energy") == ScenarioKind::energy);
    CHECK(to_string(ScenarioKind::recovery) == "recovery");
    CHECK_THROWS_AS(parse_kind("traffic"), ConfigError);
}

TEST_CASE("config parsing reads keys, lists, and comments")
{
    const ScenarioConfig f = parse("# frequency run\nkind = frequency\nseeds = 10\nlambda = 9.5\ngreedy_order = random\n");
    CHECK(f.kind == ScenarioKind::frequency);
    CHECK(f.seeds == 10);
    CHECK(f.lambda == 9.5);
    CHECK(f.greedy_random_order);

    const ScenarioConfig e = parse("kind = energy\nhalt_on_first_quota = true\nshrink_factor = 0.9\n");
    CHECK(e.lambda == 6.0);
    CHECK(e.halt_on_first_quota);
    CHECK(e.shrink_factor == 0.9);

    const ScenarioConfig r = parse("kind = recovery\ncoverage_fractions = 0.2, 0.8\nplanners = setcover\nsigma = 0\n");
    CHECK(r.coverage_fractions == std::vector<double>{0.2, 0.8});
    CHECK(r.planners == std::vector<Planner>{Planner::set_cover});
    CHECK(r.sigma == 0.0);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse("seeds = 10\nkind = frequency\n"), ConfigError);
    CHECK_THROWS_AS(parse(""), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nseeds = 1\nseeds = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nsigma = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = recovery\nlambda = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nlambda = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nseeds = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nseeds = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nresolution = 8\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\nr_min = 0.5\nr_max = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\ngreedy_order = degree\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = energy\nhalt_on_first_quota = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = energy\nshrink_factor = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = recovery\ncoverage_fractions = 0.2, 1.2\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = recovery\nplanners = oracle\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = recovery\nsigma = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("kind = frequency\njust words\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST_CASE("CSV quoting and numeric formatting")
{
    Table t;
    t.columns = {"name", "value"};
    t.rows.push_back({std::string("plain"), 0.1});
    t.rows.push_back({std::string("a,b"), 1e-300});
    t.rows.push_back({std::string("say \"hi\""), std::numeric_limits<double>::quiet_NaN()});
    t.rows.push_back({std::string("12"), 3.0});
    t.rows.push_back({std::string(""), -2.5});
    t.rows.push_back({std::string("line\nbreak"), 1.0 / 3.0});
    const std::string text = csv(t);
    CHECK(text.substr(0, 12) == "name,value\r\n");
    CHECK(text.find("plain,0.1\r\n") != std::string::npos);
    CHECK(text.find("\"a,b\",1e-300\r\n") != std::string::npos);
    CHECK(text.find("\"say \"\"hi\"\"\",\r\n") != std::string::npos);
    CHECK(text.find("\"12\",3\r\n") != std::string::npos);
    CHECK(text.find("\"\",-2.5\r\n") != std::string::npos);

    const Table back = round_trip(t);
    CHECK(back.columns == t.columns);
    CHECK(csv(back) == text);
    CHECK(back.text(3, "name") == "12");
    CHECK(back.number(5, "value") == 1.0 / 3.0);
    CHECK(std::isnan(back.number(2, "value")));
    CHECK(back.text(5, "name") == "line\nbreak");
}

TEST_CASE("CSV reader rejects malformed input")
{
    std::istringstream ragged("a,b\r\n1\r\n");
    CHECK_THROWS(read_csv(ragged));
    std::istringstream open("a\r\n\"unterminated\r\n");
    CHECK_THROWS(read_csv(open));
}

TEST_CASE("table lookups")
{
    Table t;
    t.columns = {"x"};
    t.rows.push_back({2.0});
    CHECK(t.column("x") == 0);
    CHECK(t.number(0, "x") == 2.0);
    CHECK_THROWS(t.column("y"));
}

TEST_CASE("raw path sits next to the aggregate")
{
    CHECK(raw_path("out/frequency.csv") == std::filesystem::path("out/frequency_raw.csv"));
}

TEST_CASE("batch runs are deterministic and independent of thread count")
{
    for (ScenarioKind kind : {ScenarioKind::frequency, ScenarioKind::energy, ScenarioKind::recovery}) {
        ScenarioConfig a = small(kind, kind == ScenarioKind::recovery ? 4 : 12);
        ScenarioConfig b = a;
        b.threads = 1;
        const RunReport ra = run_batch(a);
        const RunReport rb = run_batch(b);
        CHECK(csv(ra.records) == csv(rb.records));
        CHECK(csv(ra.aggregate) == csv(rb.aggregate));
        CHECK(ra.failures == 0);
    }
}

TEST_CASE("aggregates recompute exactly from the raw CSV")
{
    for (ScenarioKind kind : {ScenarioKind::frequency, ScenarioKind::energy, ScenarioKind::recovery}) {
        const RunReport rep = run_batch(small(kind, kind == ScenarioKind::recovery ? 4 : 20));
        const Table raw = round_trip(rep.records);
        CHECK(csv(aggregate(kind, raw)) == csv(rep.aggregate));
    }
}

TEST_CASE("per-seed records follow the batch fold")
{
    const ScenarioConfig cfg = small(ScenarioKind::frequency, 5);
    const RunReport rep = run_batch(cfg);
    REQUIRE(rep.records.rows.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        const std::uint64_t seed = cfg.seed0 + i;
        CHECK(rep.records.number(i, "seed") == static_cast<double>(seed));
        const Table alone = run_seed(cfg, seed);
        CHECK(alone.columns == rep.records.columns);
        CHECK(csv(alone) == csv(Table{rep.records.columns, {rep.records.rows[i]}}));
    }
}

TEST_CASE("failed seeds are recorded rather than thrown")
{
    ScenarioConfig cfg = small(ScenarioKind::recovery, 2);
    cfg.coverage_fractions = {0.2};
    cfg.planners = {Planner::homology};
    cfg.r = 0.05;
    cfg.max_doublings = 0;
    cfg.mcmc_steps = 5;
    const RunReport rep = run_batch(cfg);
    CHECK(rep.failures == 2);
    for (std::size_t i = 0; i < rep.records.rows.size(); ++i) {
        CHECK(rep.records.number(i, "failed") == 1.0);
        CHECK_FALSE(rep.records.text(i, "error").empty());
    }
    CHECK(rep.aggregate.number(0, "failures") == 2.0);
}

TEST_CASE("empty reports aggregate to a header-only table")
{
    for (ScenarioKind kind : {ScenarioKind::frequency, ScenarioKind::energy}) {
        const RunReport rep = run_batch(small(kind, 1));
        Table none{rep.records.columns, {}};
        const Table agg = aggregate(kind, none);
        CHECK(agg.rows.empty());
        CHECK_FALSE(agg.columns.empty());
    }
}

TEST_CASE("emit_csv writes the aggregate and raw files")
{
    const auto dir = std::filesystem::temp_directory_path() / "toposon_emit_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const RunReport rep = run_batch(small(ScenarioKind::energy, 3));
    emit_csv(rep, dir / "energy.csv");
    std::ifstream agg(dir / "energy.csv"), raw(dir / "energy_raw.csv");
    REQUIRE(agg.good());
    REQUIRE(raw.good());
    CHECK(csv(read_csv(raw)) == csv(rep.records));
    CHECK_THROWS(emit_csv(rep, dir / "missing" / "x.csv"));
    std::filesystem::remove_all(dir);
}
