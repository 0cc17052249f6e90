#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandlab/canonical_json.hpp"
#include "bandlab/errors.hpp"
#include "bandlab/harness.hpp"

using namespace bandlab;
using nlohmann::json;

namespace {

ExperimentConfig pilot_config() {
    ExperimentConfig config;
    config.kind = ExperimentKind::Moments;
    config.m = 2;
    config.bandwidth.kind = BandwidthSchedule::Kind::Fixed;
    config.bandwidth.param = 8;
    config.symmetry = SymmetryClass::SymmetricBlocks;
    config.distribution = EntryDistribution::Rademacher;
    config.n_values = {40, 60};
    config.samples_per_n = 4;
    config.k_max = 4;
    config.master_seed = 20240501;
    return config;
}

std::string temp_path(const std::string& name) { return "harness_test_" + name; }

}  // namespace

TEST_CASE("direct GOE sampler: m=1 values are centered with variance 2") {
    const std::vector<double> pool = sample_direct_goe(1, 20000, 7);
    REQUIRE(pool.size() == 20000);
    double sum = 0.0, sum2 = 0.0;
    for (double v : pool) {
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / pool.size();
    const double var = sum2 / pool.size() - mean * mean;
    CHECK(std::fabs(mean) <= 3.0 * std::sqrt(2.0 / pool.size()));
    CHECK(std::fabs(var - 2.0) <= 3.0 * std::sqrt(2.0) * 2.0 / std::sqrt(double(pool.size())));
}

TEST_CASE("direct GOE sampler: m=2 second moment approaches 3/2") {
    const std::vector<double> pool = sample_direct_goe(2, 20000, 11);
    REQUIRE(pool.size() == 40000);
    double sum2 = 0.0, sum = 0.0;
    for (double v : pool) {
        sum += v;
        sum2 += v * v;
    }
    const double m2 = sum2 / pool.size();
    // eigenvalues inside one matrix are dependent; bound with a generous SE
    double ss = 0.0;
    for (double v : pool) ss += (v * v - m2) * (v * v - m2);
    const double se = std::sqrt(ss / pool.size() / pool.size()) * 2.0;
    CHECK(std::fabs(m2 - 1.5) <= 3.0 * se + 1e-3);
    CHECK(std::fabs(sum / pool.size()) <= 0.05);
    // pooled output must arrive sorted
    for (std::size_t i = 1; i < pool.size(); ++i) CHECK(pool[i] >= pool[i - 1]);
}

TEST_CASE("sample seeds never collide across the ladder") {
    std::vector<std::uint64_t> seeds;
    for (ExperimentKind kind :
         {ExperimentKind::Esd, ExperimentKind::Moments, ExperimentKind::MixedTraces})
        for (int N : {100, 200})
            for (int i = 0; i < 50; ++i) seeds.push_back(derive_sample_seed(1, kind, N, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(derive_sample_seed(1, ExperimentKind::Esd, 100, 0) !=
          derive_sample_seed(2, ExperimentKind::Esd, 100, 0));
}

TEST_CASE("run_parallel visits every index once and propagates errors") {
    std::vector<int> hits(100, 0);
    run_parallel(100, 4, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);

    std::atomic<int> calls{0};
    CHECK_THROWS_AS(run_parallel(16, 4,
                                 [&](int i) {
                                     calls.fetch_add(1);
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    CHECK(calls.load() >= 8);
}

TEST_CASE("experiment config round-trips through JSON") {
    ExperimentConfig config = pilot_config();
    config.threads = 8;      // runtime-only: must not be echoed
    config.output = "x.json";
    json j = config;
    CHECK_FALSE(j.contains("threads"));
    CHECK_FALSE(j.contains("output"));
    const ExperimentConfig back = j.get<ExperimentConfig>();
    CHECK(back.kind == config.kind);
    CHECK(back.m == config.m);
    CHECK(back.bandwidth.param == config.bandwidth.param);
    CHECK(back.symmetry == config.symmetry);
    CHECK(back.distribution == config.distribution);
    CHECK(back.n_values == config.n_values);
    CHECK(back.samples_per_n == config.samples_per_n);
    CHECK(back.k_max == config.k_max);
    CHECK(back.master_seed == config.master_seed);
    CHECK(back.threads == 1);

    json missing = j;
    missing.erase("master_seed");
    CHECK_THROWS_AS(missing.get<ExperimentConfig>(), SchemaError);
}

TEST_CASE("experiment config validation rejects bad setups") {
    ExperimentConfig config = pilot_config();
    config.samples_per_n = 1;
    CHECK_THROWS_AS(config.validate(), SchemaError);

    config = pilot_config();
    config.kind = ExperimentKind::MixedTraces;
    config.words = {{2}};
    config.symmetry = SymmetryClass::SymmetricBlocks;  // mixed traces need transpose coupling
    CHECK_THROWS_AS(config.validate(), SchemaError);

    config.symmetry = SymmetryClass::TransposeCoupled;
    CHECK_NOTHROW(config.validate());
    config.words = {{14}};  // 14 letters exceed the combinatorial cap
    CHECK_THROWS_AS(config.validate(), SchemaError);

    config = pilot_config();
    config.reference = ReferenceSource::DirectGoeSampler;  // not a moments reference
    CHECK_THROWS_AS(config.validate(), SchemaError);
}

TEST_CASE("moments experiment produces exact references and stable bytes") {
    const ExperimentConfig config = pilot_config();
    const json report = run_experiment(config);

    CHECK(report.at("schema_version").get<int>() == kReportSchemaVersion);
    CHECK(report.at("kind").get<std::string>() == "moments");
    const json& per_n = report.at("results").at("per_n");
    REQUIRE(per_n.size() == 2);
    for (const json& row : per_n) {
        const json& moments = row.at("moments");
        REQUIRE(moments.size() == 4);
        CHECK(moments[0].at("exact_rational").get<std::string>() == "0");
        CHECK(moments[1].at("exact_rational").get<std::string>() == "3/2");
        CHECK(moments[2].at("exact_rational").get<std::string>() == "0");
        CHECK(moments[3].at("exact_rational").get<std::string>() == "23/4");
        for (const json& entry : moments) CHECK(entry.contains("se"));
    }

    // byte-identical across repeat runs and across thread counts
    const std::string once = canonical_dump(report);
    CHECK(canonical_dump(run_experiment(config)) == once);
    ExperimentConfig threaded = config;
    threaded.threads = 4;
    CHECK(canonical_dump(run_experiment(threaded)) == once);
}

TEST_CASE("esd experiment aggregates histograms against the analytic model") {
    ExperimentConfig config;
    config.kind = ExperimentKind::Esd;
    config.m = 1;
    config.bandwidth.kind = BandwidthSchedule::Kind::PowerLaw;
    config.bandwidth.param = 0.6;
    config.symmetry = SymmetryClass::TransposeCoupled;
    config.distribution = EntryDistribution::Rademacher;
    config.n_values = {60};
    config.samples_per_n = 3;
    config.master_seed = 5;
    const json report = run_experiment(config);

    const json& row = report.at("results").at("per_n").at(0);
    CHECK(row.at("N").get<int>() == 60);
    CHECK(row.at("bandwidth").get<int>() == 12);  // ceil(60^0.6)
    long long count_sum = 0;
    for (const json& c : row.at("histogram_counts")) count_sum += c.get<long long>();
    const double outside = row.at("outside_mass").get<double>();
    CHECK(count_sum + llround(outside * 180) == 180);  // 3 samples x 60 eigenvalues
    CHECK(row.at("pooled_ks").get<double>() > 0.0);
    CHECK(row.at("pooled_ks").get<double>() < 0.5);

    const json& reference = report.at("results").at("reference");
    CHECK(reference.at("source").get<std::string>() == "analytic_density");
    CHECK(reference.at("class").get<std::string>() == "gue");
    CHECK(reference.at("histogram_density").size() == 81);
    CHECK(reference.at("total_mass").get<double>() == doctest::Approx(1.0).epsilon(1e-6));

    // single-N ladder: trend is explicitly not applicable
    CHECK(report.at("results").at("trend").at("nonincreasing").is_null());
}

TEST_CASE("mixed-trace experiment records the exact combinatorial values") {
    ExperimentConfig config;
    config.kind = ExperimentKind::MixedTraces;
    config.m = 2;
    config.bandwidth.kind = BandwidthSchedule::Kind::Fixed;
    config.bandwidth.param = 8;
    config.symmetry = SymmetryClass::TransposeCoupled;
    config.distribution = EntryDistribution::Gaussian;
    config.n_values = {40};
    config.samples_per_n = 4;
    config.words = {{0, 1}, {2}};
    config.master_seed = 99;
    const json report = run_experiment(config);

    const json& words = report.at("results").at("per_n").at(0).at("words");
    REQUIRE(words.size() == 2);
    CHECK(words[0].at("word").get<std::vector<int>>() == std::vector<int>{0, 1});
    CHECK(words[0].at("exact").get<double>() == 4.0);  // <tr H^2> = m^2
    CHECK(words[0].at("exact_integer").get<std::string>() == "4");
    CHECK(words[1].at("exact").get<double>() == 2.0);  // <(tr H)^2> = m
    CHECK(words[1].at("letters").get<int>() == 2);
}

TEST_CASE("reports persist, reload, and reject schema drift") {
    const ExperimentConfig config = pilot_config();
    const json report = run_experiment(config);
    const std::string path = temp_path("roundtrip.json");
    persist_report(report, path);
    const json loaded = load_report(path);
    CHECK(loaded == report);
    CHECK(canonical_dump(loaded) == canonical_dump(report));

    json drifted = report;
    drifted["schema_version"] = kReportSchemaVersion + 1;
    const std::string bad_path = temp_path("drifted.json");
    persist_report(drifted, bad_path);
    CHECK_THROWS_AS(load_report(bad_path), SchemaError);

    write_text_file(temp_path("corrupt.json"), "{not json");
    CHECK_THROWS_AS(load_report(temp_path("corrupt.json")), SchemaError);
    std::remove(path.c_str());
    std::remove(bad_path.c_str());
    std::remove(temp_path("corrupt.json").c_str());
}

TEST_CASE("verification recomputes reference values") {
    const ExperimentConfig config = pilot_config();
    const json report = run_experiment(config);
    CHECK(verify_report(report).empty());

    json tampered = report;
    tampered["results"]["per_n"][0]["moments"][3]["exact_rational"] = "23/5";
    const std::vector<std::string> diffs = verify_report(tampered);
    REQUIRE_FALSE(diffs.empty());
    CHECK(diffs[0].find("exact_rational") != std::string::npos);
}

TEST_CASE("hard-failure scan walks the whole report") {
    json ok = json{{"results", json::array({json{{"pass", true}}})}};
    CHECK_FALSE(report_has_hard_failures(ok));
    json bad = json{{"results", json{{"deep", json::array({json{{"pass", false}}})}}}};
    CHECK(report_has_hard_failures(bad));
}

TEST_CASE("golden pilot fixture reproduces byte-for-byte") {
    const std::string config_path = std::string(BANDLAB_DATA_DIR) + "/golden_pilot_config.json";
    const std::string report_path = std::string(BANDLAB_DATA_DIR) + "/golden_pilot_report.json";
    const json config_doc = json::parse(read_text_file(config_path));
    const ExperimentConfig config = config_doc.get<ExperimentConfig>();
    const json report = run_experiment(config);
    CHECK(canonical_dump(report) == read_text_file(report_path));
    CHECK(verify_report(load_report(report_path)).empty());
}
