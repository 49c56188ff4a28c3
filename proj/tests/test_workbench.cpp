#include "qqespm/bench.hpp"
#include "qqespm/csv.hpp"
#include "qqespm/error.hpp"
#include "qqespm/stats.hpp"
#include "qqespm/workload.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace qqespm;

namespace {

namespace fs = std::filesystem;

struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() /
               ("qqespm_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_pois_csv: points, rects, keyword splitting") {
    temp_dir dir;
    const auto csv = write_file(dir.path / "pois.csv",
                                "id,keywords,lon,lat,min_lon,min_lat,max_lon,max_lat\n"
                                "p1,school,-34.9,-7.1,,,,\n"
                                "p2,Mall; parking,-34.9,-7.1,-34.91,-7.11,-34.89,-7.09\n");
    const std::vector<poi> pois = load_pois_csv(csv);
    REQUIRE(pois.size() == 2);
    CHECK(pois[0].id == "p1");
    CHECK(pois[0].keywords == std::vector<std::string>{"school"});
    CHECK(std::holds_alternative<point>(pois[0].geom));
    CHECK(pois[1].keywords == std::vector<std::string>{"mall", "parking"});
    const rect r = mbr(pois[1].geom);
    CHECK(r == rect{-34.91, -7.11, -34.89, -7.09});
    CHECK(r.contains(pois[1].location));
}

TEST_CASE("load_pois_csv: errors carry line numbers") {
    temp_dir dir;
    const auto expect_error = [&](const std::string& body, const char* needle) {
        const auto csv = write_file(dir.path / "bad.csv",
                                    "id,keywords,lon,lat,min_lon,min_lat,max_lon,max_lat\n" +
                                        body);
        try {
            load_pois_csv(csv);
            FAIL_CHECK("expected data_error for: " << body);
        } catch (const data_error& e) {
            const std::string what = e.what();
            CHECK_MESSAGE(what.find(":2:") != std::string::npos, what);
            CHECK_MESSAGE(what.find(needle) != std::string::npos,
                          what << " should mention " << needle);
        }
    };
    expect_error("p1,school,-34.9\n", "expected 8 fields");
    expect_error("p1,school,-34.9,abc,,,,\n", "lat");
    expect_error("p1,school,-34.9,-7.1,1,1,0,0\n", "min > max");
    expect_error("p1,school,-34.9,-7.1,-35,,,-7\n", "min_lat");
    expect_error("p1,,-34.9,-7.1,,,,\n", "empty keyword");
    expect_error("p1,school,0,0,1,1,2,2\n", "within the MBR");

    const auto dup = write_file(dir.path / "dup.csv",
                                "id,keywords,lon,lat,min_lon,min_lat,max_lon,max_lat\n"
                                "p1,a,0,0,,,,\np1,b,1,1,,,,\n");
    CHECK_THROWS_AS(load_pois_csv(dup), data_error);
    const auto head = write_file(dir.path / "head.csv", "id,keywords,lon\np1,a,0\n");
    CHECK_THROWS_AS(load_pois_csv(head), data_error);
}

TEST_CASE("csv round trip") {
    testing::synth_config cfg;
    cfg.n_pois = 50;
    cfg.seed = 9;
    cfg.max_keywords_per_poi = 3;
    const std::vector<poi> pois = testing::make_synthetic_pois(cfg);
    temp_dir dir;
    write_pois_csv(dir.path / "round.csv", pois);
    const std::vector<poi> loaded = load_pois_csv(dir.path / "round.csv");
    REQUIRE(loaded.size() == pois.size());
    for (std::size_t i = 0; i < pois.size(); ++i) {
        CHECK(loaded[i].id == pois[i].id);
        CHECK(loaded[i].keywords == pois[i].keywords);
        CHECK(loaded[i].location == pois[i].location);
        CHECK(mbr(loaded[i].geom) == mbr(pois[i].geom));
    }
}

TEST_CASE("generate_patterns: paper workload shape") {
    workload_config cfg;
    cfg.keyword_pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    cfg.seed = 33;
    const auto patterns = generate_patterns(cfg);
    CHECK(patterns.size() == 60); // 12 structures x 5

    std::map<int, int> by_vertices;
    for (const generated_pattern& gp : patterns) {
        by_vertices[static_cast<int>(gp.pattern.vertices.size())]++;
        CHECK_NOTHROW(validate_pattern(gp.pattern));
        for (const pattern_edge& e : gp.pattern.edges) {
            REQUIRE(e.interval.has_value());
            CHECK(e.interval->lower >= cfg.l_range.first);
            CHECK(e.interval->lower <= cfg.l_range.second);
            CHECK(e.interval->upper >= e.interval->lower);
            CHECK(e.interval->upper <= e.interval->lower + cfg.u_offset_range.second);
        }
    }
    CHECK(by_vertices == std::map<int, int>{{3, 15}, {4, 15}, {5, 15}, {6, 15}});

    SUBCASE("deterministic under the seed") {
        const auto again = generate_patterns(cfg);
        REQUIRE(again.size() == patterns.size());
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            CHECK(again[i].id == patterns[i].id);
            CHECK(again[i].pattern == patterns[i].pattern);
        }
    }
    SUBCASE("zero qualitative probability gives pure SPM patterns") {
        workload_config spm = cfg;
        spm.qualitative_edge_probability = 0.0;
        for (const generated_pattern& gp : generate_patterns(spm)) {
            for (const pattern_edge& e : gp.pattern.edges) {
                CHECK_FALSE(e.relation.has_value());
            }
        }
    }
    SUBCASE("pool too small") {
        workload_config tiny = cfg;
        tiny.keyword_pool = {"a", "b", "c"};
        CHECK_THROWS_AS(generate_patterns(tiny), data_error);
    }
}

TEST_CASE("z_test_means") {
    SUBCASE("identical samples") {
        const std::vector<double> a(40, 1.0);
        const z_test_result r = z_test_means(a, a);
        CHECK(r.z == 0.0);
        CHECK(r.p_value == 1.0);
        CHECK_FALSE(r.small_sample_warning);
    }
    SUBCASE("separated means with tiny jitter") {
        std::vector<double> a, b;
        for (int i = 0; i < 100; ++i) {
            const double jitter = 0.01 * ((i % 2 == 0) ? 1 : -1);
            a.push_back(1.0 + jitter);
            b.push_back(2.0 + jitter);
        }
        const z_test_result r = z_test_means(a, b);
        // closed form: z = (1 - 2) / sqrt(2 * 0.01005^2 / 100) ~ -703.5
        const double sd = std::sqrt((100.0 / 99.0) * 0.01 * 0.01);
        const double expected_z = -1.0 / std::sqrt(2 * sd * sd / 100.0);
        CHECK(r.z == doctest::Approx(expected_z).epsilon(1e-9));
        CHECK(r.p_value < 1e-6);
    }
    SUBCASE("empty sample errors, small sample warns") {
        CHECK_THROWS_AS(z_test_means({}, std::vector<double>{1.0}), std::invalid_argument);
        const std::vector<double> tiny = {1.0, 2.0};
        CHECK(z_test_means(tiny, tiny).small_sample_warning);
    }
}

TEST_CASE("summarize: degenerate single record") {
    const std::vector<double> one = {0.5};
    const summary_stats s = summarize(one);
    CHECK(s.n == 1);
    CHECK(s.mean == 0.5);
    CHECK(s.stddev == 0.0);
    CHECK(s.ci95_low == 0.5);
    CHECK(s.ci95_high == 0.5);
}

TEST_CASE("run_bench + emit_results on a small protocol") {
    testing::synth_config data_cfg;
    data_cfg.n_pois = 250;
    data_cfg.seed = 2024;
    const std::vector<poi> pois = testing::make_synthetic_pois(data_cfg);

    workload_config cfg;
    cfg.keyword_pool = testing::keywords_of(pois);
    cfg.n_structures = 4;
    cfg.patterns_per_structure = 2;
    cfg.fractions = {50, 100};
    cfg.repeats = 2;
    cfg.capacity = 4;
    cfg.seed = 7;
    const auto patterns = generate_patterns(cfg);
    REQUIRE(patterns.size() == 8);

    const auto records = run_bench(pois, patterns, cfg);
    CHECK(records.size() == 2 * 8 * 2 * 2); // fractions x patterns x algos x repeats

    // per-(fraction, pattern) match counts agree across algorithms and reps
    std::map<std::pair<int, std::string>, std::set<std::uint64_t>> counts;
    for (const bench_record& r : records) {
        CHECK(r.elapsed_seconds >= 0.0);
        counts[{r.dataset_fraction, r.pattern_id}].insert(r.n_matches);
    }
    for (const auto& [key, values] : counts) CHECK(values.size() == 1);

    temp_dir dir;
    emit_results(records, dir.path);
    CHECK(fs::exists(dir.path / "records.csv"));
    CHECK(fs::exists(dir.path / "summary_by_fraction.csv"));
    CHECK(fs::exists(dir.path / "summary_by_vertices.csv"));
    CHECK(fs::exists(dir.path / "ztest.txt"));

    // summary arithmetic: recompute the group means from records.csv
    // independently and compare against the summary file
    std::map<std::pair<std::string, int>, std::pair<double, int>> agg;
    {
        std::ifstream in(dir.path / "records.csv");
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            std::stringstream row(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(row, field, ',')) fields.push_back(field);
            REQUIRE(fields.size() == 10);
            auto& cell = agg[{fields[0], std::stoi(fields[4])}];
            cell.first += std::stod(fields[6]);
            cell.second += 1;
        }
    }
    {
        std::ifstream in(dir.path / "summary_by_fraction.csv");
        std::string line;
        std::getline(in, line);
        int rows = 0;
        while (std::getline(in, line)) {
            std::stringstream row(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(row, field, ',')) fields.push_back(field);
            REQUIRE(fields.size() == 7);
            const auto& cell = agg.at({fields[0], std::stoi(fields[1])});
            CHECK(std::stod(fields[3]) ==
                  doctest::Approx(cell.first / cell.second).epsilon(1e-9));
            CHECK(std::stoi(fields[2]) == cell.second);
            ++rows;
        }
        CHECK(rows == 4); // 2 algorithms x 2 fractions
    }
}

TEST_CASE("fraction slices are nested prefixes of one seeded shuffle") {
    testing::synth_config cfg;
    cfg.n_pois = 97;
    cfg.seed = 31;
    const std::vector<poi> pois = testing::make_synthetic_pois(cfg);
    const std::vector<poi> shuffled = shuffled_dataset(pois, 1234);
    const std::vector<poi> again = shuffled_dataset(pois, 1234);
    REQUIRE(shuffled.size() == pois.size());
    for (std::size_t i = 0; i < pois.size(); ++i) {
        CHECK(shuffled[i].id == again[i].id); // deterministic under the seed
    }
    // a permutation, and the 20% slice is a prefix of the 40% slice, etc.
    std::set<std::string> ids;
    for (const poi& p : shuffled) ids.insert(p.id);
    CHECK(ids.size() == pois.size());
    std::size_t prev = 0;
    for (int fraction : {20, 40, 60, 80, 100}) {
        const std::size_t n = slice_size(shuffled.size(), fraction);
        CHECK(n >= prev);
        prev = n;
    }
    CHECK(slice_size(shuffled.size(), 100) == shuffled.size());
}

TEST_CASE("run_bench: fraction slices nest") {
    testing::synth_config data_cfg;
    data_cfg.n_pois = 40;
    data_cfg.seed = 5;
    const std::vector<poi> pois = testing::make_synthetic_pois(data_cfg);

    // the shuffle is seeded by the workload config, so two runs with the
    // same seed must produce identical match counts per fraction
    workload_config cfg;
    cfg.keyword_pool = testing::keywords_of(pois);
    cfg.n_structures = 1;
    cfg.patterns_per_structure = 1;
    cfg.fractions = {20, 40, 60, 80, 100};
    cfg.repeats = 1;
    cfg.seed = 99;
    const auto patterns = generate_patterns(cfg);
    const auto a = run_bench(pois, patterns, cfg);
    const auto b = run_bench(pois, patterns, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].n_matches == b[i].n_matches);
        CHECK(a[i].dataset_fraction == b[i].dataset_fraction);
    }
}

TEST_CASE("workload config parsing") {
    temp_dir dir;
    const auto cfg_path = write_file(dir.path / "wl.json", R"({
        "n_structures": 3,
        "patterns_per_structure": 2,
        "l_range": [0, 0.005],
        "u_offset_range": [0, 0.02],
        "qualitative_edge_probability": 0.5,
        "keyword_pool": ["A", "b", "c", "d"],
        "seed": 42,
        "fractions": [50, 100],
        "repeats": 1
    })");
    const workload_config cfg = load_workload_config(cfg_path);
    CHECK(cfg.n_structures == 3);
    CHECK(cfg.keyword_pool == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(cfg.fractions == std::vector<int>{50, 100});

    CHECK_THROWS_AS(load_workload_config(dir.path / "missing.json"), parse_error);
    const auto bad = write_file(dir.path / "bad.json", R"({"l_range": [2, 1]})");
    CHECK_THROWS_AS(load_workload_config(bad), parse_error);
    const auto unsorted =
        write_file(dir.path / "uns.json", R"({"fractions": [100, 20]})");
    CHECK_THROWS_AS(load_workload_config(unsorted), parse_error);
}

TEST_CASE("memtrack accounts allocations when enabled") {
    memtrack::enable();
    memtrack::reset_peak();
    const std::uint64_t base = memtrack::current_bytes();
    {
        std::vector<char> big(1 << 20);
        CHECK(memtrack::current_bytes() >= base + (1 << 20));
    }
    CHECK(memtrack::peak_bytes() >= base + (1 << 20));
    memtrack::disable();
}
