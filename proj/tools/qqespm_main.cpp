#include "qqespm/baseline.hpp"
#include "qqespm/bench.hpp"
#include "qqespm/csv.hpp"
#include "qqespm/engine.hpp"
#include "qqespm/error.hpp"
#include "qqespm/ilqtree.hpp"
#include "qqespm/workload.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

// Exit codes: 0 success, 1 usage/parse error, 2 data error, 3 cross-check
// failure.
constexpr int kExitParse = 1;
constexpr int kExitData = 2;
constexpr int kExitCrossCheck = 3;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw qqespm::data_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct query_args {
    std::string data_path;
    std::string pattern_path;
    std::string algo = "qqespm";
    std::string out_path;
    int capacity = 64;
    int max_depth = 16;
};

int run_query(const query_args& args) {
    const std::vector<qqespm::poi> pois = qqespm::load_pois_csv(args.data_path);
    const qqespm::spatial_pattern pattern =
        qqespm::parse_pattern(read_file(args.pattern_path));

    // Extract id tuples while the backing POI storage is still alive.
    std::vector<std::vector<std::string>> id_tuples;
    double elapsed = 0.0;
    const auto timed = [&](auto&& run) {
        const auto start = std::chrono::steady_clock::now();
        const std::vector<qqespm::match_tuple> matches = run();
        elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        id_tuples = qqespm::match_ids(matches);
    };
    if (args.algo == "bruteforce") {
        timed([&] { return qqespm::brute_force_query(pois, pattern); });
    } else {
        const qqespm::rect region = qqespm::default_root_region(pois);
        const qqespm::il_quadtree ilq =
            qqespm::build_ilq(pois, region, args.capacity, args.max_depth);
        timed([&] {
            return args.algo == "qqespm" ? qqespm::qqespm_query(ilq, pattern)
                                         : qqespm::qq_simple_query(ilq, pattern);
        });
    }

    json doc;
    doc["pattern"] = json::parse(qqespm::serialize_pattern(pattern));
    doc["matches"] = json::array();
    for (const auto& ids : id_tuples) {
        json bindings = json::array();
        for (std::size_t v = 0; v < ids.size(); ++v) {
            bindings.push_back({{"vertex", v}, {"poi_id", ids[v]}});
        }
        doc["matches"].push_back({{"bindings", bindings}});
    }
    doc["elapsed_seconds"] = elapsed;
    if (args.out_path.empty() || args.out_path == "-") {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::ofstream out(args.out_path);
        if (!out) throw qqespm::data_error("cannot write '" + args.out_path + "'");
        out << doc.dump(2) << '\n';
    }
    std::cerr << id_tuples.size() << " match(es) in " << elapsed << " s\n";
    return 0;
}

int run_genpatterns(const std::string& config_path, const std::string& out_dir,
                    std::optional<std::uint64_t> seed) {
    qqespm::workload_config cfg = qqespm::load_workload_config(config_path);
    if (seed) cfg.seed = *seed;
    if (cfg.keyword_pool.empty()) {
        throw qqespm::parse_error("workload config: \"keyword_pool\" is required");
    }
    const std::vector<qqespm::generated_pattern> patterns = qqespm::generate_patterns(cfg);
    std::filesystem::create_directories(out_dir);
    for (const qqespm::generated_pattern& gp : patterns) {
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / ("pattern_" + gp.id + ".json");
        std::ofstream out(path);
        if (!out) throw qqespm::data_error("cannot write '" + path.string() + "'");
        out << qqespm::serialize_pattern(gp.pattern) << '\n';
    }
    std::cout << patterns.size() << " pattern(s) written to " << out_dir << '\n';
    return 0;
}

int run_bench_cmd(const std::string& data_path, const std::string& config_path,
                  const std::string& out_dir, std::optional<std::uint64_t> seed) {
    qqespm::workload_config cfg = qqespm::load_workload_config(config_path);
    if (seed) cfg.seed = *seed;
    const std::vector<qqespm::poi> pois = qqespm::load_pois_csv(data_path);

    if (cfg.keyword_pool.empty()) {
        // default pool: the most frequent keywords in the dataset
        std::map<std::string, std::size_t> freq;
        for (const qqespm::poi& p : pois) {
            for (const std::string& kw : p.keywords) ++freq[kw];
        }
        std::vector<std::pair<std::size_t, std::string>> ranked;
        for (const auto& [kw, count] : freq) ranked.emplace_back(count, kw);
        std::sort(ranked.rbegin(), ranked.rend());
        const std::size_t pool_size = std::min<std::size_t>(ranked.size(), 60);
        for (std::size_t i = 0; i < pool_size; ++i) {
            cfg.keyword_pool.push_back(ranked[i].second);
        }
    }

    const std::vector<qqespm::generated_pattern> patterns = qqespm::generate_patterns(cfg);
    const std::vector<qqespm::bench_record> records = qqespm::run_bench(
        pois, patterns, cfg, [](const std::string& line) { std::cerr << line << '\n'; });
    qqespm::emit_results(records, out_dir);
    std::cout << records.size() << " record(s) written to " << out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QQ-SPM query engine: spatial pattern matching with distance and "
                 "DE-9IM connectivity constraints"};
    app.require_subcommand(1);

    query_args qargs;
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;

    CLI::App* query = app.add_subcommand("query", "run one pattern against a POI CSV");
    query->add_option("--data", qargs.data_path, "POI CSV file")->required();
    query->add_option("--pattern", qargs.pattern_path, "pattern JSON file")->required();
    query->add_option("--algo", qargs.algo, "qqespm | qqsimple | bruteforce")
        ->check(CLI::IsMember({"qqespm", "qqsimple", "bruteforce"}));
    query->add_option("--out", qargs.out_path, "output JSON file ('-' = stdout)");
    query->add_option("--capacity", qargs.capacity, "quadtree leaf split threshold");
    query->add_option("--max-depth", qargs.max_depth, "quadtree depth cap");

    CLI::App* gen = app.add_subcommand("genpatterns", "generate a random pattern workload");
    gen->add_option("--config", config_path, "workload config JSON")->required();
    gen->add_option("--out-dir", out_dir, "output directory")->required();
    gen->add_option("--seed", seed, "override the config seed");

    CLI::App* bench = app.add_subcommand("bench", "run the benchmark protocol");
    bench->add_option("--data", qargs.data_path, "POI CSV file")->required();
    bench->add_option("--config", config_path, "workload config JSON")->required();
    bench->add_option("--out-dir", out_dir, "output directory")->required();
    bench->add_option("--seed", seed, "override the config seed");

    try {
        app.parse(argc, argv);
        if (query->parsed()) return run_query(qargs);
        if (gen->parsed()) return run_genpatterns(config_path, out_dir, seed);
        if (bench->parsed()) return run_bench_cmd(qargs.data_path, config_path, out_dir, seed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitParse;
    } catch (const qqespm::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const qqespm::cross_check_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCrossCheck;
    } catch (const qqespm::data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
