#include "qqespm/bench.hpp"

#include "qqespm/baseline.hpp"
#include "qqespm/engine.hpp"
#include "qqespm/error.hpp"
#include "qqespm/ilqtree.hpp"
#include "qqespm/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace qqespm {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<match_tuple> run_algorithm(const std::string& algorithm, const il_quadtree& ilq,
                                       const spatial_pattern& p) {
    if (algorithm == "qqespm") return qqespm_query(ilq, p);
    if (algorithm == "qqsimple") return qq_simple_query(ilq, p);
    throw data_error("unknown benchmark algorithm '" + algorithm + "'");
}

void write_summary_csv(const std::filesystem::path& path, const char* group_column,
                       const std::map<std::pair<std::string, int>, std::vector<double>>& groups) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path.string() + "'");
    out << "algorithm," << group_column
        << ",n,mean_elapsed_seconds,std_elapsed_seconds,ci95_low,ci95_high\n";
    for (const auto& [key, values] : groups) {
        const summary_stats s = summarize(values);
        out << key.first << ',' << key.second << ',' << s.n << ',' << fmt(s.mean) << ','
            << fmt(s.stddev) << ',' << fmt(s.ci95_low) << ',' << fmt(s.ci95_high) << '\n';
    }
    if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

} // namespace

std::vector<poi> shuffled_dataset(std::span<const poi> data, std::uint64_t seed) {
    std::vector<poi> shuffled(data.begin(), data.end());
    split_rng rng(seed ^ 0xd1b54a32d192ed03ULL);
    rng.shuffle(shuffled);
    return shuffled;
}

std::size_t slice_size(std::size_t total, int fraction) {
    return std::min(total,
                    static_cast<std::size_t>(total * (fraction / 100.0) + 0.5));
}

std::vector<bench_record> run_bench(std::span<const poi> data,
                                    std::span<const generated_pattern> patterns,
                                    const workload_config& cfg,
                                    void (*progress)(const std::string&)) {
    if (cfg.repeats < 1) throw data_error("run_bench: repeats must be >= 1");
    if (!std::is_sorted(cfg.fractions.begin(), cfg.fractions.end())) {
        throw data_error("run_bench: fractions must be ascending");
    }

    // One shuffle under the workload seed; fraction slices are prefixes of
    // it, so every slice nests inside the larger ones.
    const std::vector<poi> shuffled = shuffled_dataset(data, cfg.seed);

    std::vector<bench_record> records;
    const bool track_memory = true;
    for (int fraction : cfg.fractions) {
        const std::size_t count = slice_size(shuffled.size(), fraction);
        std::vector<poi> slice(shuffled.begin(),
                               shuffled.begin() + static_cast<std::ptrdiff_t>(count));
        const rect region = default_root_region(slice);
        const il_quadtree ilq = build_ilq(std::move(slice), region, cfg.capacity,
                                          cfg.max_depth);
        if (progress) {
            std::ostringstream msg;
            msg << "fraction " << fraction << "%: " << count << " POIs indexed";
            (*progress)(msg.str());
        }

        for (const generated_pattern& gp : patterns) {
            std::vector<std::vector<std::string>> reference_ids;
            bool have_reference = false;
            for (const std::string& algorithm : cfg.algorithms) {
                for (int rep = 0; rep < cfg.repeats; ++rep) {
                    if (track_memory) {
                        memtrack::enable();
                        memtrack::reset_peak();
                    }
                    const std::uint64_t base_bytes = memtrack::current_bytes();
                    const auto start = std::chrono::steady_clock::now();
                    const std::vector<match_tuple> matches =
                        run_algorithm(algorithm, ilq, gp.pattern);
                    const auto stop = std::chrono::steady_clock::now();
                    const std::uint64_t peak = memtrack::peak_bytes();
                    if (track_memory) memtrack::disable();

                    bench_record rec;
                    rec.algorithm = algorithm;
                    rec.pattern_id = gp.id;
                    rec.structure = gp.structure;
                    rec.n_vertices = static_cast<int>(gp.pattern.vertices.size());
                    rec.dataset_fraction = fraction;
                    rec.repetition = rep;
                    rec.elapsed_seconds =
                        std::chrono::duration<double>(stop - start).count();
                    rec.peak_alloc_bytes = peak > base_bytes ? peak - base_bytes : 0;
                    rec.n_matches = matches.size();
                    rec.seed = cfg.seed;
                    records.push_back(std::move(rec));

                    if (rep == 0) {
                        std::vector<std::vector<std::string>> ids = match_ids(matches);
                        if (!have_reference) {
                            reference_ids = std::move(ids);
                            have_reference = true;
                        } else if (ids != reference_ids) {
                            std::ostringstream msg;
                            msg << "result mismatch between algorithms for pattern '"
                                << gp.id << "' at fraction " << fraction << "%";
                            throw cross_check_error(msg.str());
                        }
                    }
                }
            }
        }
    }
    return records;
}

void emit_results(std::span<const bench_record> records,
                  const std::filesystem::path& out_dir) {
    if (records.empty()) throw data_error("emit_results: no records");
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "records.csv");
        if (!out) throw data_error("cannot write '" + (out_dir / "records.csv").string() + "'");
        out << "algorithm,pattern_id,structure,n_vertices,dataset_fraction,repetition,"
               "elapsed_seconds,peak_alloc_bytes,n_matches,seed\n";
        for (const bench_record& r : records) {
            out << r.algorithm << ',' << r.pattern_id << ',' << r.structure << ','
                << r.n_vertices << ',' << r.dataset_fraction << ',' << r.repetition << ','
                << fmt(r.elapsed_seconds) << ',' << r.peak_alloc_bytes << ',' << r.n_matches
                << ',' << r.seed << '\n';
        }
        if (!out.good()) throw data_error("write failed for records.csv");
    }

    std::map<std::pair<std::string, int>, std::vector<double>> by_fraction;
    std::map<std::pair<std::string, int>, std::vector<double>> by_vertices;
    for (const bench_record& r : records) {
        by_fraction[{r.algorithm, r.dataset_fraction}].push_back(r.elapsed_seconds);
        by_vertices[{r.algorithm, r.n_vertices}].push_back(r.elapsed_seconds);
    }
    write_summary_csv(out_dir / "summary_by_fraction.csv", "dataset_fraction", by_fraction);
    write_summary_csv(out_dir / "summary_by_vertices.csv", "n_vertices", by_vertices);

    // Z test over the largest fraction, first two algorithms in record order.
    const int top_fraction =
        std::max_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
            return a.dataset_fraction < b.dataset_fraction;
        })->dataset_fraction;
    std::vector<std::string> algorithms;
    for (const bench_record& r : records) {
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) ==
            algorithms.end()) {
            algorithms.push_back(r.algorithm);
        }
    }
    std::ofstream out(out_dir / "ztest.txt");
    if (!out) throw data_error("cannot write '" + (out_dir / "ztest.txt").string() + "'");
    if (algorithms.size() < 2) {
        out << "z test requires two algorithms\n";
        return;
    }
    const std::vector<double>& a = by_fraction.at({algorithms[0], top_fraction});
    const std::vector<double>& b = by_fraction.at({algorithms[1], top_fraction});
    const z_test_result zr = z_test_means(a, b);
    out << "fraction: " << top_fraction << "%\n";
    out << algorithms[0] << ": n=" << a.size() << " mean=" << fmt(summarize(a).mean) << " s\n";
    out << algorithms[1] << ": n=" << b.size() << " mean=" << fmt(summarize(b).mean) << " s\n";
    out << "z: " << fmt(zr.z) << "\n";
    out << "p_value: " << fmt(zr.p_value) << "\n";
    if (zr.small_sample_warning) out << "warning: sample size below 30\n";
    if (!out.good()) throw data_error("write failed for ztest.txt");
}

} // namespace qqespm
