#include "omas/batch.hpp"

#include <filesystem>

#include "omas/trace_io.hpp"

namespace omas {

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, int count) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng stream = Rng::stream(master_seed, "batch-seed", (std::uint64_t)i);
        seeds.push_back(stream.next_u64());
    }
    return seeds;
}

namespace {

RunMetrics one_run(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed, int index) {
    Trace trace = run(cfg, kind, seed);
    if (cfg.write_traces && !cfg.out_dir.empty()) {
        std::string stem = cfg.out_dir + "/run_" + std::to_string(index);
        write_text_file(stem + ".json", trace_to_json(trace));
        write_text_file(stem + ".csv", trace_to_csv(trace));
    }
    return extract_metrics(trace);
}

BatchResult finish(const ScenarioConfig& cfg, std::vector<std::uint64_t> seeds,
                   std::vector<RunMetrics> metrics) {
    BatchResult result;
    result.seeds = std::move(seeds);
    result.metrics = std::move(metrics);
    result.summary = aggregate(result.metrics);
    (void)cfg;
    return result;
}

void ensure_out_dir(const ScenarioConfig& cfg) {
    if (cfg.write_traces && !cfg.out_dir.empty())
        std::filesystem::create_directories(cfg.out_dir);
}

}  // namespace

BatchResult run_batch_serial(const ScenarioConfig& cfg, AlgorithmKind kind) {
    cfg.validate();
    ensure_out_dir(cfg);
    auto seeds = derive_seeds(cfg.seed, cfg.runs);
    std::vector<RunMetrics> metrics(cfg.runs);
    for (int i = 0; i < cfg.runs; ++i) metrics[i] = one_run(cfg, kind, seeds[i], i);
    return finish(cfg, std::move(seeds), std::move(metrics));
}

BatchResult run_batch_parallel(const ScenarioConfig& cfg, AlgorithmKind kind) {
    cfg.validate();
    ensure_out_dir(cfg);
    auto seeds = derive_seeds(cfg.seed, cfg.runs);
    std::vector<RunMetrics> metrics(cfg.runs);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < cfg.runs; ++i) metrics[i] = one_run(cfg, kind, seeds[i], i);
    return finish(cfg, std::move(seeds), std::move(metrics));
}

BatchResult run_batch(const ScenarioConfig& cfg, AlgorithmKind kind, bool parallel) {
    return parallel ? run_batch_parallel(cfg, kind) : run_batch_serial(cfg, kind);
}

}  // namespace omas
