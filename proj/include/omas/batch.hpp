#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omas/engine.hpp"
#include "omas/metrics.hpp"

namespace omas {

// Per-run seeds derived from the master seed with the splitmix64 mix, so a
// batch is reproducible anywhere from (config, seed) alone.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, int count);

struct BatchResult {
    std::vector<std::uint64_t> seeds;
    std::vector<RunMetrics> metrics;  // indexed like seeds
    AggregateSummary summary;
};

// Runs cfg.runs independent simulations. Runs share no mutable state, so the
// parallel variant fans them out across OpenMP threads; the serial variant
// is the reference the parallel one is checked against (results are
// identical by construction, seed for seed). When cfg.write_traces is set,
// each run's trace and per-step CSV land in cfg.out_dir.
BatchResult run_batch_serial(const ScenarioConfig& cfg, AlgorithmKind kind);
BatchResult run_batch_parallel(const ScenarioConfig& cfg, AlgorithmKind kind);
BatchResult run_batch(const ScenarioConfig& cfg, AlgorithmKind kind, bool parallel);

}  // namespace omas
