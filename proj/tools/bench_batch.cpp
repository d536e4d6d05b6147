// Times the serial batch runner against the OpenMP one on identical seed
// sets and verifies they produce the same results while at it.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "omas/batch.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

bool same_results(const omas::BatchResult& a, const omas::BatchResult& b) {
    if (a.metrics.size() != b.metrics.size()) return false;
    for (std::size_t i = 0; i < a.metrics.size(); ++i) {
        if (a.metrics[i].epsilon != b.metrics[i].epsilon) return false;
        if (a.metrics[i].convergence != b.metrics[i].convergence) return false;
    }
    return true;
}

}  // namespace

int main() {
    omas::ScenarioConfig cfg;
    cfg.n_total = 80;
    cfg.n_active_initial = 50;
    cfg.churn_rate = 0.10;
    cfg.stabilization_step = 60;
    cfg.instance_count = 10;
    cfg.horizon = 200;
    cfg.runs = 32;
    cfg.seed = 7;

#ifdef _OPENMP
    std::printf("omp max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both lanes run sequentially\n");
#endif
    std::printf("%-8s %-6s %12s %12s %8s\n", "algo", "runs", "serial[s]", "parallel[s]", "speedup");

    for (auto kind : {omas::AlgorithmKind::QAOD, omas::AlgorithmKind::QAPOD,
                      omas::AlgorithmKind::QAIOD}) {
        omas::ScenarioConfig c = cfg;
        c.algorithm = kind;
        if (kind == omas::AlgorithmKind::QAPOD) c.tau_bar = 5;

        auto t0 = std::chrono::steady_clock::now();
        auto serial = omas::run_batch_serial(c, kind);
        auto t1 = std::chrono::steady_clock::now();
        auto parallel = omas::run_batch_parallel(c, kind);
        auto t2 = std::chrono::steady_clock::now();

        if (!same_results(serial, parallel)) {
            std::printf("MISMATCH between serial and parallel results for %s\n",
                        omas::to_string(kind));
            return 1;
        }
        double ts = seconds(t0, t1), tp = seconds(t1, t2);
        std::printf("%-8s %-6d %12.3f %12.3f %8.2fx\n", omas::to_string(kind), c.runs, ts, tp,
                    ts / tp);
    }
    return 0;
}
