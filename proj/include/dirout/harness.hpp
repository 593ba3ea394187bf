#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dirout/core.hpp"
#include "dirout/robust.hpp"
#include "dirout/simulate.hpp"

namespace dirout {

// Detection quality against ground truth, in percent.
struct EvalMetrics {
    std::optional<double> pc;  // flagged true outliers / true outliers; absent when none exist
    double pf = 0.0;           // flagged normals / normals (0 when there are no normals)
};

// Throws LengthMismatch when flags and labels differ in length.
EvalMetrics evaluate(const std::vector<std::uint8_t>& flags, const LabelSet& truth);

struct MonteCarloResult {
    std::optional<double> pc_mean, pc_sd;
    double pf_mean = 0.0;
    double pf_sd = 0.0;
    int failures = 0;  // replications dropped due to SingularScatter
    int runs = 0;      // successful replications
};

// Aggregates metrics over run(replication_index, replication_seed) calls,
// with seeds derived from master_seed. Replications execute concurrently;
// aggregation order is fixed by index, so results do not depend on the
// thread count. SingularScatter failures are counted and excluded.
MonteCarloResult monte_carlo_aggregate(
    int runs, std::uint64_t master_seed,
    const std::function<EvalMetrics(int, std::uint64_t)>& run, int n_threads = 0);

// Repeated generate -> summarize -> detect -> evaluate with derived
// per-replication seeds. The detection calibration is computed once and
// shared across replications. Deterministic given model.seed.
MonteCarloResult monte_carlo(const ModelSpec& model, int runs, const DetectionConfig& det,
                             const DepthConfig& depth, int n_threads = 0);

}  // namespace dirout
