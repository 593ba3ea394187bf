#include "dirout/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "dirout/errors.hpp"
#include "dirout/functional.hpp"
#include "dirout/parallel.hpp"
#include "dirout/rng.hpp"

namespace dirout {

namespace {

constexpr std::uint64_t kReplicationStream = 0x5245504c53545231ULL;
constexpr std::uint64_t kDepthStream = 0x4450485353545231ULL;
constexpr std::uint64_t kMcdStream = 0x4d43445353545231ULL;

struct Slot {
    bool ok = false;
    bool failed = false;
    EvalMetrics metrics;
};

void mean_sd(const std::vector<double>& values, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (values.empty()) return;
    for (double v : values) mean += v;
    mean /= values.size();
    if (values.size() < 2) return;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / (values.size() - 1));
}

}  // namespace

EvalMetrics evaluate(const std::vector<std::uint8_t>& flags, const LabelSet& truth) {
    if (flags.size() != truth.flags.size())
        throw LengthMismatch("flag and label vectors differ in length");

    int outliers = 0, normals = 0, hits = 0, false_alarms = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (truth.flags[i]) {
            ++outliers;
            if (flags[i]) ++hits;
        } else {
            ++normals;
            if (flags[i]) ++false_alarms;
        }
    }

    EvalMetrics metrics;
    if (outliers > 0) metrics.pc = 100.0 * hits / outliers;
    metrics.pf = normals > 0 ? 100.0 * false_alarms / normals : 0.0;
    return metrics;
}

MonteCarloResult monte_carlo_aggregate(
    int runs, std::uint64_t master_seed,
    const std::function<EvalMetrics(int, std::uint64_t)>& run, int n_threads) {
    if (runs < 1) throw std::invalid_argument("need at least one replication");

    std::vector<Slot> slots(runs);
    parallel_for(
        runs,
        [&](int r) {
            const std::uint64_t seed = derive_seed(master_seed, kReplicationStream, r);
            try {
                slots[r].metrics = run(r, seed);
                slots[r].ok = true;
            } catch (const SingularScatter&) {
                slots[r].failed = true;
            }
        },
        n_threads);

    MonteCarloResult result;
    std::vector<double> pcs, pfs;
    for (const Slot& slot : slots) {
        if (slot.failed) {
            ++result.failures;
            continue;
        }
        if (!slot.ok) continue;
        ++result.runs;
        if (slot.metrics.pc) pcs.push_back(*slot.metrics.pc);
        pfs.push_back(slot.metrics.pf);
    }

    double mean, sd;
    if (!pcs.empty()) {
        mean_sd(pcs, mean, sd);
        result.pc_mean = mean;
        result.pc_sd = sd;
    }
    mean_sd(pfs, result.pf_mean, result.pf_sd);
    return result;
}

MonteCarloResult monte_carlo(const ModelSpec& model, int runs, const DetectionConfig& det,
                             const DepthConfig& depth, int n_threads) {
    const int p = model.id <= 4 ? 1 : 2;
    const int d = p + 1;
    int h = static_cast<int>(std::floor(det.h_frac * model.n));
    h = std::min(std::max(h, d + 1), model.n);

    // One calibration for every replication: it depends on (n, d, h), not
    // on the replication data.
    DetectionConfig shared = det;
    if (!shared.cutoff)
        shared.cutoff = hardin_rocke_params(model.n, d, h, det.method, det.seed, det.alpha);

    return monte_carlo_aggregate(
        runs, model.seed,
        [&](int, std::uint64_t rep_seed) {
            ModelSpec rep_model = model;
            rep_model.seed = rep_seed;
            auto [data, labels] = generate_model(rep_model);

            DepthConfig rep_depth = depth;
            rep_depth.seed = derive_seed(rep_seed, kDepthStream);
            const std::vector<OutlyingnessSummary> summaries =
                summarize(outlyingness_field(data, rep_depth));

            DetectionConfig rep_det = shared;
            rep_det.seed = derive_seed(rep_seed, kMcdStream);
            const DetectionReport report = detect(summaries, rep_det);
            return evaluate(report.flags, labels);
        },
        n_threads);
}

}  // namespace dirout
