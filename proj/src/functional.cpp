#include "dirout/functional.hpp"

#include <cmath>

#include "dirout/errors.hpp"
#include "dirout/pointwise.hpp"

namespace dirout {

OutlyingnessField outlyingness_field(const FunctionalDataset& data, const DepthConfig& cfg) {
    validate_dataset(data);
    const int n = data.n;
    const int k = data.k();
    const int p = data.p;

    OutlyingnessField field;
    field.n = n;
    field.k = k;
    field.p = p;
    field.o.assign(static_cast<std::size_t>(n) * k * p, 0.0);

    // One direction set per dataset; every time point sees the same projections.
    DirectionSet dirs;
    if (p >= 2) dirs = DirectionSet::sample(p, cfg.n_directions, cfg.seed);

    PointCloud cloud(n, p);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < p; ++c) cloud(i, c) = data.value(i, j, c);

        const CloudOutlyingness out = cloud_outlyingness(cloud, dirs);
        for (int i = 0; i < n; ++i) {
            if (std::isinf(out.sdo[i])) throw InfiniteOutlyingness(i, j);
            Eigen::VectorXd offset = cloud.row(i).transpose() - out.deepest;
            const double dist = offset.norm();
            if (dist <= 1e-12) continue;
            const double scale = out.sdo[i] / dist;
            for (int c = 0; c < p; ++c) field.at(i, j, c) = scale * offset[c];
        }
    }
    return field;
}

std::vector<OutlyingnessSummary> summarize(const OutlyingnessField& field) {
    const int n = field.n;
    const int k = field.k;
    const int p = field.p;

    std::vector<OutlyingnessSummary> summaries(n);
    for (int i = 0; i < n; ++i) {
        OutlyingnessSummary& s = summaries[i];
        s.mo.assign(p, 0.0);
        for (int j = 0; j < k; ++j)
            for (int c = 0; c < p; ++c) s.mo[c] += field.at(i, j, c);
        for (int c = 0; c < p; ++c) s.mo[c] /= k;

        double vo = 0.0;
        double fo = 0.0;
        for (int j = 0; j < k; ++j) {
            double dev2 = 0.0;
            double norm2 = 0.0;
            for (int c = 0; c < p; ++c) {
                const double o = field.at(i, j, c);
                const double d = o - s.mo[c];
                dev2 += d * d;
                norm2 += o * o;
            }
            vo += dev2;
            fo += norm2;
        }
        s.vo = vo / k;
        s.fo = fo / k;
    }
    return summaries;
}

}  // namespace dirout
