#pragma once

#include <string>
#include <vector>

#include "dirout/core.hpp"
#include "dirout/robust.hpp"

namespace dirout {

// Long-format curves file: header `curve_id,t,x1,...,xp`; rows grouped by
// curve with ascending t; every curve must share the identical time column
// (tolerance 1e-12). Lines starting with '#' are comments. On read the time
// column is affinely normalized to [0, 1]; writers echo the original range
// as a `# t_range lo hi` comment. Floats carry 17 significant digits, which
// round-trips doubles exactly.

struct CsvDataset {
    FunctionalDataset data;
    std::vector<long long> curve_ids;  // ids as they appeared in the file
    double t_lo = 0.0;                 // raw time range before normalization
    double t_hi = 1.0;
};

// Throws Error subtypes on malformed content (message names the offending
// row or grid inconsistency).
CsvDataset read_curves_csv(const std::string& path);

// ids defaults to 0..n-1 when null.
void write_curves_csv(const std::string& path, const FunctionalDataset& data,
                      const std::vector<long long>* ids = nullptr, double t_lo = 0.0,
                      double t_hi = 1.0);

// Labels file: header `curve_id,is_outlier` with 0/1 values.
void write_labels_csv(const std::string& path, const LabelSet& labels,
                      const std::vector<long long>* ids = nullptr);
LabelSet read_labels_csv(const std::string& path);

// Summary file: header `curve_id,mo_1,...,mo_p,vo,fo`.
void write_summaries_csv(const std::string& path,
                         const std::vector<OutlyingnessSummary>& summaries,
                         const std::vector<long long>* ids = nullptr);

// Detection file: header `curve_id,rmd2,scaled_rmd2,cutoff,is_outlier`.
void write_detection_csv(const std::string& path, const DetectionReport& report,
                         const std::vector<long long>* ids = nullptr);

// Shortest representation with 17 significant digits.
std::string format_double(double v);

}  // namespace dirout
