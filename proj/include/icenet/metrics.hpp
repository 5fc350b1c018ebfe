#pragma once

// Precision / recall / F1 with the antonym class as positive, and
// multi-run mean +- sample standard deviation aggregation.

#include <string>
#include <utility>
#include <vector>

#include "icenet/errors.hpp"

namespace icenet {

struct EvalReport {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    int undefined_metric_warnings = 0;

    // Filled by aggregate()
    std::vector<EvalReport> runs;
    double precision_std = 0.0, recall_std = 0.0, f1_std = 0.0;
};

// predictions: (predicted, actual) with 1 = antonym (positive class).
EvalReport evaluate(const std::vector<std::pair<int, int>>& predictions);

// Per-metric mean and sample (n-1) standard deviation; n = 1 gives std 0.
EvalReport aggregate(const std::vector<EvalReport>& reports);

// One tab-separated row: P, R, F1 (the paper's column order).
std::string metrics_row(const EvalReport& r, bool with_std = false);

}  // namespace icenet
