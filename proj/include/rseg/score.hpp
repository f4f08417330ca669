#pragma once

#include <filesystem>
#include <string>

#include "rseg/calibration.hpp"
#include "rseg/core.hpp"
#include "rseg/segmentation.hpp"
#include "rseg/uncertainty.hpp"

namespace rseg {

// Weighted harmonic mean of (miou, 1-ece, p_ac, p_ui). Any zero-valued term
// with positive weight collapses the score to 0 (the harmonic-mean limit).
// Components outside [0,1] or invalid weights throw UsageError.
double compute_rss(double miou, double ece, double p_ac, double p_ui, const Weights& weights);

// Finalizes ECE and the conditionals, composes RSS, and cross-checks that the
// calibration and uncertainty accumulators counted the same pixels (throws
// ConsistencyError otherwise).
MetricReport assemble_report(const IoUResult& iou, const CalibrationBins& bins,
                             const UncertaintyCounts& counts, const Weights& weights,
                             RunMetadata metadata = {});

// Pairwise run deltas, shifted - baseline in each metric's native orientation.
struct RunComparison {
    MetricReport baseline;
    MetricReport shifted;
    double delta_miou = 0.0;
    double delta_ece = 0.0;
    double delta_p_acc_given_cer = 0.0;
    double delta_p_unc_given_inacc = 0.0;
    double delta_rss = 0.0;
    bool weights_mismatch = false;
    bool bins_mismatch = false;
};

RunComparison compare_runs(const MetricReport& baseline, const MetricReport& shifted);

// JSON document, schema_version 1. Numbers round-trip at full precision.
std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text); // throws LoadError on bad schema
MetricReport load_report(const std::filesystem::path& path);
void save_report(const MetricReport& report, const std::filesystem::path& path);

std::string comparison_to_json(const RunComparison& cmp);

// One header row plus one value row; spreadsheets take it from there.
std::string report_to_csv(const MetricReport& report);
// Rows metric,baseline,shifted,delta.
std::string comparison_to_csv(const RunComparison& cmp);

} // namespace rseg
