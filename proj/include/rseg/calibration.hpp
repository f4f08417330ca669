#pragma once

#include <iosfwd>

#include "rseg/core.hpp"

namespace rseg {

struct ReliabilityBin {
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t count = 0;
    std::optional<double> mean_confidence; // absent for empty bins
    std::optional<double> accuracy;        // absent for empty bins
};

// Per-bin confidence/accuracy table backing the ECE number.
struct ReliabilityDiagram {
    std::vector<ReliabilityBin> bins;
    std::uint64_t total_pixels = 0;
};

// Bins every non-ignored pixel by max-softmax confidence. Serial reference.
CalibrationBins accumulate_bins(const ProbabilityMap& probs, const LabelMap& labels,
                                int num_bins);

// OpenMP row-parallel variant; bit-identical to the serial reference.
CalibrationBins accumulate_bins_omp(const ProbabilityMap& probs, const LabelMap& labels,
                                    int num_bins);

// ECE = sum_m (|B_m|/N) * |acc(B_m) - conf(B_m)|; empty bins contribute 0.
// Throws UsageError("no evaluated pixels") when total_pixels == 0.
double compute_ece(const CalibrationBins& bins);

ReliabilityDiagram export_diagram(const CalibrationBins& bins);

// CSV columns: bin_lo, bin_hi, count, mean_conf, accuracy. Empty bins are
// emitted with count 0 and empty stat fields.
void write_diagram_csv(const ReliabilityDiagram& diagram, std::ostream& out);

} // namespace rseg
