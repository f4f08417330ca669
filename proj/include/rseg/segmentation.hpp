#pragma once

#include "rseg/core.hpp"

namespace rseg {

// Per-class intersection-over-union. Classes with TP+FP+FN == 0 carry no
// entry and are excluded from the mean.
struct IoUResult {
    std::vector<std::optional<double>> per_class;
    double miou = 0.0;
    int num_present_classes = 0;
};

// Tallies counts[gt][argmax_c p_c] for every non-ignored pixel. Argmax ties
// break toward the lowest class index. Serial reference implementation.
ConfusionMatrix accumulate_confusion(const ProbabilityMap& probs, const LabelMap& labels);

// OpenMP row-parallel variant; bit-identical to the serial reference.
ConfusionMatrix accumulate_confusion_omp(const ProbabilityMap& probs, const LabelMap& labels);

// Per-class IoU_c = TP_c / (TP_c + FP_c + FN_c) and the mean over present
// classes. Throws UsageError("no evaluated pixels") on an empty matrix.
IoUResult compute_iou(const ConfusionMatrix& cm);

} // namespace rseg
