#include "rseg/core.hpp"

#include <cmath>

namespace rseg {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

} // namespace

ProbabilityMap::ProbabilityMap(int num_classes, int height, int width)
    : num_classes_(num_classes), height_(height), width_(width) {
    require(num_classes >= 2, "ProbabilityMap requires at least 2 classes, got " +
                                  std::to_string(num_classes));
    require(height > 0 && width > 0, "ProbabilityMap dimensions must be positive");
    values_.assign(static_cast<std::size_t>(num_classes) * height * width, 0.0f);
}

LabelMap::LabelMap(int height, int width, int ignore_index)
    : height_(height), width_(width), ignore_index_(ignore_index) {
    require(height > 0 && width > 0, "LabelMap dimensions must be positive");
    labels_.assign(static_cast<std::size_t>(height) * width, ignore_index);
}

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
    require(num_classes >= 2, "ConfusionMatrix requires at least 2 classes");
    counts_.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
}

ConfusionMatrix merge_confusion(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    if (a.num_classes() != b.num_classes()) {
        throw UsageError("merge_confusion: class count mismatch (" +
                         std::to_string(a.num_classes()) + " vs " +
                         std::to_string(b.num_classes()) + ")");
    }
    ConfusionMatrix out = a;
    const int c = b.num_classes();
    for (int g = 0; g < c; ++g) {
        for (int p = 0; p < c; ++p) {
            if (std::uint64_t n = b.at(g, p); n != 0) out.add(g, p, n);
        }
    }
    return out;
}

CalibrationBins::CalibrationBins(int num_bins) : num_bins_(num_bins) {
    require(num_bins >= 1, "CalibrationBins requires at least 1 bin");
    count_.assign(num_bins, 0);
    sum_correct_.assign(num_bins, 0);
    conf_ticks_.assign(num_bins, 0);
}

int CalibrationBins::bin_index(float confidence) const {
    int b = static_cast<int>(static_cast<double>(confidence) * num_bins_);
    if (b >= num_bins_) b = num_bins_ - 1; // conf == 1.0 lands in the last bin
    if (b < 0) b = 0;
    return b;
}

std::uint64_t CalibrationBins::confidence_ticks(float confidence) {
    // Scaling by 2^56 is exact in binary floating point; the result is an
    // integer whenever confidence >= 2^-32 (true for any valid max-softmax).
    return static_cast<std::uint64_t>(
        std::llround(std::ldexp(static_cast<double>(confidence), kConfidenceFractionBits)));
}

void CalibrationBins::add(float confidence, bool correct) {
    const int b = bin_index(confidence);
    count_[b] += 1;
    sum_correct_[b] += correct ? 1 : 0;
    conf_ticks_[b] += confidence_ticks(confidence);
    total_ += 1;
}

double CalibrationBins::sum_confidence(int m) const {
    return static_cast<double>(
        std::ldexp(static_cast<long double>(conf_ticks_[m]), -kConfidenceFractionBits));
}

CalibrationBins merge_bins(const CalibrationBins& a, const CalibrationBins& b) {
    if (a.num_bins() != b.num_bins()) {
        throw UsageError("merge_bins: bin count mismatch (" + std::to_string(a.num_bins()) +
                         " vs " + std::to_string(b.num_bins()) + ")");
    }
    CalibrationBins out = a;
    for (int m = 0; m < b.num_bins(); ++m) {
        out.count_[m] += b.count_[m];
        out.sum_correct_[m] += b.sum_correct_[m];
        out.conf_ticks_[m] += b.conf_ticks_[m];
    }
    out.total_ += b.total_;
    return out;
}

UncertaintyCounts merge_uncertainty(const UncertaintyCounts& a, const UncertaintyCounts& b) {
    return UncertaintyCounts{a.n_ac + b.n_ac, a.n_ic + b.n_ic, a.n_iu + b.n_iu,
                             a.n_au + b.n_au};
}

void Weights::validate() const {
    const double w[4] = {miou, ece, p_acc_given_cer, p_unc_given_inacc};
    bool any_positive = false;
    for (double v : w) {
        if (!std::isfinite(v)) throw UsageError("weights must be finite");
        if (v < 0.0) throw UsageError("weights must be non-negative");
        if (v > 0.0) any_positive = true;
    }
    if (!any_positive) throw UsageError("at least one weight must be positive");
}

} // namespace rseg
