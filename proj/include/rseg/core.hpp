#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rseg/errors.hpp"

namespace rseg {

using u128 = unsigned __int128;

// Per-pixel class probability field for one image, class-major (C, H, W),
// C-contiguous. Values are float32 to match the on-disk container.
class ProbabilityMap {
public:
    ProbabilityMap(int num_classes, int height, int width);

    int num_classes() const { return num_classes_; }
    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }

    float at(int c, int y, int x) const {
        return values_[index(c, y, x)];
    }
    void set(int c, int y, int x, float v) {
        values_[index(c, y, x)] = v;
    }

    // Pointer to the start of (class c, row y); W contiguous floats.
    const float* row(int c, int y) const {
        return values_.data() + index(c, y, 0);
    }
    float* row(int c, int y) {
        return values_.data() + index(c, y, 0);
    }

    const std::vector<float>& values() const { return values_; }
    std::vector<float>& values() { return values_; }

private:
    std::size_t index(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
    }

    std::vector<float> values_;
    int num_classes_;
    int height_;
    int width_;
};

// Per-pixel ground-truth class indices with an ignore sentinel.
class LabelMap {
public:
    static constexpr int kDefaultIgnoreIndex = 255;

    LabelMap(int height, int width, int ignore_index = kDefaultIgnoreIndex);

    int height() const { return height_; }
    int width() const { return width_; }
    int ignore_index() const { return ignore_index_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }

    int32_t at(int y, int x) const {
        return labels_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int y, int x, int32_t v) {
        labels_[static_cast<std::size_t>(y) * width_ + x] = v;
    }
    bool ignored(int y, int x) const { return at(y, x) == ignore_index_; }

    const int32_t* row(int y) const {
        return labels_.data() + static_cast<std::size_t>(y) * width_;
    }

private:
    std::vector<int32_t> labels_;
    int height_;
    int width_;
    int ignore_index_;
};

// C x C pixel tally, entry (gt, pred). Merge is entrywise sum, so any parallel
// fold order produces the same matrix.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int num_classes);

    int num_classes() const { return num_classes_; }
    std::uint64_t total() const { return total_; }

    std::uint64_t at(int gt, int pred) const {
        return counts_[static_cast<std::size_t>(gt) * num_classes_ + pred];
    }
    void add(int gt, int pred, std::uint64_t n = 1) {
        counts_[static_cast<std::size_t>(gt) * num_classes_ + pred] += n;
        total_ += n;
    }

    bool operator==(const ConfusionMatrix& other) const = default;

private:
    std::vector<std::uint64_t> counts_;
    int num_classes_;
    std::uint64_t total_ = 0;
};

ConfusionMatrix merge_confusion(const ConfusionMatrix& a, const ConfusionMatrix& b);

// Equal-width confidence bins over [0,1]: intervals [m/M, (m+1)/M), last bin
// closed at 1.0. Confidence sums are held as exact 2^-56 fixed-point integers:
// any float32 confidence >= 2^-32 converts without rounding, which keeps every
// accumulator field an exact integer and makes merge order irrelevant down to
// the last bit of the final metrics.
class CalibrationBins {
public:
    static constexpr int kConfidenceFractionBits = 56;

    explicit CalibrationBins(int num_bins = 15);

    int num_bins() const { return num_bins_; }
    std::uint64_t total_pixels() const { return total_; }

    void add(float confidence, bool correct);

    std::uint64_t count(int m) const { return count_[m]; }
    std::uint64_t sum_correct(int m) const { return sum_correct_[m]; }
    u128 confidence_ticks_sum(int m) const { return conf_ticks_[m]; }
    double sum_confidence(int m) const;

    // Exact fixed-point encoding of one confidence value.
    static std::uint64_t confidence_ticks(float confidence);

    int bin_index(float confidence) const;

    bool operator==(const CalibrationBins& other) const = default;

    friend CalibrationBins merge_bins(const CalibrationBins& a, const CalibrationBins& b);

private:
    std::vector<std::uint64_t> count_;
    std::vector<std::uint64_t> sum_correct_;
    std::vector<u128> conf_ticks_;
    std::uint64_t total_ = 0;
    int num_bins_;
};

CalibrationBins merge_bins(const CalibrationBins& a, const CalibrationBins& b);

// Accurate/inaccurate x certain/uncertain pixel tallies. n_au is tracked even
// though the conditionals never read it, so the four categories partition the
// evaluated pixels and conservation stays testable.
struct UncertaintyCounts {
    std::uint64_t n_ac = 0; // accurate and certain
    std::uint64_t n_ic = 0; // inaccurate and certain
    std::uint64_t n_iu = 0; // inaccurate and uncertain
    std::uint64_t n_au = 0; // accurate and uncertain

    std::uint64_t total() const { return n_ac + n_ic + n_iu + n_au; }

    bool operator==(const UncertaintyCounts&) const = default;
};

UncertaintyCounts merge_uncertainty(const UncertaintyCounts& a, const UncertaintyCounts& b);

// Component weights for the composite score. All finite and non-negative,
// at least one strictly positive.
struct Weights {
    double miou = 1.0;
    double ece = 1.0;
    double p_acc_given_cer = 1.0;
    double p_unc_given_inacc = 1.0;

    double sum() const { return miou + ece + p_acc_given_cer + p_unc_given_inacc; }
    void validate() const; // throws UsageError

    bool operator==(const Weights&) const = default;
};

struct RunMetadata {
    std::string name;
    std::string manifest_path;
    std::string timestamp;
};

// Finalized metrics for one evaluation run. rss is always recomputable
// bit-for-bit from the stored components and weights.
struct MetricReport {
    double miou = 0.0;
    double ece = 0.0;
    double p_acc_given_cer = 0.0;
    double p_unc_given_inacc = 0.0;
    double rss = 0.0;
    Weights weights;
    int num_bins = 15;
    std::vector<std::optional<double>> per_class_iou;
    std::uint64_t pixel_count = 0;
    bool degenerate_p_acc_given_cer = false;
    bool degenerate_p_unc_given_inacc = false;
    RunMetadata metadata;
};

} // namespace rseg
