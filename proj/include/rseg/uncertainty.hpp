#pragma once

#include "rseg/core.hpp"

namespace rseg {

// Per-pixel Shannon entropy field in nats. Double precision so the ln(C)
// upper bound survives large class counts.
class UncertaintyMap {
public:
    UncertaintyMap(int height, int width);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * width_;
    }

    double at(int y, int x) const {
        return entropy_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int y, int x, double v) {
        entropy_[static_cast<std::size_t>(y) * width_ + x] = v;
    }
    double* row(int y) { return entropy_.data() + static_cast<std::size_t>(y) * width_; }
    const double* row(int y) const {
        return entropy_.data() + static_cast<std::size_t>(y) * width_;
    }

    const std::vector<double>& values() const { return entropy_; }

private:
    std::vector<double> entropy_;
    int height_;
    int width_;
};

// H = -sum_c p_c * ln(max(p_c, 1e-12)) for every pixel, ignored ones included
// (the per-image threshold needs the full field). Serial reference.
UncertaintyMap compute_entropy(const ProbabilityMap& probs);

// OpenMP row-parallel variant; bit-identical to the serial reference.
UncertaintyMap compute_entropy_omp(const ProbabilityMap& probs);

// Median entropy over the non-ignored pixels of this image. Even counts take
// the lower of the two middle values (exact, no interpolation). Throws
// UsageError("no evaluated pixels in image") if everything is ignored.
double median_threshold(const UncertaintyMap& umap, const LabelMap& labels);

// Tallies accurate/inaccurate x certain/uncertain per non-ignored pixel.
// certain <=> entropy < threshold (strict); uncertain <=> entropy >= threshold.
UncertaintyCounts accumulate_uncertainty(const ProbabilityMap& probs, const LabelMap& labels,
                                         const UncertaintyMap& umap, double threshold);

// Convenience overload that recomputes the entropy field.
UncertaintyCounts accumulate_uncertainty(const ProbabilityMap& probs, const LabelMap& labels,
                                         double threshold);

struct Conditionals {
    double p_acc_given_cer = 0.0;
    double p_unc_given_inacc = 0.0;
    bool degenerate_certain = false;    // no certain pixels: p(acc|cer) defined as 1
    bool degenerate_inaccurate = false; // no inaccurate pixels: p(unc|inacc) defined as 1
};

// p(acc|cer) = n_ac/(n_ac+n_ic); p(unc|inacc) = n_iu/(n_iu+n_ic). Zero
// denominators yield 1.0 with the matching degeneracy flag set.
Conditionals finalize_conditionals(const UncertaintyCounts& counts);

} // namespace rseg
