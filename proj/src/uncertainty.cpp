#include "rseg/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "rseg/kernels.hpp"

namespace rseg {

UncertaintyMap::UncertaintyMap(int height, int width) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) throw UsageError("UncertaintyMap dimensions must be positive");
    entropy_.assign(static_cast<std::size_t>(height) * width, 0.0);
}

UncertaintyMap compute_entropy(const ProbabilityMap& probs) {
    UncertaintyMap umap(probs.height(), probs.width());
    std::vector<int32_t> arg(probs.width());
    std::vector<float> best(probs.width());
    for (int y = 0; y < probs.height(); ++y) {
        detail::argmax_entropy_row(probs, y, arg.data(), best.data(), umap.row(y));
    }
    return umap;
}

UncertaintyMap compute_entropy_omp(const ProbabilityMap& probs) {
    UncertaintyMap umap(probs.height(), probs.width());
    #pragma omp parallel
    {
        std::vector<int32_t> arg(probs.width());
        std::vector<float> best(probs.width());
        #pragma omp for schedule(static)
        for (int y = 0; y < probs.height(); ++y) {
            detail::argmax_entropy_row(probs, y, arg.data(), best.data(), umap.row(y));
        }
    }
    return umap;
}

double median_threshold(const UncertaintyMap& umap, const LabelMap& labels) {
    if (umap.height() != labels.height() || umap.width() != labels.width()) {
        throw UsageError("entropy/label shape mismatch");
    }
    std::vector<double> values;
    values.reserve(umap.pixel_count());
    for (int y = 0; y < umap.height(); ++y) {
        const double* h = umap.row(y);
        const int32_t* lab = labels.row(y);
        for (int x = 0; x < umap.width(); ++x) {
            if (lab[x] != labels.ignore_index()) values.push_back(h[x]);
        }
    }
    if (values.empty()) throw UsageError("no evaluated pixels in image");
    // Lower-middle convention: element (n-1)/2 of the sorted sequence.
    const std::size_t k = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + k, values.end());
    return values[k];
}

UncertaintyCounts accumulate_uncertainty(const ProbabilityMap& probs, const LabelMap& labels,
                                         const UncertaintyMap& umap, double threshold) {
    detail::check_paired_shapes(probs, labels);
    if (umap.height() != labels.height() || umap.width() != labels.width()) {
        throw UsageError("entropy/label shape mismatch");
    }
    if (!std::isfinite(threshold) || threshold < 0.0) {
        throw UsageError("uncertainty threshold must be finite and >= 0");
    }

    UncertaintyCounts counts;
    std::vector<int32_t> arg(probs.width());
    std::vector<float> best(probs.width());
    for (int y = 0; y < probs.height(); ++y) {
        detail::argmax_row(probs, y, arg.data(), best.data());
        const int32_t* lab = labels.row(y);
        const double* h = umap.row(y);
        for (int x = 0; x < probs.width(); ++x) {
            const int32_t g = lab[x];
            if (g == labels.ignore_index()) continue;
            detail::check_label_range(g, probs.num_classes(), y, x);
            const bool accurate = arg[x] == g;
            const bool certain = h[x] < threshold;
            if (accurate) {
                (certain ? counts.n_ac : counts.n_au) += 1;
            } else {
                (certain ? counts.n_ic : counts.n_iu) += 1;
            }
        }
    }
    return counts;
}

UncertaintyCounts accumulate_uncertainty(const ProbabilityMap& probs, const LabelMap& labels,
                                         double threshold) {
    return accumulate_uncertainty(probs, labels, compute_entropy(probs), threshold);
}

Conditionals finalize_conditionals(const UncertaintyCounts& counts) {
    Conditionals c;
    const std::uint64_t certain = counts.n_ac + counts.n_ic;
    const std::uint64_t inaccurate = counts.n_iu + counts.n_ic;
    if (certain == 0) {
        c.p_acc_given_cer = 1.0;
        c.degenerate_certain = true;
    } else {
        c.p_acc_given_cer = static_cast<double>(counts.n_ac) / static_cast<double>(certain);
    }
    if (inaccurate == 0) {
        c.p_unc_given_inacc = 1.0;
        c.degenerate_inaccurate = true;
    } else {
        c.p_unc_given_inacc = static_cast<double>(counts.n_iu) / static_cast<double>(inaccurate);
    }
    return c;
}

} // namespace rseg
