#include "rseg/segmentation.hpp"

#include <omp.h>

#include "rseg/kernels.hpp"

namespace rseg {

ConfusionMatrix accumulate_confusion(const ProbabilityMap& probs, const LabelMap& labels) {
    detail::check_paired_shapes(probs, labels);
    const int c = probs.num_classes();
    const int h = probs.height();
    const int w = probs.width();

    ConfusionMatrix cm(c);
    std::vector<int32_t> arg(w);
    std::vector<float> best(w);
    for (int y = 0; y < h; ++y) {
        detail::argmax_row(probs, y, arg.data(), best.data());
        const int32_t* lab = labels.row(y);
        for (int x = 0; x < w; ++x) {
            const int32_t g = lab[x];
            if (g == labels.ignore_index()) continue;
            detail::check_label_range(g, c, y, x);
            cm.add(g, arg[x]);
        }
    }
    return cm;
}

ConfusionMatrix accumulate_confusion_omp(const ProbabilityMap& probs, const LabelMap& labels) {
    detail::check_paired_shapes(probs, labels);
    const int c = probs.num_classes();
    const int h = probs.height();
    const int w = probs.width();

    ConfusionMatrix cm(c);
    #pragma omp parallel
    {
        ConfusionMatrix local(c);
        std::vector<int32_t> arg(w);
        std::vector<float> best(w);
        #pragma omp for schedule(static) nowait
        for (int y = 0; y < h; ++y) {
            detail::argmax_row(probs, y, arg.data(), best.data());
            const int32_t* lab = labels.row(y);
            for (int x = 0; x < w; ++x) {
                const int32_t g = lab[x];
                if (g == labels.ignore_index()) continue;
                detail::check_label_range(g, c, y, x);
                local.add(g, arg[x]);
            }
        }
        #pragma omp critical
        cm = merge_confusion(cm, local);
    }
    return cm;
}

IoUResult compute_iou(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw UsageError("no evaluated pixels");
    const int c = cm.num_classes();

    std::vector<std::uint64_t> row_sum(c, 0), col_sum(c, 0);
    for (int g = 0; g < c; ++g) {
        for (int p = 0; p < c; ++p) {
            row_sum[g] += cm.at(g, p);
            col_sum[p] += cm.at(g, p);
        }
    }

    IoUResult out;
    out.per_class.resize(c);
    double sum = 0.0;
    for (int i = 0; i < c; ++i) {
        const std::uint64_t tp = cm.at(i, i);
        const std::uint64_t fn = row_sum[i] - tp;
        const std::uint64_t fp = col_sum[i] - tp;
        const std::uint64_t denom = tp + fp + fn;
        if (denom == 0) continue; // class absent from both prediction and truth
        const double iou = static_cast<double>(tp) / static_cast<double>(denom);
        out.per_class[i] = iou;
        sum += iou;
        out.num_present_classes += 1;
    }
    out.miou = sum / out.num_present_classes;
    return out;
}

} // namespace rseg
