#include "rseg/calibration.hpp"

#include <cmath>
#include <ostream>

#include <omp.h>

#include "rseg/kernels.hpp"

namespace rseg {

CalibrationBins accumulate_bins(const ProbabilityMap& probs, const LabelMap& labels,
                                int num_bins) {
    detail::check_paired_shapes(probs, labels);
    const int h = probs.height();
    const int w = probs.width();

    CalibrationBins bins(num_bins);
    std::vector<int32_t> arg(w);
    std::vector<float> best(w);
    for (int y = 0; y < h; ++y) {
        detail::argmax_row(probs, y, arg.data(), best.data());
        const int32_t* lab = labels.row(y);
        for (int x = 0; x < w; ++x) {
            const int32_t g = lab[x];
            if (g == labels.ignore_index()) continue;
            detail::check_label_range(g, probs.num_classes(), y, x);
            bins.add(best[x], arg[x] == g);
        }
    }
    return bins;
}

CalibrationBins accumulate_bins_omp(const ProbabilityMap& probs, const LabelMap& labels,
                                    int num_bins) {
    detail::check_paired_shapes(probs, labels);
    const int h = probs.height();
    const int w = probs.width();

    CalibrationBins bins(num_bins);
    #pragma omp parallel
    {
        CalibrationBins local(num_bins);
        std::vector<int32_t> arg(w);
        std::vector<float> best(w);
        #pragma omp for schedule(static) nowait
        for (int y = 0; y < h; ++y) {
            detail::argmax_row(probs, y, arg.data(), best.data());
            const int32_t* lab = labels.row(y);
            for (int x = 0; x < w; ++x) {
                const int32_t g = lab[x];
                if (g == labels.ignore_index()) continue;
                detail::check_label_range(g, probs.num_classes(), y, x);
                local.add(best[x], arg[x] == g);
            }
        }
        #pragma omp critical
        bins = merge_bins(bins, local);
    }
    return bins;
}

double compute_ece(const CalibrationBins& bins) {
    const std::uint64_t n = bins.total_pixels();
    if (n == 0) throw UsageError("no evaluated pixels");

    long double sum = 0.0L;
    for (int m = 0; m < bins.num_bins(); ++m) {
        const std::uint64_t nm = bins.count(m);
        if (nm == 0) continue;
        const long double acc =
            static_cast<long double>(bins.sum_correct(m)) / static_cast<long double>(nm);
        const long double conf =
            std::ldexp(static_cast<long double>(bins.confidence_ticks_sum(m)),
                       -CalibrationBins::kConfidenceFractionBits) /
            static_cast<long double>(nm);
        sum += static_cast<long double>(nm) * std::fabs(acc - conf);
    }
    return static_cast<double>(sum / static_cast<long double>(n));
}

ReliabilityDiagram export_diagram(const CalibrationBins& bins) {
    if (bins.total_pixels() == 0) throw UsageError("no evaluated pixels");

    ReliabilityDiagram d;
    d.total_pixels = bins.total_pixels();
    const int m_count = bins.num_bins();
    d.bins.resize(m_count);
    for (int m = 0; m < m_count; ++m) {
        ReliabilityBin& b = d.bins[m];
        b.lower = static_cast<double>(m) / m_count;
        b.upper = static_cast<double>(m + 1) / m_count;
        b.count = bins.count(m);
        if (b.count > 0) {
            b.mean_confidence = bins.sum_confidence(m) / static_cast<double>(b.count);
            b.accuracy = static_cast<double>(bins.sum_correct(m)) / static_cast<double>(b.count);
        }
    }
    return d;
}

void write_diagram_csv(const ReliabilityDiagram& diagram, std::ostream& out) {
    out << "bin_lo,bin_hi,count,mean_conf,accuracy\n";
    char buf[128];
    for (const ReliabilityBin& b : diagram.bins) {
        if (b.count > 0) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%llu,%.17g,%.17g\n", b.lower, b.upper,
                          static_cast<unsigned long long>(b.count), *b.mean_confidence,
                          *b.accuracy);
        } else {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,0,,\n", b.lower, b.upper);
        }
        out << buf;
    }
}

} // namespace rseg
