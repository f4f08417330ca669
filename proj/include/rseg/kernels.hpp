#pragma once

// Row-level primitives shared by the metric kernels. The class-major (C,H,W)
// layout makes per-pixel class scans strided, so each primitive walks one row
// per class and keeps per-column state; every pixel sees classes in index
// order, which fixes argmax tie-breaking and entropy summation order.

#include <cmath>
#include <cstdint>
#include <string>

#include "rseg/core.hpp"

namespace rseg {

inline constexpr double kEntropyEpsilon = 1e-12;

namespace detail {

inline void check_paired_shapes(const ProbabilityMap& probs, const LabelMap& labels) {
    if (probs.height() != labels.height() || probs.width() != labels.width()) {
        throw UsageError("probability/label shape mismatch: (" +
                         std::to_string(probs.height()) + "x" + std::to_string(probs.width()) +
                         ") vs (" + std::to_string(labels.height()) + "x" +
                         std::to_string(labels.width()) + ")");
    }
}

inline void check_label_range(int32_t label, int num_classes, int y, int x) {
    if (label < 0 || label >= num_classes) {
        throw UsageError("label " + std::to_string(label) + " at pixel (" + std::to_string(y) +
                         ", " + std::to_string(x) + ") outside [0, " +
                         std::to_string(num_classes - 1) + "] and not the ignore index");
    }
}

// argmax and max probability for every column of row y. Ties break toward the
// lowest class index (strict > comparison).
inline void argmax_row(const ProbabilityMap& probs, int y, int32_t* arg, float* best) {
    const int w = probs.width();
    const float* p0 = probs.row(0, y);
    for (int x = 0; x < w; ++x) {
        arg[x] = 0;
        best[x] = p0[x];
    }
    for (int c = 1; c < probs.num_classes(); ++c) {
        const float* p = probs.row(c, y);
        for (int x = 0; x < w; ++x) {
            if (p[x] > best[x]) {
                best[x] = p[x];
                arg[x] = c;
            }
        }
    }
}

// Fused pass: argmax, max probability, and Shannon entropy (nats, double
// accumulation in class order) for every column of row y.
inline void argmax_entropy_row(const ProbabilityMap& probs, int y, int32_t* arg, float* best,
                               double* entropy) {
    const int w = probs.width();
    const float* p0 = probs.row(0, y);
    for (int x = 0; x < w; ++x) {
        arg[x] = 0;
        best[x] = p0[x];
        const double pv = p0[x];
        entropy[x] = -pv * std::log(std::max(pv, kEntropyEpsilon));
    }
    for (int c = 1; c < probs.num_classes(); ++c) {
        const float* p = probs.row(c, y);
        for (int x = 0; x < w; ++x) {
            const float pf = p[x];
            if (pf > best[x]) {
                best[x] = pf;
                arg[x] = c;
            }
            const double pv = pf;
            entropy[x] -= pv * std::log(std::max(pv, kEntropyEpsilon));
        }
    }
}

} // namespace detail

// Shannon entropy in nats of one probability vector; the scalar definition the
// row kernels replicate. Zero entries contribute zero.
template <typename T>
double entropy_nats(const T* p, std::size_t n) {
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pv = static_cast<double>(p[i]);
        h -= pv * std::log(std::max(pv, kEntropyEpsilon));
    }
    return h;
}

} // namespace rseg
