#include "rseg/score.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rseg {

namespace {

constexpr int kSchemaVersion = 1;

void check_component(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw UsageError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

} // namespace

double compute_rss(double miou, double ece, double p_ac, double p_ui, const Weights& weights) {
    check_component(miou, "miou");
    check_component(ece, "ece");
    check_component(p_ac, "p(acc|cer)");
    check_component(p_ui, "p(unc|inacc)");
    weights.validate();

    const double terms[4] = {miou, 1.0 - ece, p_ac, p_ui};
    const double w[4] = {weights.miou, weights.ece, weights.p_acc_given_cer,
                         weights.p_unc_given_inacc};

    double denom = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (w[i] == 0.0) continue;
        if (terms[i] == 0.0) return 0.0;
        denom += w[i] / terms[i];
    }
    return weights.sum() / denom;
}

MetricReport assemble_report(const IoUResult& iou, const CalibrationBins& bins,
                             const UncertaintyCounts& counts, const Weights& weights,
                             RunMetadata metadata) {
    if (bins.total_pixels() != counts.total()) {
        throw ConsistencyError("accumulator pixel counts disagree: calibration bins counted " +
                               std::to_string(bins.total_pixels()) +
                               " pixels, uncertainty counts " + std::to_string(counts.total()));
    }

    MetricReport r;
    r.miou = iou.miou;
    r.ece = compute_ece(bins);
    const Conditionals cond = finalize_conditionals(counts);
    r.p_acc_given_cer = cond.p_acc_given_cer;
    r.p_unc_given_inacc = cond.p_unc_given_inacc;
    r.degenerate_p_acc_given_cer = cond.degenerate_certain;
    r.degenerate_p_unc_given_inacc = cond.degenerate_inaccurate;
    r.rss = compute_rss(r.miou, r.ece, r.p_acc_given_cer, r.p_unc_given_inacc, weights);
    r.weights = weights;
    r.num_bins = bins.num_bins();
    r.per_class_iou = iou.per_class;
    r.pixel_count = bins.total_pixels();
    r.metadata = std::move(metadata);
    return r;
}

RunComparison compare_runs(const MetricReport& baseline, const MetricReport& shifted) {
    RunComparison c;
    c.baseline = baseline;
    c.shifted = shifted;
    c.delta_miou = shifted.miou - baseline.miou;
    c.delta_ece = shifted.ece - baseline.ece;
    c.delta_p_acc_given_cer = shifted.p_acc_given_cer - baseline.p_acc_given_cer;
    c.delta_p_unc_given_inacc = shifted.p_unc_given_inacc - baseline.p_unc_given_inacc;
    c.delta_rss = shifted.rss - baseline.rss;
    c.weights_mismatch = !(baseline.weights == shifted.weights);
    c.bins_mismatch = baseline.num_bins != shifted.num_bins;
    return c;
}

namespace {

nlohmann::json report_json(const MetricReport& r) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& v : r.per_class_iou) {
        if (v) {
            per_class.push_back(*v);
        } else {
            per_class.push_back(nullptr);
        }
    }
    return nlohmann::json{
        {"schema_version", kSchemaVersion},
        {"components",
         {{"miou", r.miou},
          {"ece", r.ece},
          {"p_acc_given_cer", r.p_acc_given_cer},
          {"p_unc_given_inacc", r.p_unc_given_inacc}}},
        {"rss", r.rss},
        {"weights",
         {{"miou", r.weights.miou},
          {"ece", r.weights.ece},
          {"p_acc_given_cer", r.weights.p_acc_given_cer},
          {"p_unc_given_inacc", r.weights.p_unc_given_inacc}}},
        {"num_bins", r.num_bins},
        {"per_class_iou", per_class},
        {"flags",
         {{"degenerate_p_acc_given_cer", r.degenerate_p_acc_given_cer},
          {"degenerate_p_unc_given_inacc", r.degenerate_p_unc_given_inacc}}},
        {"pixel_count", r.pixel_count},
        {"metadata",
         {{"name", r.metadata.name},
          {"manifest", r.metadata.manifest_path},
          {"timestamp", r.metadata.timestamp}}},
    };
}

MetricReport report_from(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
            throw LoadError("unsupported report schema_version " +
                            j.at("schema_version").dump());
        }
        MetricReport r;
        const auto& comp = j.at("components");
        r.miou = comp.at("miou").get<double>();
        r.ece = comp.at("ece").get<double>();
        r.p_acc_given_cer = comp.at("p_acc_given_cer").get<double>();
        r.p_unc_given_inacc = comp.at("p_unc_given_inacc").get<double>();
        r.rss = j.at("rss").get<double>();
        const auto& w = j.at("weights");
        r.weights.miou = w.at("miou").get<double>();
        r.weights.ece = w.at("ece").get<double>();
        r.weights.p_acc_given_cer = w.at("p_acc_given_cer").get<double>();
        r.weights.p_unc_given_inacc = w.at("p_unc_given_inacc").get<double>();
        r.num_bins = j.at("num_bins").get<int>();
        for (const auto& v : j.at("per_class_iou")) {
            if (v.is_null()) {
                r.per_class_iou.emplace_back(std::nullopt);
            } else {
                r.per_class_iou.emplace_back(v.get<double>());
            }
        }
        const auto& flags = j.at("flags");
        r.degenerate_p_acc_given_cer = flags.at("degenerate_p_acc_given_cer").get<bool>();
        r.degenerate_p_unc_given_inacc = flags.at("degenerate_p_unc_given_inacc").get<bool>();
        r.pixel_count = j.at("pixel_count").get<std::uint64_t>();
        const auto& md = j.at("metadata");
        r.metadata.name = md.at("name").get<std::string>();
        r.metadata.manifest_path = md.at("manifest").get<std::string>();
        r.metadata.timestamp = md.at("timestamp").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("report does not match schema: ") + e.what());
    }
}

} // namespace

std::string report_to_json(const MetricReport& report) {
    return report_json(report).dump(2) + "\n";
}

MetricReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(std::string("invalid report JSON: ") + e.what());
    }
    return report_from(j);
}

MetricReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open report file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return report_from_json(buf.str());
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

void save_report(const MetricReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot write report file: " + path.string());
    out << report_to_json(report);
}

std::string comparison_to_json(const RunComparison& cmp) {
    nlohmann::json j{
        {"schema_version", kSchemaVersion},
        {"baseline", report_json(cmp.baseline)},
        {"shifted", report_json(cmp.shifted)},
        {"deltas",
         {{"miou", cmp.delta_miou},
          {"ece", cmp.delta_ece},
          {"p_acc_given_cer", cmp.delta_p_acc_given_cer},
          {"p_unc_given_inacc", cmp.delta_p_unc_given_inacc},
          {"rss", cmp.delta_rss}}},
        {"warnings",
         {{"weights_mismatch", cmp.weights_mismatch}, {"bins_mismatch", cmp.bins_mismatch}}},
    };
    return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricReport& report) {
    std::ostringstream out;
    out << "miou,ece,p_acc_given_cer,p_unc_given_inacc,rss,pixel_count\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%llu\n", report.miou,
                  report.ece, report.p_acc_given_cer, report.p_unc_given_inacc, report.rss,
                  static_cast<unsigned long long>(report.pixel_count));
    out << buf;
    return out.str();
}

std::string comparison_to_csv(const RunComparison& cmp) {
    std::ostringstream out;
    out << "metric,baseline,shifted,delta\n";
    const struct {
        const char* name;
        double base, shift, delta;
    } rows[] = {
        {"miou", cmp.baseline.miou, cmp.shifted.miou, cmp.delta_miou},
        {"ece", cmp.baseline.ece, cmp.shifted.ece, cmp.delta_ece},
        {"p_acc_given_cer", cmp.baseline.p_acc_given_cer, cmp.shifted.p_acc_given_cer,
         cmp.delta_p_acc_given_cer},
        {"p_unc_given_inacc", cmp.baseline.p_unc_given_inacc, cmp.shifted.p_unc_given_inacc,
         cmp.delta_p_unc_given_inacc},
        {"rss", cmp.baseline.rss, cmp.shifted.rss, cmp.delta_rss},
    };
    char buf[256];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", row.name, row.base, row.shift,
                      row.delta);
        out << buf;
    }
    return out.str();
}

} // namespace rseg
