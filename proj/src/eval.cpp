#include "dynamap/eval.hpp"

#include <cstdio>
#include <sstream>

#include "dynamap/errors.hpp"

namespace dynamap {

PrRrResult score(const std::vector<PointRecord> &records) {
    PrRrResult result;
    for (const auto &record : records) {
        if (record.gt_dynamic < 0) {
            throw InputError("point record (sweep " + std::to_string(record.sweep) + ", index " +
                             std::to_string(record.source_index) + ") has no ground-truth tag");
        }
        // Unresolved undetermined points were never rejected; score them static.
        const bool verdict_dynamic = record.verdict == PointClass::Dynamic;
        if (record.gt_dynamic == 1) {
            ++result.total_dynamic;
            if (verdict_dynamic) ++result.rejected_dynamic;
        } else {
            ++result.total_static;
            if (!verdict_dynamic) ++result.preserved_static;
        }
    }
    if (result.total_static > 0) {
        result.pr_percent = 100.0 * static_cast<double>(result.preserved_static) /
                            static_cast<double>(result.total_static);
    }
    if (result.total_dynamic > 0) {
        result.rr_percent = 100.0 * static_cast<double>(result.rejected_dynamic) /
                            static_cast<double>(result.total_dynamic);
    }
    return result;
}

TimingSummary timing_summary(const std::vector<SweepReport> &reports) {
    if (reports.empty()) throw InputError("timing summary needs at least one sweep report");
    TimingSummary summary;
    summary.sweeps = static_cast<int64_t>(reports.size());
    for (const auto &report : reports) {
        summary.cloud_processing_ms += report.timings.cloud_processing_ms;
        summary.ground_fitting_ms += report.timings.ground_fitting_ms;
        summary.detection_ms += report.timings.detection_ms;
        summary.map_update_ms += report.timings.map_update_ms;
        summary.total_ms += report.timings.total_ms;
    }
    const double n = static_cast<double>(summary.sweeps);
    summary.cloud_processing_ms /= n;
    summary.ground_fitting_ms /= n;
    summary.detection_ms /= n;
    summary.map_update_ms /= n;
    summary.total_ms /= n;
    summary.removal_total_ms = summary.ground_fitting_ms + summary.detection_ms;
    return summary;
}

std::string render_pr_rr_table(const PrRrResult &result) {
    std::ostringstream out;
    char line[160];
    out << "metric               count                 rate\n";
    std::snprintf(line, sizeof(line), "preserved static  %8lld / %-8lld  %s\n",
                  static_cast<long long>(result.preserved_static),
                  static_cast<long long>(result.total_static),
                  result.pr_percent ? (std::to_string(*result.pr_percent) + " %").c_str() : "n/a");
    out << line;
    std::snprintf(line, sizeof(line), "rejected dynamic  %8lld / %-8lld  %s\n",
                  static_cast<long long>(result.rejected_dynamic),
                  static_cast<long long>(result.total_dynamic),
                  result.rr_percent ? (std::to_string(*result.rr_percent) + " %").c_str() : "n/a");
    out << line;
    return out.str();
}

std::string render_timing_table(const TimingSummary &summary) {
    std::ostringstream out;
    char line[200];
    out << "stage                          mean ms\n";
    std::snprintf(line, sizeof(line), "cloud processing              %8.3f\n", summary.cloud_processing_ms);
    out << line;
    out << "state estimation              external\n";
    std::snprintf(line, sizeof(line), "ground fitting                %8.3f\n", summary.ground_fitting_ms);
    out << line;
    std::snprintf(line, sizeof(line), "label consistency detection   %8.3f\n", summary.detection_ms);
    out << line;
    std::snprintf(line, sizeof(line), "dynamic removal total         %8.3f\n", summary.removal_total_ms);
    out << line;
    std::snprintf(line, sizeof(line), "map update                    %8.3f\n", summary.map_update_ms);
    out << line;
    std::snprintf(line, sizeof(line), "sweep total                   %8.3f\n", summary.total_ms);
    out << line;
    out << "(over " << summary.sweeps << " sweeps)\n";
    return out.str();
}

}  // namespace dynamap
