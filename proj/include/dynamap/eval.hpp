#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynamap/pipeline.hpp"

namespace dynamap {

/// Preservation / rejection rates over per-point final verdicts.
/// PR = % of ground-truth static points whose final verdict kept them;
/// RR = % of ground-truth dynamic points whose final verdict rejected them.
/// A rate is absent when its denominator is zero.
struct PrRrResult {
    int64_t preserved_static = 0;
    int64_t total_static = 0;
    int64_t rejected_dynamic = 0;
    int64_t total_dynamic = 0;
    std::optional<double> pr_percent;
    std::optional<double> rr_percent;
};

/// Scores final verdicts against ground truth. Points still undetermined at
/// scoring time count as static (they were never rejected and would time out
/// static). Throws InputError when a record lacks a ground-truth tag.
PrRrResult score(const std::vector<PointRecord> &records);

/// Per-stage mean milliseconds over a sweep-report stream, shaped like the
/// usual runtime-breakdown table: cloud processing, state estimation
/// (external to this artifact, reported absent), ground fitting, label
/// consistency detection, and their removal total.
struct TimingSummary {
    int64_t sweeps = 0;
    double cloud_processing_ms = 0.0;
    double ground_fitting_ms = 0.0;
    double detection_ms = 0.0;
    double removal_total_ms = 0.0;  // ground fitting + detection
    double map_update_ms = 0.0;
    double total_ms = 0.0;
};

TimingSummary timing_summary(const std::vector<SweepReport> &reports);

std::string render_pr_rr_table(const PrRrResult &result);
std::string render_timing_table(const TimingSummary &summary);

}  // namespace dynamap
