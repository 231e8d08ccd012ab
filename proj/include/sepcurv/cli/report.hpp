#pragma once

#include "sepcurv/cli/spec_file.hpp"
#include "sepcurv/curvature.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sepcurv::cli {

inline constexpr int kReportFormatVersion = 1;
inline constexpr std::string_view kToolName = "sepcurv";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class ReportFormat { Json, Csv };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// "sha256:<hex>" of the raw bytes.
std::string input_digest(std::string_view text);

/// Current UTC time as ISO 8601, second resolution.
std::string utc_timestamp();

struct ScanRun {
    std::string digest;
    const SurfaceSpec* spec = nullptr;
    ScanPolicy policy;
    std::size_t requested = 0;
    std::size_t rejected = 0;
    CurvatureReport report;
};

/// Full report: one header line carrying the timestamp, then the body.
std::string render_scan_report(const ScanRun& run, ReportFormat format, std::string_view timestamp);

/// Everything after the header line.
std::string report_body(std::string_view report);

/// The input_digest recorded in a report body of either format; empty if absent.
std::string extract_digest(std::string_view report);

/// A single evaluated sample, printed by `eval`.
std::string render_sample(const CurvatureSample& sample, const SurfacePoint& point, ReportFormat format);

} // namespace sepcurv::cli
