#pragma once

#include "sepcurv/cli/certify.hpp"
#include "sepcurv/cli/report.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sepcurv::cli {

/// Process exit codes. Every failure maps to exactly one of these.
enum ExitCode : int {
    kExitOk = 0,
    kExitCertifyFailed = 1,
    kExitInput = 2,    // usage, spec file, expression or I/O problem
    kExitGeometry = 3, // regularity, root bracketing or domain failure
    kExitMesh = 4,     // fewer than 3 valid mesh vertices
};

/// Too few surviving vertices for a mesh.
class MeshError : public Error {
public:
    using Error::Error;
};

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    unsigned threads = 1;
    ReportFormat format = ReportFormat::Json;
};

struct EvalOptions {
    std::string spec_path;
    /// n-1 tangent coordinates (the height is solved for) or all n coordinates.
    std::vector<double> point;
    /// 1-based coordinate indices; defaults to the first two tangent coordinates.
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    /// Target sectional curvature K; the residual is evaluated with K0 = 4K.
    std::optional<double> k_target;
};

inline constexpr double kFallbackConstancyTol = 1e-7;
inline constexpr const char* kTolEnvVar = "SEPCURV_TOL";

/// --tol, then the spec file, then SEPCURV_TOL, then 1e-7. Throws SpecError on a bad value.
double resolve_constancy_tol(std::optional<double> cli, std::optional<double> spec, const char* env_value);

struct ScanOutput {
    std::string report;
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> estimate;
};

/// Run a scan over already-read spec text and render the report. Throws on input errors.
ScanOutput run_scan(std::string_view spec_text, const GlobalOptions& global, std::string_view timestamp);

int cmd_eval(const GlobalOptions& global, const EvalOptions& options, std::ostream& out, std::ostream& err);
int cmd_scan(const GlobalOptions& global, const std::string& spec_path, const std::string& out_path,
             std::ostream& out, std::ostream& err);
int cmd_certify(const GlobalOptions& global, Suite suite, const std::vector<std::size_t>& dims, std::ostream& out,
                std::ostream& err);
int cmd_mesh(const GlobalOptions& global, const std::string& spec_path, const std::string& out_path,
             std::ostream& out, std::ostream& err);

/// The sidecar CSV path written next to a mesh.
std::string curvature_sidecar_path(const std::string& mesh_path);

} // namespace sepcurv::cli
