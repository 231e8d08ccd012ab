#pragma once

#include "sepcurv/error.hpp"
#include "sepcurv/families.hpp"
#include "sepcurv/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sepcurv::cli {

inline constexpr int kSpecFormatVersion = 1;

/// Problem in a surface-spec file; `line` is 1-based, 0 when not tied to a line.
class SpecError : public Error {
public:
    SpecError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct FunctionEntry {
    std::string expr;
    Interval domain;
};

/// In-memory form of a surface-spec file. Coordinates are 0-based here; the file uses 1-based.
struct SurfaceSpec {
    int format_version = kSpecFormatVersion;
    std::size_t n = 0;
    std::size_t height = 0;
    std::optional<FamilySpec> family;
    std::vector<FunctionEntry> functions;
    SeparableSurface surface;
    SamplingBox box;

    bool has_sampling = false;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    std::size_t planes = 0;

    std::optional<double> constancy_tol{};
    std::optional<double> equivalence_tol{};
    /// Target sectional curvature for the constant-curvature residual.
    std::optional<double> k_target{};
    std::optional<std::pair<std::size_t, std::size_t>> mesh_grid{};
};

/// Parse the line-oriented `key = value` spec format. Throws SpecError.
SurfaceSpec parse_surface_spec(std::string_view text);

/// Read and parse a file. Throws SpecError (also for unreadable files).
SurfaceSpec load_surface_spec(const std::string& path, std::string* raw_text = nullptr);

} // namespace sepcurv::cli
