#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sepcurv::cli {

enum class Suite { Flat, Constant };

std::optional<Suite> parse_suite(std::string_view name);
std::string to_string(Suite suite);

struct CertifyOptions {
    std::vector<std::size_t> dims{4, 5, 6};
    std::size_t points = 100;
    /// Random oblique planes per point for the hypersphere rows.
    std::size_t oblique_planes = 20;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    /// Bound on |K - K_expected| and on the spread for the certified families.
    double tol = 1e-9;
    /// Controls must show a spread above this.
    double control_spread = 1e-3;
};

struct CertifyRow {
    std::string subject;
    std::size_t n = 0;
    std::string expectation;
    std::string observed;
    bool pass = false;
};

struct CertifyResult {
    Suite suite = Suite::Flat;
    std::vector<CertifyRow> rows;

    bool all_passed() const;
};

/// Flat: hyperplane, parabolic cylinder and Cobb-Douglas-sqrt must be flat on every coordinate
/// pair; a perturbed Cobb-Douglas and the exponential surface must not be constant.
/// Constant: hyperspheres of radius 0.5, 1, 2, 3 must have K = 1/r^2 on coordinate and oblique
/// planes; Cobb-Douglas-sqrt must fail every nonzero-K0 residual; the exponential surface must
/// not be constant.
CertifyResult run_certify(Suite suite, const CertifyOptions& options);

std::string render_certify_table(const CertifyResult& result);

} // namespace sepcurv::cli
