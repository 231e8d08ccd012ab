#include "sepcurv/cli/certify.hpp"

#include "sepcurv/curvature.hpp"
#include "sepcurv/families.hpp"
#include "sepcurv/random.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace sepcurv::cli {

std::optional<Suite> parse_suite(std::string_view name)
{
    if (name == "flat") {
        return Suite::Flat;
    }
    if (name == "constant") {
        return Suite::Constant;
    }
    return std::nullopt;
}

std::string to_string(Suite suite)
{
    return suite == Suite::Flat ? "flat" : "constant";
}

bool CertifyResult::all_passed() const
{
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const CertifyRow& r) { return r.pass; });
}

namespace {

std::string sci(double v)
{
    std::ostringstream out;
    out << std::setprecision(3) << std::scientific << v;
    return out.str();
}

struct Scan {
    CurvatureReport report;
    std::size_t accepted = 0;
};

Scan scan(const SeparableSurface& s, const SamplingBox& box, const CertifyOptions& opt, std::size_t planes,
          std::uint64_t stream)
{
    const std::uint64_t seed = derive_seed(opt.seed, stream);
    const auto set = sample_surface(s, box, opt.points, seed);
    ScanPolicy policy;
    policy.oblique_planes = planes;
    policy.seed = seed;
    policy.constancy_tol = opt.tol;
    policy.threads = opt.threads;
    return {scan_constancy(s, set.points, policy), set.points.size()};
}

CertifyRow expect_constant(std::string subject, std::size_t n, const SeparableSurface& s, const SamplingBox& box,
                           double expected, std::size_t planes, const CertifyOptions& opt, std::uint64_t stream)
{
    CertifyRow row{std::move(subject), n, "K = " + format_real(expected), {}, false};
    const Scan sc = scan(s, box, opt, planes, stream);
    const auto& r = sc.report;
    const double dev = std::max(std::abs(r.min - expected), std::abs(r.max - expected));
    std::ostringstream obs;
    obs << "points=" << sc.accepted << " samples=" << r.count << " max|K-K*|=" << sci(dev)
        << " spread=" << sci(r.spread);
    if (!r.failures.empty()) {
        obs << " failures=" << r.failures.size();
    }
    row.observed = obs.str();
    row.pass = sc.accepted == opt.points && r.failures.empty() && r.count > 0 && dev <= opt.tol &&
               r.spread <= opt.tol && r.verdict == Verdict::Constant;
    return row;
}

CertifyRow expect_nonconstant(std::string subject, std::size_t n, const SeparableSurface& s, const SamplingBox& box,
                              const CertifyOptions& opt, std::uint64_t stream)
{
    CertifyRow row{std::move(subject), n, "non-constant", {}, false};
    const Scan sc = scan(s, box, opt, 0, stream);
    const auto& r = sc.report;
    row.observed = "points=" + std::to_string(sc.accepted) + " spread=" + sci(r.spread) + " verdict=" +
                   to_string(r.verdict);
    row.pass = sc.accepted > 1 && r.verdict == Verdict::NonConstant && r.spread > opt.control_spread;
    return row;
}

CertifyRow expect_constk_failure(std::size_t n, const CertifyOptions& opt, std::uint64_t stream)
{
    const FamilySpec spec = CobbDouglasSqrtSpec{1.5, n, {}};
    const auto s = make_family(spec);
    CertifyRow row{"cobb_douglas_sqrt (control)", n, "fails every K != 0", {}, false};
    const auto set = sample_surface(s, default_sampling_box(spec), opt.points, derive_seed(opt.seed, stream));
    const auto& tangent = s.tangent_indices();
    std::size_t tests = 0;
    std::size_t failed = 0;
    double smallest = INFINITY;
    for (const double k0 : {-4.0, -1.0, 0.25, 1.0, 4.0}) {
        for (const auto& p : set.points) {
            for (std::size_t a = 0; a < tangent.size(); ++a) {
                for (std::size_t b = a + 1; b < tangent.size(); ++b) {
                    const double res = std::abs(constk_residual(s, p, tangent[a], tangent[b], k0));
                    ++tests;
                    smallest = std::min(smallest, res);
                    failed += res > 1e-6 ? 1 : 0;
                }
            }
        }
    }
    row.observed = "nonzero residuals " + std::to_string(failed) + "/" + std::to_string(tests) + " min|R|=" +
                   sci(smallest);
    row.pass = tests > 0 && failed == tests;
    return row;
}

SeparableSurface exp_surface(std::size_t n)
{
    std::vector<Function1D> f(n - 1, parse_function("exp(x)"));
    f.push_back(parse_function("exp(x) - " + std::to_string(n + 1)));
    return SeparableSurface(std::move(f));
}

SamplingBox exp_box(std::size_t n)
{
    return {std::vector<Interval>(n - 1, Interval{-1.0, 0.0}), {0.0, std::log(static_cast<double>(n + 2))}};
}

} // namespace

CertifyResult run_certify(Suite suite, const CertifyOptions& opt)
{
    CertifyResult result{suite, {}};
    std::uint64_t stream = 0;
    for (const std::size_t n : opt.dims) {
        if (suite == Suite::Flat) {
            std::vector<double> coeffs;
            for (std::size_t k = 0; k < n; ++k) {
                coeffs.push_back(k % 2 == 0 ? 1.0 + 0.25 * k : -0.5 - 0.5 * k);
            }
            const std::vector<FamilySpec> flats = {
                HyperplaneSpec{coeffs, 0.3},
                CylinderSpec{parse_function("x^2"), n, std::vector<double>(n, 1.0), -1.0, 0},
                CobbDouglasSqrtSpec{1.5, n, {}},
            };
            for (const auto& spec : flats) {
                result.rows.push_back(expect_constant(to_string(kind_of(spec)), n, make_family(spec),
                                                      default_sampling_box(spec), 0.0, 0, opt, stream++));
            }
            std::vector<double> alphas(n - 1, 0.5);
            alphas[0] = 0.55;
            const SamplingBox cd_box{std::vector<Interval>(n - 1, Interval{0.5, 2.0}), {1e-3, 1e3}};
            result.rows.push_back(expect_nonconstant("cobb_douglas alpha1=0.55 (control)", n,
                                                     make_cobb_douglas(1.5, alphas), cd_box, opt, stream++));
        } else {
            for (const double r : {0.5, 1.0, 2.0, 3.0}) {
                const FamilySpec spec = HypersphereSpec{std::vector<double>(n, 0.0), r};
                result.rows.push_back(expect_constant("hypersphere r=" + format_real(r), n, make_family(spec),
                                                      default_sampling_box(spec), 1.0 / (r * r), opt.oblique_planes,
                                                      opt, stream++));
            }
            result.rows.push_back(expect_constk_failure(n, opt, stream++));
        }
        result.rows.push_back(expect_nonconstant("exponential (control)", n, exp_surface(n), exp_box(n), opt, stream++));
    }
    return result;
}

std::string render_certify_table(const CertifyResult& result)
{
    std::size_t w_subject = 7;
    std::size_t w_expect = 11;
    for (const auto& r : result.rows) {
        w_subject = std::max(w_subject, r.subject.size());
        w_expect = std::max(w_expect, r.expectation.size());
    }
    std::ostringstream out;
    out << "suite: " << to_string(result.suite) << "\n";
    out << std::left << std::setw(static_cast<int>(w_subject)) << "subject" << "  n  " << std::setw(static_cast<int>(w_expect))
        << "expectation" << "  result  observed\n";
    std::size_t passed = 0;
    for (const auto& r : result.rows) {
        out << std::left << std::setw(static_cast<int>(w_subject)) << r.subject << "  " << r.n << "  "
            << std::setw(static_cast<int>(w_expect)) << r.expectation << "  " << (r.pass ? "PASS  " : "FAIL  ") << "  "
            << r.observed << "\n";
        passed += r.pass ? 1 : 0;
    }
    out << passed << "/" << result.rows.size() << " passed\n";
    return out.str();
}

} // namespace sepcurv::cli
