#include "sepcurv/cli/report.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <sstream>

namespace sepcurv::cli {

using nlohmann::ordered_json;

std::optional<ReportFormat> parse_report_format(std::string_view name)
{
    if (name == "json") {
        return ReportFormat::Json;
    }
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    return std::nullopt;
}

std::string input_digest(std::string_view text)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

// JSON numbers print shortest round-trip; non-finite values become strings.
ordered_json real(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_real(v);
}

ordered_json opt_real(const std::optional<double>& v)
{
    return v ? real(*v) : ordered_json(nullptr);
}

ordered_json vec(const Eigen::VectorXd& v)
{
    auto arr = ordered_json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        arr.push_back(real(v[k]));
    }
    return arr;
}

ordered_json sample_json(const CurvatureSample& s)
{
    ordered_json j;
    j["point"] = s.point_index;
    if (s.pair) {
        j["pair"] = {s.pair->first + 1, s.pair->second + 1};
    }
    if (s.plane) {
        j["plane"] = {{"u", vec(s.plane->u)}, {"w", vec(s.plane->w)}};
    }
    j["k_special"] = opt_real(s.k_special);
    j["k_oracle"] = real(s.k_oracle);
    j["residual_flat"] = opt_real(s.residual_flat);
    j["residual_constk"] = opt_real(s.residual_constk);
    j["equivalent"] = s.equivalent;
    return j;
}

std::string csv_opt(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string();
}

std::string csv_quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string json_body(const ScanRun& run)
{
    const SurfaceSpec& spec = *run.spec;
    const CurvatureReport& rep = run.report;

    ordered_json body;
    body["format_version"] = kReportFormatVersion;
    body["tool"] = kToolName;
    body["tool_version"] = kToolVersion;
    body["input_digest"] = run.digest;
    body["seed"] = rep.seed;

    ordered_json surface;
    surface["n"] = spec.n;
    surface["height"] = spec.height + 1;
    if (spec.family) {
        surface["family"] = to_string(kind_of(*spec.family));
    }
    auto funcs = ordered_json::array();
    for (const auto& f : spec.functions) {
        funcs.push_back({{"expr", f.expr}, {"domain", {real(f.domain.lo), real(f.domain.hi)}}});
    }
    surface["functions"] = funcs;
    surface["bracket"] = {real(spec.box.bracket.lo), real(spec.box.bracket.hi)};
    body["surface"] = surface;

    body["policy"] = {
        {"count", run.requested},
        {"oblique_planes", run.policy.oblique_planes},
        {"constancy_tol", real(run.policy.constancy_tol)},
        {"equivalence_tol", real(run.policy.equivalence_tol)},
        {"k_target", run.policy.k0 ? real(*run.policy.k0 / 4.0) : ordered_json(nullptr)},
    };
    body["sampling"] = {{"requested", run.requested}, {"accepted", rep.points.size()}, {"rejected", run.rejected}};

    auto points = ordered_json::array();
    for (std::size_t k = 0; k < rep.points.size(); ++k) {
        points.push_back({{"index", k}, {"coords", vec(rep.points[k].coords)}, {"residual", real(rep.points[k].residual)}});
    }
    body["points"] = points;

    auto records = ordered_json::array();
    for (const auto& s : rep.samples) {
        records.push_back(sample_json(s));
    }
    body["records"] = records;

    auto failures = ordered_json::array();
    for (const auto& f : rep.failures) {
        failures.push_back({{"point", f.point_index}, {"reason", f.reason}});
    }
    body["failures"] = failures;

    body["summary"] = {
        {"count", rep.count},
        {"min", real(rep.min)},
        {"max", real(rep.max)},
        {"mean", real(rep.mean)},
        {"spread", real(rep.spread)},
        {"flagged", rep.flagged},
        {"verdict", to_string(rep.verdict)},
        {"estimate", opt_real(rep.estimate())},
    };
    return body.dump(1) + "\n";
}

std::string csv_body(const ScanRun& run)
{
    const SurfaceSpec& spec = *run.spec;
    const CurvatureReport& rep = run.report;
    std::ostringstream out;
    out << "# format_version=" << kReportFormatVersion << "\n";
    out << "# tool=" << kToolName << " tool_version=" << kToolVersion << "\n";
    out << "# input_digest=" << run.digest << "\n";
    out << "# seed=" << rep.seed << "\n";
    out << "# n=" << spec.n << " height=" << spec.height + 1 << "\n";
    out << "# count=" << run.requested << " oblique_planes=" << run.policy.oblique_planes
        << " constancy_tol=" << format_real(run.policy.constancy_tol)
        << " equivalence_tol=" << format_real(run.policy.equivalence_tol)
        << " k_target=" << (run.policy.k0 ? format_real(*run.policy.k0 / 4.0) : std::string()) << "\n";
    out << "# accepted=" << rep.points.size() << " rejected=" << run.rejected << "\n";
    out << "# summary count=" << rep.count << " min=" << format_real(rep.min) << " max=" << format_real(rep.max)
        << " mean=" << format_real(rep.mean) << " spread=" << format_real(rep.spread) << " flagged=" << rep.flagged
        << " verdict=" << to_string(rep.verdict) << " estimate=" << csv_opt(rep.estimate()) << "\n";
    for (const auto& f : rep.failures) {
        out << "# failure point=" << f.point_index << " reason=" << csv_quote(f.reason) << "\n";
    }

    out << "point";
    for (std::size_t k = 1; k <= spec.n; ++k) {
        out << ",x" << k;
    }
    out << ",kind,i,j,k_special,k_oracle,residual_flat,residual_constk,equivalent\n";
    for (const auto& s : rep.samples) {
        out << s.point_index;
        const auto& x = rep.points[s.point_index].coords;
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            out << ',' << format_real(x[k]);
        }
        if (s.pair) {
            out << ",pair," << s.pair->first + 1 << ',' << s.pair->second + 1;
        } else {
            out << ",plane,,";
        }
        out << ',' << csv_opt(s.k_special) << ',' << format_real(s.k_oracle) << ',' << csv_opt(s.residual_flat) << ','
            << csv_opt(s.residual_constk) << ',' << (s.equivalent ? "true" : "false") << "\n";
    }
    return out.str();
}

} // namespace

std::string render_scan_report(const ScanRun& run, ReportFormat format, std::string_view timestamp)
{
    if (format == ReportFormat::Json) {
        const ordered_json header = {{"generated_at", timestamp}, {"tool", kToolName}, {"tool_version", kToolVersion}};
        return header.dump() + "\n" + json_body(run);
    }
    return "# generated_at=" + std::string(timestamp) + "\n" + csv_body(run);
}

std::string report_body(std::string_view report)
{
    const auto nl = report.find('\n');
    return nl == std::string_view::npos ? std::string() : std::string(report.substr(nl + 1));
}

std::string extract_digest(std::string_view report)
{
    const std::string body = report_body(report);
    if (body.rfind("# ", 0) == 0) {
        static constexpr std::string_view key = "# input_digest=";
        const auto pos = body.find(key);
        if (pos == std::string::npos) {
            return {};
        }
        const auto end = body.find('\n', pos);
        return body.substr(pos + key.size(), end - pos - key.size());
    }
    const auto j = ordered_json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.contains("input_digest")) {
        return {};
    }
    return j["input_digest"].get<std::string>();
}

std::string render_sample(const CurvatureSample& sample, const SurfacePoint& point, ReportFormat format)
{
    if (format == ReportFormat::Json) {
        ordered_json j;
        j["coords"] = vec(point.coords);
        j["residual"] = real(point.residual);
        const ordered_json fields = sample_json(sample);
        for (const auto& [k, v] : fields.items()) {
            if (k != "point") {
                j[k] = v;
            }
        }
        return j.dump(1) + "\n";
    }
    std::ostringstream out;
    for (Eigen::Index k = 0; k < point.coords.size(); ++k) {
        out << 'x' << k + 1 << ',';
    }
    out << "i,j,k_special,k_oracle,residual_flat,residual_constk,equivalent\n";
    for (Eigen::Index k = 0; k < point.coords.size(); ++k) {
        out << format_real(point.coords[k]) << ',';
    }
    out << sample.pair->first + 1 << ',' << sample.pair->second + 1 << ',' << csv_opt(sample.k_special) << ','
        << format_real(sample.k_oracle) << ',' << csv_opt(sample.residual_flat) << ','
        << csv_opt(sample.residual_constk) << ',' << (sample.equivalent ? "true" : "false") << "\n";
    return out.str();
}

} // namespace sepcurv::cli
