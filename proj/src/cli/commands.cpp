#include "sepcurv/cli/commands.hpp"

#include "sepcurv/cli/mesh.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace sepcurv::cli {

namespace {

// Runs a command body and maps exceptions onto exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn)
{
    try {
        return fn();
    } catch (const MeshError& e) {
        err << "error: " << e.what() << "\n";
        return kExitMesh;
    } catch (const RegularityError& e) {
        err << "regularity failure: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const RootError& e) {
        err << "root failure: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const DomainError& e) {
        err << "domain failure: " << e.what() << "\n";
        return kExitGeometry;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
        throw Error("cannot write '" + path + "'");
    }
}

std::string read_file(const std::string& path)
{
    std::string text;
    load_surface_spec(path, &text);
    return text;
}

} // namespace

double resolve_constancy_tol(std::optional<double> cli, std::optional<double> spec, const char* env_value)
{
    const auto check = [](double v, const std::string& what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw SpecError(what + " must be a positive finite number", 0);
        }
        return v;
    };
    if (cli) {
        return check(*cli, "--tol");
    }
    if (spec) {
        return check(*spec, "tolerance.constancy");
    }
    if (env_value && *env_value) {
        const std::string_view text(env_value);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw SpecError(std::string(kTolEnvVar) + " is not a number: '" + std::string(text) + "'", 0);
        }
        return check(v, kTolEnvVar);
    }
    return kFallbackConstancyTol;
}

ScanOutput run_scan(std::string_view spec_text, const GlobalOptions& global, std::string_view timestamp)
{
    const SurfaceSpec spec = parse_surface_spec(spec_text);
    if (!spec.has_sampling) {
        throw SpecError("scan needs a sampling block (sampling.* keys)", 0);
    }
    ScanRun run;
    run.digest = input_digest(spec_text);
    run.spec = &spec;
    run.policy.seed = global.seed.value_or(spec.seed);
    run.policy.oblique_planes = spec.planes;
    run.policy.constancy_tol = resolve_constancy_tol(global.tol, spec.constancy_tol, std::getenv(kTolEnvVar));
    run.policy.equivalence_tol = spec.equivalence_tol.value_or(kEquivalenceTol);
    if (spec.k_target) {
        run.policy.k0 = 4.0 * *spec.k_target;
    }
    run.policy.threads = global.threads;
    run.requested = spec.count;

    const SampleSet set = sample_surface(spec.surface, spec.box, spec.count, run.policy.seed);
    run.rejected = set.rejected;
    if (set.points.size() < 2) {
        std::string why = "only " + std::to_string(set.points.size()) + " regular points found in the sampling box";
        if (!set.rejection_reasons.empty()) {
            why += " (first rejection: " + set.rejection_reasons.front() + ")";
        }
        throw RootError(why);
    }
    run.report = scan_constancy(spec.surface, set.points, run.policy);
    return {render_scan_report(run, global.format, timestamp), run.report.verdict, run.report.estimate()};
}

int cmd_eval(const GlobalOptions& global, const EvalOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const SurfaceSpec spec = load_surface_spec(options.spec_path);
        const auto& s = spec.surface;
        const auto& tangent = s.tangent_indices();

        std::size_t i = tangent[0];
        std::size_t j = tangent[1];
        if (options.pair) {
            const auto [a, b] = *options.pair;
            if (a < 1 || b < 1 || a > spec.n || b > spec.n || a == b) {
                throw std::invalid_argument("--pair needs two distinct indices in 1.." + std::to_string(spec.n));
            }
            i = a - 1;
            j = b - 1;
            if (i == s.height() || j == s.height()) {
                throw std::invalid_argument("--pair must not include the height coordinate " +
                                            std::to_string(s.height() + 1));
            }
        }

        SurfacePoint p;
        if (options.point.size() + 1 == spec.n) {
            p = solve_height(s, Eigen::Map<const Eigen::VectorXd>(options.point.data(), options.point.size()),
                             spec.box.bracket);
        } else if (options.point.size() == spec.n) {
            p = make_surface_point(s, Eigen::Map<const Eigen::VectorXd>(options.point.data(), options.point.size()));
        } else {
            throw std::invalid_argument("--point needs " + std::to_string(spec.n - 1) + " or " +
                                        std::to_string(spec.n) + " coordinates");
        }

        CurvatureSample sample;
        sample.pair = CoordinatePair{i, j};
        sample.k_special = sectional_special(s, p, i, j);
        sample.k_oracle = sectional_oracle(s, p, coordinate_plane(s, p, i, j));
        sample.residual_flat = flatness_residual(s, p, i, j);
        if (options.k_target) {
            sample.residual_constk = constk_residual(s, p, i, j, 4.0 * *options.k_target);
        }
        const double tol = spec.equivalence_tol.value_or(kEquivalenceTol);
        sample.equivalent = std::abs(*sample.k_special - sample.k_oracle) <= tol * std::max(1.0, std::abs(sample.k_oracle));
        out << render_sample(sample, p, global.format);
        return static_cast<int>(kExitOk);
    });
}

int cmd_scan(const GlobalOptions& global, const std::string& spec_path, const std::string& out_path,
             std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const std::string text = read_file(spec_path);
        const ScanOutput scan = run_scan(text, global, utc_timestamp());
        write_file(out_path, scan.report);
        out << "verdict: " << to_string(scan.verdict);
        if (scan.estimate) {
            out << " " << format_real(*scan.estimate);
        }
        out << "\n";
        out << "report: " << out_path << "\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_certify(const GlobalOptions& global, Suite suite, const std::vector<std::size_t>& dims, std::ostream& out,
                std::ostream& err)
{
    return guarded(err, [&] {
        CertifyOptions opt;
        if (!dims.empty()) {
            opt.dims = dims;
        }
        for (const std::size_t n : opt.dims) {
            if (n < 3) {
                throw std::invalid_argument("certify dimensions must be at least 3");
            }
        }
        if (global.seed) {
            opt.seed = *global.seed;
        }
        if (global.tol) {
            opt.tol = *global.tol;
        }
        opt.threads = global.threads;
        const CertifyResult result = run_certify(suite, opt);
        out << render_certify_table(result);
        return static_cast<int>(result.all_passed() ? kExitOk : kExitCertifyFailed);
    });
}

std::string curvature_sidecar_path(const std::string& mesh_path)
{
    constexpr std::string_view ext = ".obj";
    if (mesh_path.size() > ext.size() && mesh_path.compare(mesh_path.size() - ext.size(), ext.size(), ext) == 0) {
        return mesh_path.substr(0, mesh_path.size() - ext.size()) + ".curvature.csv";
    }
    return mesh_path + ".curvature.csv";
}

int cmd_mesh(const GlobalOptions&, const std::string& spec_path, const std::string& out_path, std::ostream& out,
             std::ostream& err)
{
    return guarded(err, [&] {
        const SurfaceSpec spec = load_surface_spec(spec_path);
        if (spec.n != 3) {
            throw SpecError("mesh export needs n = 3, spec has n = " + std::to_string(spec.n), 0);
        }
        if (!spec.mesh_grid) {
            throw SpecError("mesh export needs 'mesh.grid = nu, nv'", 0);
        }
        const Mesh mesh = build_mesh(spec.surface, spec.box, spec.mesh_grid->first, spec.mesh_grid->second);
        if (mesh.vertices.size() < 3) {
            throw MeshError("only " + std::to_string(mesh.vertices.size()) + " of " +
                            std::to_string(mesh.grid_points) + " grid points lie on the surface; need at least 3");
        }
        const std::string sidecar = curvature_sidecar_path(out_path);
        write_file(out_path, write_obj(mesh));
        write_file(sidecar, write_curvature_csv(mesh));
        out << "mesh: " << mesh.vertices.size() << " vertices, " << mesh.faces.size() << " faces, " << mesh.omitted
            << " grid points omitted\n";
        out << "wrote " << out_path << " and " << sidecar << "\n";
        return static_cast<int>(kExitOk);
    });
}

} // namespace sepcurv::cli
