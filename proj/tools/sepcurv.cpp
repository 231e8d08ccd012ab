#include "sepcurv/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <thread>

using namespace sepcurv::cli;

int main(int argc, char** argv)
{
    CLI::App app{"sepcurv: sectional curvature of separable hypersurfaces"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    double tol = 0.0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "json";
    auto* seed_opt = app.add_option("--seed", seed, "Sampling seed (overrides the spec file)");
    auto* tol_opt = app.add_option("--tol", tol, "Constancy tolerance (certify: certification tolerance)");
    app.add_option("--threads", threads, "Worker threads for scans")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    EvalOptions eval;
    std::vector<std::size_t> pair;
    double k_target = 0.0;
    auto* eval_cmd = app.add_subcommand("eval", "Curvature of one coordinate plane at one point");
    eval_cmd->add_option("spec", eval.spec_path, "Surface-spec file")->required();
    eval_cmd->add_option("--point", eval.point, "n-1 tangent coordinates or all n coordinates")
        ->required()
        ->delimiter(',');
    eval_cmd->add_option("--pair", pair, "1-based coordinate pair i,j")->delimiter(',')->expected(2);
    auto* k_opt = eval_cmd->add_option("--k", k_target, "Also report the constant-curvature residual for curvature K");

    std::string spec_path;
    std::string out_path;
    auto* scan_cmd = app.add_subcommand("scan", "Constancy scan over sampled points");
    scan_cmd->add_option("spec", spec_path, "Surface-spec file")->required();
    scan_cmd->add_option("--out", out_path, "Report file")->required();

    std::string suite_name;
    std::vector<std::size_t> dims;
    auto* certify_cmd = app.add_subcommand("certify", "Run a built-in certification suite");
    certify_cmd->add_option("suite", suite_name, "flat or constant")->required()->check(CLI::IsMember({"flat", "constant"}));
    certify_cmd->add_option("--dims", dims, "Dimensions to sweep (default 4,5,6)")->delimiter(',');

    auto* mesh_cmd = app.add_subcommand("mesh", "Export an n = 3 surface as an OBJ mesh");
    mesh_cmd->add_option("spec", spec_path, "Surface-spec file")->required();
    mesh_cmd->add_option("--out", out_path, "OBJ file; curvature goes to <stem>.curvature.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    GlobalOptions global;
    if (*seed_opt) {
        global.seed = seed;
    }
    if (*tol_opt) {
        global.tol = tol;
    }
    global.threads = threads;
    global.format = *parse_report_format(format);

    if (*eval_cmd) {
        if (!pair.empty()) {
            eval.pair = std::pair{pair[0], pair[1]};
        }
        if (*k_opt) {
            eval.k_target = k_target;
        }
        return cmd_eval(global, eval, std::cout, std::cerr);
    }
    if (*scan_cmd) {
        return cmd_scan(global, spec_path, out_path, std::cout, std::cerr);
    }
    if (*certify_cmd) {
        return cmd_certify(global, *parse_suite(suite_name), dims, std::cout, std::cerr);
    }
    return cmd_mesh(global, spec_path, out_path, std::cout, std::cerr);
}
