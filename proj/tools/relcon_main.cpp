// relcon - reproduce and analyze the excitable-system reliability experiments.
//
// Exit codes: 0 success, 1 usage or validation error, 2 divergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relcon/io.hpp"
#include "relcon/scenario.hpp"
#include "relcon/svg.hpp"
#include "relcon/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path default_out_root() {
    if (const char* env = std::getenv("RELCON_OUT")) return fs::path(env);
    return fs::path("out");
}

int cmd_list(bool as_json) {
    const auto specs = relcon::builtin_scenarios();
    if (as_json) {
        json arr = json::array();
        for (const auto& s : specs)
            arr.push_back({{"name", s.name},
                           {"model", s.model},
                           {"description", s.description},
                           {"spec_hash", relcon::spec_hash_hex(s)}});
        std::cout << arr.dump(2) << "\n";
        return 0;
    }
    for (const auto& s : specs) {
        std::printf("%-8s %-4s %s\n", s.name.c_str(), s.model.c_str(), s.description.c_str());
    }
    return 0;
}

relcon::ScenarioSpec resolve_spec(const std::string& name_or_file,
                                  const std::vector<std::string>& overrides,
                                  std::optional<std::uint64_t> seed) {
    json spec_json;
    if (fs::exists(name_or_file) && !fs::is_directory(name_or_file)) {
        std::ifstream in(name_or_file);
        spec_json = json::parse(in);
    } else {
        relcon::to_json(spec_json, relcon::find_builtin(name_or_file));
    }
    spec_json = relcon::apply_overrides(spec_json, overrides);
    if (seed) spec_json["seed"] = *seed;
    relcon::ScenarioSpec spec;
    relcon::from_json(spec_json, spec);
    return spec;
}

void warn_params(const relcon::ScenarioSpec& spec) {
    auto warn = [](const char* which, const relcon::FhnParams& p) {
        for (const auto& v : relcon::validate_params(p))
            std::cerr << "warning: " << which << " parameters: " << v << "\n";
    };
    if (const auto* p = std::get_if<relcon::FhnParams>(&spec.params)) warn("fhn", *p);
    if (const auto* p = std::get_if<relcon::EiNetworkParams>(&spec.params)) {
        warn("plant", p->e_params);
        warn("controller", p->u_params);
    }
}

int cmd_run(const std::string& name_or_file, std::optional<std::uint64_t> seed,
            const std::string& out_dir, const std::vector<std::string>& overrides,
            const std::vector<std::string>& formats, bool per_trial) {
    const auto spec = resolve_spec(name_or_file, overrides, seed);
    warn_params(spec);

    relcon::WriteOptions opt;
    if (!formats.empty()) {
        opt.csv = opt.json = opt.svg = false;
        for (const auto& f : formats) {
            if (f == "csv") opt.csv = true;
            else if (f == "json") opt.json = true;
            else if (f == "svg") opt.svg = true;
            else throw CLI::ValidationError("--format must be csv, json or svg");
        }
    }
    opt.per_trial = per_trial;

    const auto result = relcon::run_scenario(spec);
    const fs::path dir = out_dir.empty() ? default_out_root() / spec.name : fs::path(out_dir);
    relcon::write_result(result, dir, opt);
    if (opt.svg) relcon::write_scenario_svg(result, dir / "plot.svg");
    std::cerr << "wrote " << dir.string() << "\n";
    std::cout << result.summary.dump(2) << "\n";
    return 0;
}

int cmd_certify(const std::string& run_dir, double mu, std::optional<double> t0,
                std::optional<double> t1) {
    const auto loaded = relcon::load_run(run_dir);
    if (loaded.spec.model != "fhn") {
        std::cerr << "error: certify requires an FHN run directory\n";
        return 1;
    }
    const auto& p = std::get<relcon::FhnParams>(loaded.spec.params);
    const auto& tr = loaded.run.trajectories.front();
    const double w0 = t0.value_or(tr.t0);
    const double w1 = t1.value_or(tr.time(tr.samples() - 1));
    const auto cert = relcon::alpha_certificate(loaded.run, mu, w0, w1, p);

    json cj{{"format_version", relcon::kFormatVersion},
            {"spec_hash", relcon::spec_hash_hex(loaded.spec)},
            {"certificates", json::array({cert})}};
    relcon::atomic_write(fs::path(run_dir) / "certificates.json", cj.dump(2) + "\n");
    std::cout << json(cert).dump(2) << "\n";
    return 0;
}

int cmd_reproduce(int figure, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    std::vector<std::string> names;
    if (figure == 1) names = {"fig1a", "fig1b", "fig1c", "fig1d"};
    else if (figure == 3) names = {"fig3a", "fig3b", "fig3c"};
    else if (figure == 4) names = {"fig4a", "fig4b"};
    else throw CLI::ValidationError("--figure must be 1, 3 or 4");

    const fs::path root =
        out_dir.empty() ? default_out_root() / ("figure" + std::to_string(figure))
                        : fs::path(out_dir);
    json report{{"format_version", relcon::kFormatVersion},
                {"toolkit_version", relcon::kToolkitVersion},
                {"figure", figure},
                {"scenarios", json::object()}};
    for (const auto& name : names) {
        auto spec = relcon::find_builtin(name);
        if (seed) spec.seed = *seed;
        std::cerr << "running " << name << "...\n";
        const auto result = relcon::run_scenario(spec);
        relcon::write_result(result, root / name, relcon::WriteOptions{});
        report["scenarios"][name] = result.summary;
    }
    relcon::atomic_write(root / "report.json", report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic FitzHugh-Nagumo reliability / contraction toolkit"};
    app.set_version_flag("--version", relcon::kToolkitVersion);
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list builtin scenarios");
    bool list_json = false;
    list->add_flag("--json", list_json, "machine-readable output");

    auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
    std::string run_name, run_out;
    std::vector<std::string> run_overrides, run_formats;
    std::optional<std::uint64_t> run_seed;
    bool per_trial = false;
    run->add_option("name", run_name, "builtin name or spec JSON file")->required();
    run->add_option("--seed", run_seed, "override the spec seed");
    run->add_option("--out", run_out, "output directory (default $RELCON_OUT/<name>)");
    run->add_option("--override", run_overrides, "dotted-path override key=value");
    run->add_option("--format", run_formats, "artifacts to write: csv, json, svg");
    run->add_flag("--per-trial", per_trial, "one trajectory file per trial");

    auto* certify = app.add_subcommand("certify", "alpha-contraction certificate of a stored run");
    std::string cert_dir;
    double cert_mu = 0.2;
    std::optional<double> cert_t0, cert_t1;
    certify->add_option("run_dir", cert_dir, "run directory")->required();
    certify->add_option("--mu", cert_mu, "region margin (> 0)")->required();
    certify->add_option("--t0", cert_t0, "window start (default run start)");
    certify->add_option("--t1", cert_t1, "window end (default run end)");

    auto* repro = app.add_subcommand("reproduce", "run all sub-scenarios of a figure");
    int figure = 0;
    std::string repro_out;
    std::optional<std::uint64_t> repro_seed;
    repro->add_option("--figure", figure, "figure id: 1, 3 or 4")->required();
    repro->add_option("--out", repro_out, "output directory");
    repro->add_option("--seed", repro_seed, "override the builtin seeds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) return cmd_list(list_json);
        if (*run) return cmd_run(run_name, run_seed, run_out, run_overrides, run_formats, per_trial);
        if (*certify) {
            if (!(cert_mu > 0.0)) {
                std::cerr << "error: --mu must be > 0\n";
                return 1;
            }
            return cmd_certify(cert_dir, cert_mu, cert_t0, cert_t1);
        }
        if (*repro) return cmd_reproduce(figure, repro_out, repro_seed);
    } catch (const relcon::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
