#include "relcon/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "relcon/version.hpp"

namespace relcon {

std::string format_double(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s) {
    double out = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc{}) throw std::invalid_argument("bad number: " + std::string(s));
    return out;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

void append_trial_rows(std::string& out, const ScenarioResult& r, std::size_t trial,
                       bool with_trial_column) {
    const auto& tr = r.run.trajectories[trial];
    for (std::size_t k = 0; k < tr.samples(); ++k) {
        if (with_trial_column) {
            out += std::to_string(trial);
            out += ',';
        }
        out += format_double(tr.time(k));
        for (std::size_t c = 0; c < tr.dim; ++c) {
            out += ',';
            out += format_double(tr.component(k, c));
        }
        out += ',';
        out += format_double(tr.inputs[k]);
        out += '\n';
    }
}

std::string header_row(const ScenarioResult& r, bool with_trial_column) {
    std::string h = with_trial_column ? "trial,t" : "t";
    for (const auto& name : state_names(r.spec)) {
        h += ',';
        h += name;
    }
    h += ",u\n";
    return h;
}

} // namespace

std::string trajectories_csv(const ScenarioResult& r) {
    std::string out = header_row(r, true);
    for (std::size_t i = 0; i < r.run.members(); ++i) append_trial_rows(out, r, i, true);
    return out;
}

std::string trajectory_csv(const ScenarioResult& r, std::size_t trial) {
    std::string out = header_row(r, false);
    append_trial_rows(out, r, trial, false);
    return out;
}

std::string distance_csv(const ScenarioResult& r) {
    std::string out = "t,d_max\n";
    const auto& tr = r.run.trajectories.front();
    for (std::size_t k = 0; k < r.distance.size(); ++k) {
        out += format_double(tr.time(k));
        out += ',';
        out += format_double(r.distance[k]);
        out += '\n';
    }
    return out;
}

std::string events_csv(const ScenarioResult& r) {
    std::string out = "trial,channel,kind,time\n";
    for (const auto& [key, trains] : r.trains) {
        (void)key;
        for (std::size_t trial = 0; trial < trains.size(); ++trial) {
            const auto& train = trains[trial];
            for (const double t : train.times) {
                out += std::to_string(trial);
                out += ',';
                out += train.channel;
                out += ',';
                out += to_string(train.kind);
                out += ',';
                out += format_double(t);
                out += '\n';
            }
        }
    }
    return out;
}

std::vector<std::string> write_result(const ScenarioResult& r, const std::filesystem::path& dir,
                                      const WriteOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> files;

    if (opt.csv) {
        if (opt.per_trial) {
            for (std::size_t i = 0; i < r.run.members(); ++i) {
                char name[40];
                std::snprintf(name, sizeof name, "trajectories_%03zu.csv", i);
                atomic_write(dir / name, trajectory_csv(r, i));
                files.emplace_back(name);
            }
        } else {
            atomic_write(dir / "trajectories.csv", trajectories_csv(r));
            files.emplace_back("trajectories.csv");
        }
        if (!r.distance.empty()) {
            atomic_write(dir / "distance.csv", distance_csv(r));
            files.emplace_back("distance.csv");
        }
        if (!r.trains.empty()) {
            atomic_write(dir / "events.csv", events_csv(r));
            files.emplace_back("events.csv");
        }
    }
    if (opt.json && !r.certificates.empty()) {
        nlohmann::json cj{{"format_version", kFormatVersion},
                          {"spec_hash", spec_hash_hex(r.spec)},
                          {"certificates", r.certificates}};
        atomic_write(dir / "certificates.json", cj.dump(2) + "\n");
        files.emplace_back("certificates.json");
    }
    if (opt.svg) files.emplace_back("plot.svg"); // rendered by the caller (svg.hpp)

    nlohmann::json run_json = r.summary;
    nlohmann::json spec_json;
    to_json(spec_json, r.spec);
    run_json["spec"] = std::move(spec_json);
    run_json["files"] = files;
    atomic_write(dir / "run.json", run_json.dump(2) + "\n");
    files.emplace_back("run.json");
    return files;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

} // namespace

LoadedRun load_run(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::ifstream jf(dir / "run.json");
    if (!jf) throw std::runtime_error("not a run directory (missing run.json): " + dir.string());
    nlohmann::json run_json = nlohmann::json::parse(jf);

    LoadedRun out;
    out.run_json = run_json;
    from_json(run_json.at("spec"), out.spec);

    std::ifstream cf(dir / "trajectories.csv");
    if (!cf) throw std::runtime_error("missing trajectories.csv in " + dir.string());
    std::string line;
    if (!std::getline(cf, line)) throw std::runtime_error("empty trajectories.csv");
    const auto header = split(line, ',');
    if (header.size() < 4 || header[0] != "trial" || header[1] != "t")
        throw std::runtime_error("unexpected trajectories.csv header");
    const std::size_t dim = header.size() - 3; // trial, t, ..., u

    EnsembleRun& run = out.run;
    run.model = out.spec.model;
    std::visit([&run](const auto& p) { run.params = p; }, out.spec.params);
    run.seed = out.spec.seed;
    run.t0 = out.spec.horizon.t0;
    run.dt = out.spec.horizon.dt;
    run.dim = dim;

    std::size_t current = static_cast<std::size_t>(-1);
    while (std::getline(cf, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != header.size()) throw std::runtime_error("ragged trajectories.csv row");
        const auto trial = static_cast<std::size_t>(std::stoul(std::string(cols[0])));
        if (trial != current) {
            if (trial != run.trajectories.size())
                throw std::runtime_error("trajectories.csv trials out of order");
            current = trial;
            run.trajectories.push_back(Trajectory{run.t0, run.dt, dim, {}, {}});
        }
        auto& tr = run.trajectories.back();
        for (std::size_t c = 0; c < dim; ++c) tr.states.push_back(parse_double(cols[2 + c]));
        tr.inputs.push_back(parse_double(cols.back()));
    }
    if (run.trajectories.empty()) throw std::runtime_error("no rows in trajectories.csv");
    for (const auto& tr : run.trajectories) run.initial_conditions.emplace_back(
        tr.states.begin(), tr.states.begin() + static_cast<std::ptrdiff_t>(dim));
    return out;
}

} // namespace relcon
