#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "relcon/analysis.hpp"
#include "relcon/contraction.hpp"
#include "relcon/integrator.hpp"
#include "relcon/models.hpp"
#include "relcon/signal.hpp"

namespace relcon {

struct Horizon {
    double t0 = 0.0;
    double t1 = 400.0;
    double dt = 0.01;
};

// --- initial-condition recipes -------------------------------------------

struct ExplicitIcs {
    std::vector<std::vector<double>> states;
};

// nv x nw grid centered at the FHN rest point, spanning +-extent in each
// coordinate.
struct GridAroundRest {
    double extent_v = 0.5;
    double extent_w = 0.5;
    int nv = 3;
    int nw = 3;
};

// Uniform draws from the disk of given radius around the FHN rest point.
struct RandomBall {
    double radius = 0.5;
    int count = 9;
};

// Per EI trial: plant at rest plus a uniform disk perturbation, controller
// potentials uniform in [-2,2], recovery variables uniform in [-1,1].
struct EiDefaultIcs {
    int count = 10;
    double e_radius = 0.5;
};

// Uniform box, one draw per component per trial.
struct UniformBox {
    std::vector<double> lo{-1.0, -1.0};
    std::vector<double> hi{1.0, 1.0};
    int count = 5;
};

using IcRecipe = std::variant<ExplicitIcs, GridAroundRest, RandomBall, EiDefaultIcs, UniformBox>;

// --- drive ----------------------------------------------------------------

// Disturbance generated by the half-center exosystem, co-simulated inside the
// same RK4 step (state augmentation); initial state fixed and asymmetric.
struct ExoDrive {
    FhnParams params{0.6, 0.7, 1.0 / 30.0};
    double k_u = 0.5;
    std::array<double, 4> init{-1.2, -0.6, 1.0, 0.3};
};

using Drive = std::variant<Signal, ExoDrive>;

// --- analysis plan ----------------------------------------------------------

struct CertificateRequest {
    double mu = 0.2;
    std::optional<double> t0; // defaults to the horizon ends
    std::optional<double> t1;
};

struct EventRequest {
    std::string channel = "v";
    EventKind kind = EventKind::Peak;
    double threshold = 1.0; // spikes only
};

// Mean over trials of the sync score between channel a's and channel b's
// event trains.
struct SyncRequest {
    std::string a = "eta";
    EventKind a_kind = EventKind::Peak;
    std::string b = "u";
    EventKind b_kind = EventKind::Peak;
    double tol = 2.0;
};

// Min/mean over trial pairs of the sync score of one channel's trains.
struct PairwiseSyncRequest {
    std::string channel = "eta";
    EventKind kind = EventKind::Spike;
    double tol = 2.0;
};

struct DispersionRequest {
    std::string channel = "y";
    double period = 60.0;
    double t_lo = 480.0;
    double t_hi = 600.0;
};

struct SegmentRequest {
    std::vector<double> boundaries;
};

// Max over trials and t in [t_lo, horizon t1] of |y(t) - v_rest| (EI only).
struct RegulationBandRequest {
    double t_lo = 300.0;
};

struct AnalysisPlan {
    bool distance = true;
    double band_mu = 0.2; // region bands in plots and co-region summaries
    std::optional<CertificateRequest> certificate;
    std::vector<EventRequest> events;
    std::vector<SyncRequest> sync;
    std::optional<PairwiseSyncRequest> pairwise_sync;
    std::optional<DispersionRequest> dispersion;
    std::optional<SegmentRequest> segments;
    std::optional<RegulationBandRequest> regulation_band;
};

// --- scenario ---------------------------------------------------------------

using ModelParams = std::variant<FhnParams, EiNetworkParams, LtiParams>;

struct ScenarioSpec {
    std::string name;
    std::string description;
    std::string model = "fhn"; // fhn | ei | lti
    ModelParams params = FhnParams{};
    Drive drive = Signal{ConstantSignal{0.0}};
    IcRecipe ics = GridAroundRest{};
    Horizon horizon;
    std::uint64_t seed = 7;
    AnalysisPlan analysis;
};

struct ScenarioResult {
    ScenarioSpec spec;
    std::uint64_t hash = 0;
    EnsembleRun run;
    std::vector<double> distance;
    std::vector<ContractionCertificate> certificates;
    std::map<std::string, std::vector<EventTrain>> trains; // "channel:kind" -> per trial
    std::map<std::string, double> scalars;
    std::vector<double> segments;
    nlohmann::json summary;
};

std::vector<ScenarioSpec> builtin_scenarios();
ScenarioSpec find_builtin(const std::string& name); // throws std::out_of_range

// Resolves the recipe into concrete state vectors; random recipes draw from
// the documented ic stream of the given seed.
std::vector<std::vector<double>> default_initial_conditions(const ScenarioSpec& spec,
                                                            std::uint64_t seed);

ScenarioResult run_scenario(const ScenarioSpec& spec);

// State dimension of the integrated system (includes the exosystem when the
// drive is co-simulated).
std::size_t state_dimension(const ScenarioSpec& spec);

// Column names of the integrated state, in storage order.
std::vector<std::string> state_names(const ScenarioSpec& spec);

// Resolves a channel name to a state component; "u" resolves to the stored
// input column. Returns component index or -1 for "u".
int channel_component(const ScenarioSpec& spec, const std::string& channel);

// Metric used for the scenario's distance curve.
Metric scenario_metric(const ScenarioSpec& spec);

// FNV-1a 64 over the canonical JSON serialization; any field change changes
// the hash.
std::uint64_t spec_hash(const ScenarioSpec& spec);
std::string spec_hash_hex(const ScenarioSpec& spec);

// Dotted-path overrides ("params.k_e=3.5", "signal.seed=9",
// "horizon.dt=0.005"); values are parsed as JSON scalars when possible.
nlohmann::json apply_overrides(nlohmann::json spec_json,
                               const std::vector<std::string>& overrides);

void to_json(nlohmann::json& j, const ScenarioSpec& s);
void from_json(const nlohmann::json& j, ScenarioSpec& s);

} // namespace relcon
