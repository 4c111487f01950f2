#include "cfastap/config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfastap/dictionary.hpp"

namespace cfastap {
namespace {

using nlohmann::json;

constexpr double kDeg = kPi / 180.0;

const std::vector<std::string_view> kKnownMethods{kMethodSrRbc, kMethodLsmi, kMethodClairvoyant,
                                                  kMethodFourierImage};

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(where("") + "expected an object");
    }

    template <typename T>
    std::optional<T> get(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return std::nullopt;
        return convert<T>(*it, key);
    }

    template <typename T>
    void read(const std::string& key, T& out) {
        if (auto v = get<T>(key)) out = *v;
    }

    std::optional<Section> child(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return std::nullopt;
        return Section(*it, path_.empty() ? key : path_ + "." + key);
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + "unknown key");
        }
    }

    std::string where(const std::string& key) const {
        std::string p = path_;
        if (!key.empty()) p = p.empty() ? key : p + "." + key;
        return (p.empty() ? std::string("<root>") : p) + ": ";
    }

private:
    template <typename T>
    T convert(const json& v, const std::string& key) const {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(where(key) + "expected a boolean");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(where(key) + "expected a string");
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
            if (!v.is_array()) throw ConfigError(where(key) + "expected an array of strings");
            std::vector<std::string> out;
            for (const auto& e : v) {
                if (!e.is_string()) throw ConfigError(where(key) + "expected an array of strings");
                out.push_back(e.get<std::string>());
            }
            return out;
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError(where(key) + "expected an integer");
            if constexpr (std::is_unsigned_v<T>) {
                if (v.is_number_unsigned()) return v.get<T>();
                if (v.get<std::int64_t>() < 0) throw ConfigError(where(key) + "expected a non-negative integer");
                return static_cast<T>(v.get<std::int64_t>());
            } else {
                return v.get<T>();
            }
        } else {
            if (!v.is_number()) throw ConfigError(where(key) + "expected a number");
            return v.get<T>();
        }
    }

    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string gain_name(GainModel g) { return g == GainModel::isotropic ? "isotropic" : "cosine-element"; }

GainModel parse_gain(const std::string& s, const Section& sec) {
    if (s == "isotropic") return GainModel::isotropic;
    if (s == "cosine-element") return GainModel::cosine_element;
    throw ConfigError(sec.where("gain_model") + "expected \"isotropic\" or \"cosine-element\"");
}

void parse_scenario(Section& s, RunConfig& cfg) {
    ScenarioConfig& sc = cfg.scenario;
    s.read("rings", sc.geometry.rings);
    s.read("elements_per_ring", sc.geometry.elements_per_ring);
    s.read("ring_spacing_m", sc.geometry.ring_spacing);
    s.read("ring_radius_m", sc.geometry.ring_radius);
    s.read("wavelength_m", sc.geometry.wavelength);
    s.read("speed_mps", sc.platform.speed);
    s.read("crab_angle_deg", sc.crab_angle_deg);
    s.read("height_m", sc.platform.height);
    s.read("pri_s", sc.platform.pri);
    s.read("pulses", sc.platform.pulses);
    s.read("sample_rate_hz", sc.sample_rate);
    sc.test_range = 1.5 * sc.platform.height;
    s.read("test_range_m", sc.test_range);
    s.read("scatterers_per_ring", sc.scatterers_per_ring);
    s.read("cnr_db", sc.cnr_db);
    s.read("noise_power", sc.noise_power);
    if (auto g = s.get<std::string>("gain_model")) sc.gain = parse_gain(*g, s);
    if (auto t = s.child("taper")) {
        if (auto model = t->get<std::string>("model")) {
            if (*model == "identity") {
                sc.taper.kind = TaperModel::Kind::identity;
            } else if (*model == "configured") {
                sc.taper.kind = TaperModel::Kind::configured;
            } else {
                throw ConfigError(t->where("model") + "expected \"identity\" or \"configured\"");
            }
        }
        t->read("spatial_consistency", sc.taper.spatial_consistency);
        t->read("temporal_correlation", sc.taper.temporal_correlation);
        t->finish();
    }
    s.finish();
}

template <typename Fn>
void checked(const std::string& path, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

bool RunConfig::wants(std::string_view method) const {
    return std::find(methods.begin(), methods.end(), method) != methods.end();
}

AngleVector RunConfig::target_look() const { return AngleVector::make(target_azimuth_deg * kDeg, 0.0); }

ClutterScenario RunConfig::build_scenario() const {
    ClutterScenario sc;
    sc.geometry = scenario.geometry;
    sc.platform = scenario.platform;
    sc.platform.crab_angle = scenario.crab_angle_deg * kDeg;
    sc.scatterers_per_ring = scenario.scatterers_per_ring;
    sc.cnr_db = scenario.cnr_db;
    sc.noise_power = scenario.noise_power;
    sc.gain = scenario.gain;
    sc.taper = scenario.taper;
    sc.seed = seed;
    sc.range_cells = training_window(scenario.test_range, range_cell_spacing(scenario.sample_rate), training_cells);
    sc.test_cell_index = static_cast<std::size_t>(training_cells / 2);
    return sc;
}

PipelineOptions RunConfig::pipeline_options() const {
    PipelineOptions opt;
    opt.grid = build_grid(scenario.geometry, scenario.platform.pulses, zoom_spatial, zoom_temporal);
    opt.irls = irls;
    opt.training_cells = training_cells;
    opt.reconstruction_loading = reconstruction_loading;
    opt.lsmi_loading = lsmi_loading;
    opt.workers = workers;
    return opt;
}

void RunConfig::validate() const {
    checked("scenario", [&] { build_scenario().validate(); });
    checked("grid", [&] { pipeline_options(); });
    checked("irls", [&] { irls.validate(); });
    if (training_cells < 0) throw ConfigError("training_cells: must be non-negative");
    if (!(reconstruction_loading >= 0)) throw ConfigError("loading.beta_l: must be non-negative");
    if (!(lsmi_loading >= 0)) throw ConfigError("loading.delta: must be non-negative");
    if (doppler_points < 1) throw ConfigError("target.doppler_points: must be positive");
    if (workers < 1) throw ConfigError("workers: must be at least 1");
    if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
    for (const auto& m : methods) {
        if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) == kKnownMethods.end()) {
            throw ConfigError("methods: unknown method \"" + m + "\"");
        }
    }
    if (methods.empty()) throw ConfigError("methods: at least one method required");
}

RunConfig parse_config(std::string_view text) {
    json root;
    if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
        root = json::object();
    } else {
        try {
            root = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("parse error: ") + e.what());
        }
    }

    RunConfig cfg;
    Section top(root, "");
    if (auto s = top.child("scenario")) parse_scenario(*s, cfg);
    const double noise = cfg.scenario.noise_power;
    cfg.irls.ridge = noise;
    cfg.reconstruction_loading = noise;
    cfg.lsmi_loading = noise;
    if (auto g = top.child("grid")) {
        g->read("zoom_spatial", cfg.zoom_spatial);
        g->read("zoom_temporal", cfg.zoom_temporal);
        g->finish();
    }
    if (auto s = top.child("irls")) {
        s->read("prune_ratio", cfg.irls.prune_ratio);
        s->read("convergence_tol", cfg.irls.convergence_tol);
        s->read("max_iterations", cfg.irls.max_iterations);
        s->read("ridge", cfg.irls.ridge);
        s->finish();
    }
    top.read("training_cells", cfg.training_cells);
    if (auto s = top.child("loading")) {
        s->read("beta_l", cfg.reconstruction_loading);
        s->read("delta", cfg.lsmi_loading);
        s->finish();
    }
    if (auto s = top.child("target")) {
        s->read("azimuth_deg", cfg.target_azimuth_deg);
        s->read("doppler_points", cfg.doppler_points);
        s->finish();
    }
    top.read("methods", cfg.methods);
    top.read("output_dir", cfg.output_dir);
    top.read("seed", cfg.seed);
    top.read("workers", cfg.workers);
    if (auto s = top.child("check")) {
        s->read("min_gain_db", cfg.check.min_gain_db);
        s->read("max_srrbc_loss_db", cfg.check.max_srrbc_loss_db);
        s->read("notch_exclusion", cfg.check.notch_exclusion);
        s->read("clairvoyant_tol_db", cfg.check.clairvoyant_tol_db);
        s->finish();
    }
    top.finish();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
    // nlohmann prints doubles in shortest round-trip form, so the echo
    // parses back to identical values.
    const ScenarioConfig& s = cfg.scenario;
    json j;
    j["scenario"] = {
        {"rings", s.geometry.rings},
        {"elements_per_ring", s.geometry.elements_per_ring},
        {"ring_spacing_m", s.geometry.ring_spacing},
        {"ring_radius_m", s.geometry.ring_radius},
        {"wavelength_m", s.geometry.wavelength},
        {"speed_mps", s.platform.speed},
        {"crab_angle_deg", s.crab_angle_deg},
        {"height_m", s.platform.height},
        {"pri_s", s.platform.pri},
        {"pulses", s.platform.pulses},
        {"sample_rate_hz", s.sample_rate},
        {"test_range_m", s.test_range},
        {"scatterers_per_ring", s.scatterers_per_ring},
        {"cnr_db", s.cnr_db},
        {"noise_power", s.noise_power},
        {"gain_model", gain_name(s.gain)},
        {"taper",
         {{"model", s.taper.kind == TaperModel::Kind::identity ? "identity" : "configured"},
          {"spatial_consistency", s.taper.spatial_consistency},
          {"temporal_correlation", s.taper.temporal_correlation}}},
    };
    j["grid"] = {{"zoom_spatial", cfg.zoom_spatial}, {"zoom_temporal", cfg.zoom_temporal}};
    j["irls"] = {{"prune_ratio", cfg.irls.prune_ratio},
                 {"convergence_tol", cfg.irls.convergence_tol},
                 {"max_iterations", cfg.irls.max_iterations},
                 {"ridge", cfg.irls.ridge}};
    j["training_cells"] = cfg.training_cells;
    j["loading"] = {{"beta_l", cfg.reconstruction_loading}, {"delta", cfg.lsmi_loading}};
    j["target"] = {{"azimuth_deg", cfg.target_azimuth_deg}, {"doppler_points", cfg.doppler_points}};
    j["methods"] = cfg.methods;
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["check"] = {{"min_gain_db", cfg.check.min_gain_db},
                  {"max_srrbc_loss_db", cfg.check.max_srrbc_loss_db},
                  {"notch_exclusion", cfg.check.notch_exclusion},
                  {"clairvoyant_tol_db", cfg.check.clairvoyant_tol_db}};
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config_to_json(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace cfastap
