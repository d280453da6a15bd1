// SPDX-License-Identifier: Apache-2.0
#include "riscav/config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "riscav/errors.hpp"
#include "riscav/rng.hpp"

namespace riscav::cli {

namespace {

using nlohmann::json;

// Every config problem surfaces as a ValidationError (exit code 2).
[[noreturn]] void config_error(const std::string& message) {
    throw ValidationError("config: " + message);
}

double get_double(const json& j, const char* key, double fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        config_error(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer())
        config_error(std::string(key) + " must be an integer");
    auto v = j.at(key).get<std::int64_t>();
    if (v < 0)
        config_error(std::string(key) + " must be non-negative");
    return static_cast<std::uint64_t>(v);
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned())
        config_error(std::string(key) + " must be an integer");
    return j.at(key).get<int>();
}

physics::Vec2 get_vec2(const json& j, const char* key, physics::Vec2 fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        config_error(std::string(key) + " must be a [x, y] pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k)
                ok = true;
        if (!ok)
            config_error("unknown key '" + it.key() + "' in " + where);
    }
}

physics::SceneConfig scene_from_json(const json& j) {
    physics::SceneConfig def;
    reject_unknown_keys(j,
                        {"width_m", "height_m", "wall_spacing_m", "wall_jitter_m", "ris_elements",
                         "ris_rows", "ris_spacing_m", "ris_standoff_m", "tx_m", "rx_m", "seed",
                         "ris_resonance_off_hz", "ris_resonance_on_hz", "ris_linewidth_hz",
                         "ris_coupling", "wall_resonance_hz", "wall_linewidth_hz", "wall_coupling",
                         "scattering_antennas", "antenna_resonance_hz", "antenna_linewidth_hz",
                         "antenna_coupling"},
                        "scene");
    physics::SceneConfig s;
    s.width_m = get_double(j, "width_m", def.width_m);
    s.height_m = get_double(j, "height_m", def.height_m);
    s.wall_spacing_m = get_double(j, "wall_spacing_m", def.wall_spacing_m);
    s.wall_jitter_m = get_double(j, "wall_jitter_m", def.wall_jitter_m);
    s.ris_elements = get_int(j, "ris_elements", def.ris_elements);
    s.ris_rows = get_int(j, "ris_rows", def.ris_rows);
    s.ris_spacing_m = get_double(j, "ris_spacing_m", def.ris_spacing_m);
    s.ris_standoff_m = get_double(j, "ris_standoff_m", def.ris_standoff_m);
    s.tx = get_vec2(j, "tx_m", def.tx);
    s.rx = get_vec2(j, "rx_m", def.rx);
    s.seed = get_uint(j, "seed", def.seed);
    s.ris_resonance_off_hz = get_double(j, "ris_resonance_off_hz", def.ris_resonance_off_hz);
    s.ris_resonance_on_hz = get_double(j, "ris_resonance_on_hz", def.ris_resonance_on_hz);
    s.ris_linewidth_hz = get_double(j, "ris_linewidth_hz", def.ris_linewidth_hz);
    s.ris_coupling = get_double(j, "ris_coupling", def.ris_coupling);
    s.wall_resonance_hz = get_double(j, "wall_resonance_hz", def.wall_resonance_hz);
    s.wall_linewidth_hz = get_double(j, "wall_linewidth_hz", def.wall_linewidth_hz);
    s.wall_coupling = get_double(j, "wall_coupling", def.wall_coupling);
    if (j.contains("scattering_antennas")) {
        if (!j.at("scattering_antennas").is_boolean())
            config_error("scattering_antennas must be a boolean");
        s.scattering_antennas = j.at("scattering_antennas").get<bool>();
    }
    s.antenna_resonance_hz = get_double(j, "antenna_resonance_hz", def.antenna_resonance_hz);
    s.antenna_linewidth_hz = get_double(j, "antenna_linewidth_hz", def.antenna_linewidth_hz);
    s.antenna_coupling = get_double(j, "antenna_coupling", def.antenna_coupling);
    return s;
}

json scene_to_json(const physics::SceneConfig& s) {
    return json{{"width_m", s.width_m},
                {"height_m", s.height_m},
                {"wall_spacing_m", s.wall_spacing_m},
                {"wall_jitter_m", s.wall_jitter_m},
                {"ris_elements", s.ris_elements},
                {"ris_rows", s.ris_rows},
                {"ris_spacing_m", s.ris_spacing_m},
                {"ris_standoff_m", s.ris_standoff_m},
                {"tx_m", {s.tx.x, s.tx.y}},
                {"rx_m", {s.rx.x, s.rx.y}},
                {"seed", s.seed},
                {"ris_resonance_off_hz", s.ris_resonance_off_hz},
                {"ris_resonance_on_hz", s.ris_resonance_on_hz},
                {"ris_linewidth_hz", s.ris_linewidth_hz},
                {"ris_coupling", s.ris_coupling},
                {"wall_resonance_hz", s.wall_resonance_hz},
                {"wall_linewidth_hz", s.wall_linewidth_hz},
                {"wall_coupling", s.wall_coupling},
                {"scattering_antennas", s.scattering_antennas},
                {"antenna_resonance_hz", s.antenna_resonance_hz},
                {"antenna_linewidth_hz", s.antenna_linewidth_hz},
                {"antenna_coupling", s.antenna_coupling}};
}

} // namespace

std::vector<core::Mask> MaskSelection::materialize(int n_elements) const {
    std::uint64_t space = std::uint64_t{1} << n_elements;
    std::vector<core::Mask> out;
    switch (kind) {
    case Kind::first_k: {
        if (k < 1)
            config_error("masks.k must be >= 1");
        if (k > space)
            config_error("masks.k exceeds the " + std::to_string(space) + "-mask space");
        for (std::uint64_t i = 0; i < k; ++i)
            out.push_back(core::Mask::from_index(i, n_elements));
        break;
    }
    case Kind::random: {
        if (n < 1)
            config_error("masks.n must be >= 1");
        // Distinct masks so the result is a valid dataset; seeded draws keep
        // their first-occurrence order and repeats are skipped.
        if (n > space)
            config_error("masks.n exceeds the " + std::to_string(space) + "-mask space");
        std::mt19937_64 rng(seed);
        std::set<std::uint64_t> seen;
        while (seen.size() < n) {
            std::uint64_t idx = bounded_uint64(rng, space);
            if (seen.insert(idx).second)
                out.push_back(core::Mask::from_index(idx, n_elements));
        }
        break;
    }
    case Kind::list: {
        if (indices.empty())
            config_error("masks.indices must not be empty");
        std::set<std::uint64_t> seen;
        for (std::uint64_t idx : indices) {
            if (!seen.insert(idx).second)
                config_error("masks.indices contains duplicate index " + std::to_string(idx));
            out.push_back(core::Mask::from_index(idx, n_elements));
        }
        break;
    }
    }
    return out;
}

std::string StrategyConfig::name() const {
    switch (kind) {
    case Kind::exhaustive: return "exhaustive";
    case Kind::coordinate_descent: return "coordinate_descent";
    case Kind::random: return "random";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    cfg.scene = physics::SceneConfig{};
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object())
        config_error("top level must be a JSON object");
    reject_unknown_keys(doc, {"source", "grid", "fom", "masks", "strategy", "band_fraction",
                              "out_dir"},
                        "config");
    ExperimentConfig cfg = defaults();
    cfg.scene.reset();

    if (doc.contains("source")) {
        const json& src = doc.at("source");
        reject_unknown_keys(src, {"scene", "archive"}, "source");
        if (src.contains("scene") && src.contains("archive"))
            config_error("exactly one channel source required: scene or archive, not both");
        if (src.contains("scene"))
            cfg.scene = scene_from_json(src.at("scene"));
        if (src.contains("archive")) {
            if (!src.at("archive").is_string())
                config_error("source.archive must be a path string");
            cfg.archive = std::filesystem::path(src.at("archive").get<std::string>());
        }
    }
    if (!cfg.scene && !cfg.archive)
        cfg.scene = physics::SceneConfig{}; // default source

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown_keys(g, {"f_start_hz", "f_stop_hz", "count"}, "grid");
        cfg.grid = core::FrequencyGrid(get_double(g, "f_start_hz", 5.7e9),
                                       get_double(g, "f_stop_hz", 6.1e9),
                                       get_int(g, "count", 401));
    }

    if (doc.contains("fom")) {
        const json& f = doc.at("fom");
        reject_unknown_keys(f, {"window_s", "cutoff_s", "zero_pad_factor", "spectral_window"},
                            "fom");
        cfg.fom.window_s = get_double(f, "window_s", cfg.fom.window_s);
        cfg.fom.cutoff_s = get_double(f, "cutoff_s", cfg.fom.cutoff_s);
        cfg.fom.zero_pad_factor = get_int(f, "zero_pad_factor", cfg.fom.zero_pad_factor);
        if (f.contains("spectral_window")) {
            std::string w = f.at("spectral_window").get<std::string>();
            if (w == "rectangular")
                cfg.fom.spectral_window = dsp::SpectralWindow::rectangular;
            else if (w == "hann")
                cfg.fom.spectral_window = dsp::SpectralWindow::hann;
            else
                config_error("spectral_window must be 'rectangular' or 'hann'");
        }
        cfg.fom.validate();
    }

    if (doc.contains("masks")) {
        const json& m = doc.at("masks");
        reject_unknown_keys(m, {"kind", "k", "n", "seed", "indices"}, "masks");
        std::string kind = m.value("kind", std::string("first_k"));
        if (kind == "first_k")
            cfg.masks.kind = MaskSelection::Kind::first_k;
        else if (kind == "random")
            cfg.masks.kind = MaskSelection::Kind::random;
        else if (kind == "list")
            cfg.masks.kind = MaskSelection::Kind::list;
        else
            config_error("masks.kind must be 'first_k', 'random' or 'list'");
        cfg.masks.k = get_uint(m, "k", cfg.masks.k);
        cfg.masks.n = get_uint(m, "n", cfg.masks.n);
        cfg.masks.seed = get_uint(m, "seed", cfg.masks.seed);
        if (m.contains("indices")) {
            if (!m.at("indices").is_array())
                config_error("masks.indices must be an array");
            for (const json& v : m.at("indices"))
                cfg.masks.indices.push_back(v.get<std::uint64_t>());
        }
    }

    if (doc.contains("strategy")) {
        const json& s = doc.at("strategy");
        reject_unknown_keys(s, {"kind", "starts", "max_sweeps", "seed", "n"}, "strategy");
        std::string kind = s.value("kind", std::string("exhaustive"));
        if (kind == "exhaustive")
            cfg.strategy.kind = StrategyConfig::Kind::exhaustive;
        else if (kind == "coordinate_descent")
            cfg.strategy.kind = StrategyConfig::Kind::coordinate_descent;
        else if (kind == "random")
            cfg.strategy.kind = StrategyConfig::Kind::random;
        else
            config_error("strategy.kind must be 'exhaustive', 'coordinate_descent' or 'random'");
        cfg.strategy.starts = get_int(s, "starts", cfg.strategy.starts);
        cfg.strategy.max_sweeps = get_int(s, "max_sweeps", cfg.strategy.max_sweeps);
        cfg.strategy.seed = get_uint(s, "seed", cfg.strategy.seed);
        cfg.strategy.n = get_uint(s, "n", cfg.strategy.n);
        if (cfg.strategy.starts < 1)
            config_error("strategy.starts must be >= 1");
        if (cfg.strategy.max_sweeps < 1)
            config_error("strategy.max_sweeps must be >= 1");
    }

    cfg.band_fraction = get_double(doc, "band_fraction", cfg.band_fraction);
    if (!(cfg.band_fraction > 0.0) || cfg.band_fraction > 1.0)
        config_error("band_fraction must be in (0, 1]");

    if (doc.contains("out_dir")) {
        if (!doc.at("out_dir").is_string())
            config_error("out_dir must be a path string");
        cfg.out_dir = std::filesystem::path(doc.at("out_dir").get<std::string>());
    }
    return cfg;
}

json ExperimentConfig::to_json() const {
    json src;
    if (scene)
        src["scene"] = scene_to_json(*scene);
    if (archive)
        src["archive"] = archive->string();
    json masks_json{{"seed", masks.seed}};
    switch (masks.kind) {
    case MaskSelection::Kind::first_k:
        masks_json["kind"] = "first_k";
        masks_json["k"] = masks.k;
        break;
    case MaskSelection::Kind::random:
        masks_json["kind"] = "random";
        masks_json["n"] = masks.n;
        break;
    case MaskSelection::Kind::list:
        masks_json["kind"] = "list";
        masks_json["indices"] = masks.indices;
        break;
    }
    return json{
        {"source", src},
        {"grid",
         {{"f_start_hz", grid.f_start_hz()},
          {"f_stop_hz", grid.f_stop_hz()},
          {"count", grid.count()}}},
        {"fom",
         {{"window_s", fom.window_s},
          {"cutoff_s", fom.cutoff_s},
          {"zero_pad_factor", fom.zero_pad_factor},
          {"spectral_window",
           fom.spectral_window == dsp::SpectralWindow::rectangular ? "rectangular" : "hann"}}},
        {"masks", masks_json},
        {"strategy",
         {{"kind", strategy.name()},
          {"starts", strategy.starts},
          {"max_sweeps", strategy.max_sweeps},
          {"seed", strategy.seed},
          {"n", strategy.n}}},
        {"band_fraction", band_fraction},
        {"out_dir", out_dir.string()},
    };
}

void apply_override(json& doc, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        config_error("--set expects dotted.path=value, got '" + assignment + "'");
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);

    std::string pointer;
    std::istringstream parts(path);
    std::string part;
    while (std::getline(parts, part, '.')) {
        if (part.empty())
            config_error("--set path '" + path + "' has an empty segment");
        pointer += "/" + part;
    }
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value; // plain string
    }
    doc[json::json_pointer(pointer)] = parsed;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
    json doc = json::object();
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open config file " + path.string());
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            config_error(path.string() + ": " + e.what());
        }
    }
    for (const std::string& o : overrides)
        apply_override(doc, o);
    return ExperimentConfig::from_json(doc);
}

} // namespace riscav::cli
