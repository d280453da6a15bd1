// SPDX-License-Identifier: Apache-2.0
#include "riscav/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "riscav/errors.hpp"
#include "riscav/format.hpp"
#include "riscav/ingest.hpp"
#include "riscav/io_util.hpp"
#include "riscav/optim.hpp"
#include "riscav/rng.hpp"
#include "riscav/svg.hpp"
#include "riscav/threading.hpp"

namespace riscav::cli {

namespace {

using nlohmann::json;

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::filesystem::path resolve_out_dir(const ExperimentConfig& config, const RunOptions& options) {
    return options.out_dir.value_or(config.out_dir);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// Reruns refuse to overwrite existing artifacts unless --force.
void refuse_existing(const std::filesystem::path& dir, const std::vector<std::string>& names,
                     bool force) {
    if (force)
        return;
    for (const std::string& name : names) {
        std::filesystem::path p = dir / name;
        if (std::filesystem::exists(p))
            throw IoError(p.string() + " already exists; rerun with --force to overwrite");
    }
}

std::unique_ptr<optim::ChannelProvider> make_provider(const ExperimentConfig& config,
                                                      int threads) {
    if (config.simulated()) {
        physics::Scene scene = physics::Scene::build(*config.scene);
        return std::make_unique<optim::SimulatedChannelProvider>(std::move(scene), config.grid,
                                                                 threads);
    }
    return std::make_unique<optim::MeasuredChannelProvider>(
        ingest::load_sweep_archive(*config.archive));
}

// Simulated campaign for the configured mask list.
core::MaskSweepDataset simulate_dataset(const ExperimentConfig& config, const RunOptions& options,
                                        int threads) {
    physics::Scene scene = physics::Scene::build(*config.scene);
    int n_elements = std::max(scene.ris_count(), 1);

    MaskSelection selection = config.masks;
    if (options.mask_count) {
        selection.k = *options.mask_count;
        selection.n = *options.mask_count;
    }
    std::vector<core::Mask> masks = selection.materialize(n_elements);

    physics::SweepEngine engine(std::move(scene), config.grid, threads);
    std::vector<std::optional<core::ChannelSweep>> slots(masks.size());
    parallel_for(masks.size(), threads, [&](std::size_t i) { slots[i] = engine.sweep(masks[i]); });

    std::vector<core::ChannelSweep> sweeps;
    sweeps.reserve(masks.size());
    for (auto& s : slots)
        sweeps.push_back(std::move(*s));
    return core::MaskSweepDataset(std::move(masks), std::move(sweeps),
                                  core::MaskSweepDataset::Origin::simulated);
}

std::string grid_description(const core::FrequencyGrid& grid) {
    return format_sig(grid.f_start_hz() / 1e9, 6) + "-" + format_sig(grid.f_stop_hz() / 1e9, 6) +
           " GHz, " + std::to_string(grid.count()) + " points";
}

struct LabelReport {
    std::string label;
    std::optional<std::uint64_t> mask_index;
    double fom = 0.0;
    double delay_spread_s = 0.0;
};

std::string csv_for_cir(const core::Cir& cir) {
    std::string csv = "t_s,re,im,abs2\n";
    for (int i = 0; i < cir.size(); ++i) {
        const core::Complex& s = cir.samples()[static_cast<std::size_t>(i)];
        csv += format_double(cir.time(i));
        csv += ',';
        csv += format_double(s.real());
        csv += ',';
        csv += format_double(s.imag());
        csv += ',';
        csv += format_double(std::norm(s));
        csv += '\n';
    }
    return csv;
}

optim::SearchResult run_strategy(const optim::ChannelProvider& provider,
                                 const ExperimentConfig& config, int threads) {
    switch (config.strategy.kind) {
    case StrategyConfig::Kind::exhaustive:
        return optim::exhaustive_search(provider, config.fom, threads);
    case StrategyConfig::Kind::random:
        return optim::random_search(provider, config.strategy.n, config.strategy.seed, config.fom,
                                    threads);
    case StrategyConfig::Kind::coordinate_descent: {
        // Multi-start: seeded start masks, runs concatenated in order, best
        // via the smallest-index tie rule over the merged trace.
        std::mt19937_64 rng(config.strategy.seed);
        std::vector<core::Mask> starts;
        for (int i = 0; i < config.strategy.starts; ++i)
            starts.push_back(provider.mask_at(bounded_uint64(rng, provider.available_masks())));
        std::vector<optim::TraceEntry> merged;
        for (const core::Mask& start : starts) {
            optim::SearchResult r =
                optim::coordinate_descent(provider, start, config.strategy.max_sweeps, config.fom);
            merged.insert(merged.end(), r.trace.begin(), r.trace.end());
        }
        optim::SearchResult combined{core::Mask::all_off(provider.element_count()), 0.0, {}, 0};
        combined.evaluations = merged.size();
        bool have = false;
        for (const optim::TraceEntry& e : merged) {
            if (!have || e.fom > combined.best_fom ||
                (e.fom == combined.best_fom && e.mask_index < combined.best_mask.to_index())) {
                combined.best_fom = e.fom;
                combined.best_mask = core::Mask::from_index(e.mask_index, provider.element_count());
                have = true;
            }
        }
        combined.trace = std::move(merged);
        return combined;
    }
    }
    throw ValidationError("unknown strategy");
}

} // namespace

void cmd_simulate(const ExperimentConfig& config, const RunOptions& options) {
    if (!config.simulated())
        throw ValidationError("simulate requires a scene source, not an archive");
    Stopwatch timer;
    int threads = resolve_threads(options.threads);

    std::filesystem::path out = resolve_out_dir(config, options);
    refuse_existing(out, {"manifest.json"}, options.force);

    core::MaskSweepDataset dataset = simulate_dataset(config, options, threads);

    ensure_dir(out);
    std::filesystem::path manifest = ingest::export_sweep_archive(dataset, out);

    std::cout << "simulate: " << dataset.size() << " masks, " << grid_description(dataset.grid())
              << ", " << format_sig(timer.seconds(), 3) << " s\n";
    std::cout << "archive: " << manifest.string() << "\n";
}

void cmd_characterize(const ExperimentConfig& config, const RunOptions& options) {
    Stopwatch timer;
    int threads = resolve_threads(options.threads);

    std::filesystem::path out = resolve_out_dir(config, options);
    refuse_existing(out, {"std_vs_freq.csv", "band.json"}, options.force);

    core::MaskSweepDataset dataset =
        config.simulated() ? simulate_dataset(config, options, threads)
                           : ingest::load_sweep_archive(*config.archive);
    if (dataset.size() < 2)
        throw ValidationError("characterize needs >= 2 masks, got " +
                              std::to_string(dataset.size()));

    std::vector<double> deviation = dsp::mask_std(dataset);
    core::FrequencyGrid band = dsp::select_band(deviation, dataset.grid(), config.band_fraction);

    ensure_dir(out);

    std::string csv = "freq_hz,std_linear\n";
    for (int j = 0; j < dataset.grid().count(); ++j) {
        csv += format_double(dataset.grid().frequency(j));
        csv += ',';
        csv += format_double(deviation[static_cast<std::size_t>(j)]);
        csv += '\n';
    }
    atomic_write(out / "std_vs_freq.csv", csv);

    double max_std = *std::max_element(deviation.begin(), deviation.end());
    json band_json = {
        {"f_start_hz", band.f_start_hz()},
        {"f_stop_hz", band.f_stop_hz()},
        {"count", band.count()},
        {"fraction", config.band_fraction},
        {"max_std", max_std},
        {"masks", dataset.size()},
    };
    atomic_write(out / "band.json", band_json.dump(2) + "\n");

    std::cout << "characterize: " << dataset.size() << " masks, "
              << grid_description(dataset.grid()) << ", " << format_sig(timer.seconds(), 3)
              << " s\n";
    std::cout << "selected band: " << grid_description(band) << "\n";
}

void cmd_optimize(const ExperimentConfig& config, const RunOptions& options) {
    Stopwatch timer;
    int threads = resolve_threads(options.threads);

    std::filesystem::path out = resolve_out_dir(config, options);
    std::vector<std::string> artifact_names = {"fom_trace.csv",    "best.json",
                                               "cir_best.csv",     "cir_worst.csv",
                                               "cir_all_off.csv",  "cir_all_on.csv"};
    if (options.svg) {
        artifact_names.push_back("fom_trace.svg");
        artifact_names.push_back("cir_overlay.svg");
    }
    refuse_existing(out, artifact_names, options.force);

    std::unique_ptr<optim::ChannelProvider> provider = make_provider(config, threads);
    optim::SearchResult result = run_strategy(*provider, config, threads);

    // Worst over the trace, smallest index on ties.
    optim::TraceEntry worst = result.trace.front();
    for (const optim::TraceEntry& e : result.trace)
        if (e.fom < worst.fom || (e.fom == worst.fom && e.mask_index < worst.mask_index))
            worst = e;

    int n_elements = provider->element_count();
    std::vector<std::pair<std::string, std::optional<core::Mask>>> labels = {
        {"best", result.best_mask},
        {"worst", core::Mask::from_index(worst.mask_index, n_elements)},
        {"all_off", optim::baseline_masks(n_elements)[0]},
        {"all_on", optim::baseline_masks(n_elements)[1]},
    };
    ensure_dir(out);

    std::string trace_csv = "order,mask_index,fom\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        trace_csv += std::to_string(i);
        trace_csv += ',';
        trace_csv += std::to_string(result.trace[i].mask_index);
        trace_csv += ',';
        trace_csv += format_double(result.trace[i].fom);
        trace_csv += '\n';
    }
    atomic_write(out / "fom_trace.csv", trace_csv);

    std::vector<LabelReport> reports;
    std::vector<std::pair<std::string, core::Cir>> cirs;
    double t_step_s = 0.0;
    for (const auto& [label, mask] : labels) {
        LabelReport rep;
        rep.label = label;
        try {
            core::Cir cir = dsp::cir_from_sweep(provider->sweep_for(*mask), config.fom);
            rep.mask_index = mask->to_index();
            rep.fom = dsp::fom(cir, config.fom);
            rep.delay_spread_s = dsp::delay_spread(cir, config.fom);
            t_step_s = cir.t_step_s();
            atomic_write(out / ("cir_" + label + ".csv"), csv_for_cir(cir));
            cirs.emplace_back(label, std::move(cir));
        } catch (const ValidationError&) {
            // Recorded campaigns may lack a baseline mask; report it as null.
            rep.mask_index.reset();
            std::cout << "note: mask for label '" << label
                      << "' is not available from this source\n";
        }
        reports.push_back(rep);
    }

    json labels_json;
    for (const LabelReport& rep : reports) {
        if (!rep.mask_index) {
            labels_json[rep.label] = nullptr;
            continue;
        }
        labels_json[rep.label] = {{"mask_index", *rep.mask_index},
                                  {"fom", rep.fom},
                                  {"delay_spread_s", rep.delay_spread_s}};
    }
    json best_json = {
        {"strategy", config.strategy.name()},
        {"source", config.simulated() ? "simulated" : "measured"},
        {"evaluations", result.evaluations},
        {"n_elements", n_elements},
        {"grid",
         {{"f_start_hz", config.grid.f_start_hz()},
          {"f_stop_hz", config.grid.f_stop_hz()},
          {"count", config.grid.count()}}},
        {"fom_config",
         {{"window_s", config.fom.window_s},
          {"cutoff_s", config.fom.cutoff_s},
          {"zero_pad_factor", config.fom.zero_pad_factor},
          {"spectral_window",
           config.fom.spectral_window == dsp::SpectralWindow::rectangular ? "rectangular"
                                                                          : "hann"}}},
        {"t_step_s", t_step_s},
        {"labels", labels_json},
    };
    atomic_write(out / "best.json", best_json.dump(2) + "\n");

    if (options.svg) {
        // FOM trace, decimated for very long runs; the best point is marked
        // by a one-point series so it never decimates away.
        std::size_t stride = std::max<std::size_t>(1, result.trace.size() / 4096);
        svg::Series trace_series{"fom", "#1f77b4", {}};
        for (std::size_t i = 0; i < result.trace.size(); i += stride)
            trace_series.points.emplace_back(static_cast<double>(i), result.trace[i].fom);
        svg::Series best_series{"best", "#d62728", {}};
        for (std::size_t i = 0; i < result.trace.size(); ++i)
            if (result.trace[i].mask_index == result.best_mask.to_index())
                best_series.points.emplace_back(static_cast<double>(i), result.trace[i].fom);
        std::vector<svg::Series> trace_plot = {trace_series, best_series};
        svg::PlotSpec trace_spec;
        trace_spec.title = "FOM across evaluated masks";
        trace_spec.x_label = "evaluation order";
        trace_spec.y_label = "FOM";
        svg::write_line_plot(out / "fom_trace.svg", trace_spec, trace_plot);

        std::vector<svg::Series> cir_plot;
        const char* colors[] = {"#d62728", "#9467bd", "#2ca02c", "#1f77b4"};
        int color_index = 0;
        for (const auto& [label, cir] : cirs) {
            svg::Series s{label, colors[color_index++ % 4], {}};
            for (int i = 0; i < cir.size() && cir.time(i) <= config.fom.cutoff_s; ++i)
                s.points.emplace_back(cir.time(i) * 1e9,
                                      std::norm(cir.samples()[static_cast<std::size_t>(i)]));
            cir_plot.push_back(std::move(s));
        }
        svg::PlotSpec cir_spec;
        cir_spec.title = "CIR power profiles";
        cir_spec.x_label = "time [ns]";
        cir_spec.y_label = "|CIR|^2";
        svg::write_line_plot(out / "cir_overlay.svg", cir_spec, cir_plot);
    }

    std::cout << "optimize: " << config.strategy.name() << ", " << result.evaluations
              << " evaluations, " << grid_description(config.grid) << ", "
              << format_sig(timer.seconds(), 3) << " s\n";
    for (const LabelReport& rep : reports) {
        if (!rep.mask_index)
            continue;
        std::cout << "  " << rep.label << ": mask " << *rep.mask_index << ", FOM "
                  << format_sig(rep.fom, 6) << ", delay spread "
                  << format_sig(rep.delay_spread_s * 1e9, 4) << " ns\n";
    }
}

void cmd_report(const std::filesystem::path& directory) {
    std::filesystem::path best_path = directory / "best.json";
    std::vector<std::string> missing;
    if (!std::filesystem::exists(best_path))
        missing.push_back(best_path.string());
    if (!std::filesystem::exists(directory / "fom_trace.csv"))
        missing.push_back((directory / "fom_trace.csv").string());

    json doc;
    if (missing.empty()) {
        try {
            doc = json::parse(read_text_file(best_path));
        } catch (const json::exception& e) {
            throw IoError(best_path.string() + ": invalid JSON: " + e.what());
        }
        for (const auto& [label, entry] : doc.at("labels").items())
            if (!entry.is_null() &&
                !std::filesystem::exists(directory / ("cir_" + label + ".csv")))
                missing.push_back((directory / ("cir_" + label + ".csv")).string());
    }
    if (!missing.empty()) {
        std::string message = "missing artifacts:";
        for (const std::string& m : missing)
            message += " " + m;
        throw IoError(message);
    }

    std::printf("search: %s over %s source, %llu evaluations\n",
                doc.at("strategy").get<std::string>().c_str(),
                doc.at("source").get<std::string>().c_str(),
                static_cast<unsigned long long>(doc.at("evaluations").get<std::uint64_t>()));
    std::printf("%-8s %12s %12s %18s\n", "label", "mask_index", "fom", "delay_spread_ns");
    const char* order[] = {"best", "worst", "all_on", "all_off"};
    double best_fom = 0.0;
    double best_ds = 0.0;
    for (const char* label : order) {
        const json& entry = doc.at("labels").at(label);
        if (entry.is_null()) {
            std::printf("%-8s %12s %12s %18s\n", label, "-", "-", "-");
            continue;
        }
        double f = entry.at("fom").get<double>();
        double ds = entry.at("delay_spread_s").get<double>() * 1e9;
        if (std::string(label) == "best") {
            best_fom = f;
            best_ds = ds;
        }
        std::printf("%-8s %12llu %12.6g %18.6g\n", label,
                    static_cast<unsigned long long>(entry.at("mask_index").get<std::uint64_t>()),
                    f, ds);
    }
    for (const char* label : {"all_on", "all_off", "worst"}) {
        const json& entry = doc.at("labels").at(label);
        if (entry.is_null())
            continue;
        double f = entry.at("fom").get<double>();
        double ds = entry.at("delay_spread_s").get<double>() * 1e9;
        std::printf("best vs %-8s FOM x%.3g, delay spread x%.3g\n", label,
                    f > 0.0 ? best_fom / f : 0.0, ds > 0.0 ? best_ds / ds : 0.0);
    }
}

} // namespace riscav::cli
