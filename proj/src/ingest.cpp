// SPDX-License-Identifier: Apache-2.0
#include "riscav/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riscav/errors.hpp"
#include "riscav/format.hpp"
#include "riscav/io_util.hpp"

namespace riscav::ingest {

namespace {

using nlohmann::json;

std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int line_no) {
    try {
        std::size_t consumed = 0;
        double v = std::stod(tok, &consumed);
        if (consumed != tok.size() || !std::isfinite(v))
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("'" + tok + "' is not a finite number", line_no);
    }
}

enum class SampleFormat { ri, ma, db };

core::Complex decode_pair(SampleFormat fmt, double a, double b) {
    switch (fmt) {
    case SampleFormat::ri:
        return {a, b};
    case SampleFormat::ma:
        return std::polar(a, b * std::numbers::pi / 180.0);
    case SampleFormat::db:
        return std::polar(std::pow(10.0, a / 20.0), b * std::numbers::pi / 180.0);
    }
    return {};
}

// CSV with header `freq_hz,re,im`; must agree with the manifest grid.
std::vector<core::Complex> read_mask_csv(const std::filesystem::path& path,
                                         const core::FrequencyGrid& grid) {
    std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<core::Complex> samples;
    samples.reserve(static_cast<std::size_t>(grid.count()));
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line_no == 1) {
            if (line != "freq_hz,re,im")
                throw IoError(path.string() + ": unexpected CSV header '" + line + "'");
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ','))
            values.push_back(parse_number(cell, line_no));
        if (values.size() != 3)
            throw IoError(path.string() + ": line " + std::to_string(line_no) +
                          ": expected 3 columns, got " + std::to_string(values.size()));
        int i = static_cast<int>(samples.size());
        if (i >= grid.count())
            throw IoError(path.string() + ": has more rows than the manifest grid (" +
                          std::to_string(grid.count()) + " points)");
        double expected = grid.frequency(i);
        if (std::abs(values[0] - expected) > 1e-9 * expected)
            throw IoError(path.string() + ": line " + std::to_string(line_no) + ": frequency " +
                          format_double(values[0]) + " does not match the manifest grid value " +
                          format_double(expected));
        samples.emplace_back(values[1], values[2]);
    }
    if (static_cast<int>(samples.size()) != grid.count())
        throw IoError(path.string() + ": has " + std::to_string(samples.size()) +
                      " rows but the manifest grid has " + std::to_string(grid.count()) +
                      " points");
    return samples;
}

} // namespace

core::ChannelSweep TouchstoneData::to_sweep() const {
    if (frequencies_hz.size() < 2)
        throw ValidationError("Touchstone data needs at least 2 rows to form a sweep");
    double f0 = frequencies_hz.front();
    double f1 = frequencies_hz.back();
    int count = static_cast<int>(frequencies_hz.size());
    core::FrequencyGrid grid(f0, f1, count);
    for (int i = 0; i < count; ++i) {
        double expected = grid.frequency(i);
        if (std::abs(frequencies_hz[static_cast<std::size_t>(i)] - expected) >
            1e-6 * grid.spacing_hz())
            throw ValidationError("Touchstone frequency axis is not uniform at row " +
                                  std::to_string(i + 1));
    }
    return core::ChannelSweep(grid, s21);
}

TouchstoneData parse_touchstone_s2p(std::string_view text) {
    TouchstoneData data;
    double unit_scale = 1.0e9; // Touchstone default unit is GHz
    SampleFormat fmt = SampleFormat::ma;
    bool saw_option_line = false;

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (auto bang = line.find('!'); bang != std::string::npos)
            line.erase(bang);
        std::vector<std::string> fields = split_fields(line);
        if (fields.empty())
            continue;

        if (fields[0] == "#") {
            if (saw_option_line)
                throw ParseError("duplicate option line", line_no);
            saw_option_line = true;
            bool expect_reference = false;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                std::string tok = to_upper(fields[i]);
                if (expect_reference) {
                    parse_number(fields[i], line_no); // value validated, not used
                    expect_reference = false;
                } else if (tok == "HZ") {
                    unit_scale = 1.0;
                } else if (tok == "KHZ") {
                    unit_scale = 1.0e3;
                } else if (tok == "MHZ") {
                    unit_scale = 1.0e6;
                } else if (tok == "GHZ") {
                    unit_scale = 1.0e9;
                } else if (tok == "S") {
                    // scattering parameters, the only supported kind
                } else if (tok == "Y" || tok == "Z" || tok == "H" || tok == "G") {
                    throw ParseError("unsupported parameter type '" + fields[i] + "'", line_no);
                } else if (tok == "RI") {
                    fmt = SampleFormat::ri;
                } else if (tok == "MA") {
                    fmt = SampleFormat::ma;
                } else if (tok == "DB") {
                    fmt = SampleFormat::db;
                } else if (tok == "R") {
                    expect_reference = true;
                } else {
                    throw ParseError("unrecognized option token '" + fields[i] + "'", line_no);
                }
            }
            if (expect_reference)
                throw ParseError("option 'R' is missing its resistance value", line_no);
            continue;
        }

        // Data row: freq then ri/ma/db pairs for S11 S21 S12 S22.
        if (fields.size() == 3 || fields.size() == 5)
            throw ParseError("row has " + std::to_string(fields.size()) +
                             " columns; only 2-port files (9 columns) are supported", line_no);
        if (fields.size() != 9)
            throw ParseError("expected 9 columns, got " + std::to_string(fields.size()), line_no);
        double f = parse_number(fields[0], line_no) * unit_scale;
        if (!data.frequencies_hz.empty() && !(f > data.frequencies_hz.back()))
            throw ParseError("frequency " + format_double(f) +
                             " Hz is not strictly increasing", line_no);
        double a = parse_number(fields[3], line_no);
        double b = parse_number(fields[4], line_no);
        data.frequencies_hz.push_back(f);
        data.s21.push_back(decode_pair(fmt, a, b));
    }
    if (data.frequencies_hz.empty())
        throw ParseError("no data rows found", line_no == 0 ? 1 : line_no);
    return data;
}

SweepArchiveManifest read_manifest(const std::filesystem::path& manifest_path) {
    json doc;
    try {
        doc = json::parse(read_text_file(manifest_path));
    } catch (const json::exception& e) {
        throw IoError(manifest_path.string() + ": invalid JSON: " + e.what());
    }
    try {
        SweepArchiveManifest m{
            doc.at("version").get<int>(),
            doc.at("n_elements").get<int>(),
            core::FrequencyGrid(doc.at("grid").at("f_start_hz").get<double>(),
                                doc.at("grid").at("f_stop_hz").get<double>(),
                                doc.at("grid").at("count").get<int>()),
            {},
            doc.value("magnitude_convention", std::string("linear-complex")),
        };
        if (m.version != kArchiveVersion)
            throw IoError(manifest_path.string() + ": unsupported archive version " +
                          std::to_string(m.version));
        if (m.n_elements < 1 || m.n_elements > core::Mask::kMaxElements)
            throw IoError(manifest_path.string() + ": n_elements out of range");
        if (m.magnitude_convention != "linear-complex")
            throw IoError(manifest_path.string() + ": unsupported magnitude convention '" +
                          m.magnitude_convention + "'");
        for (const json& e : doc.at("entries"))
            m.entries.emplace_back(e.at("mask_index").get<std::uint64_t>(),
                                   e.at("file").get<std::string>());
        return m;
    } catch (const json::exception& e) {
        throw IoError(manifest_path.string() + ": malformed manifest: " + e.what());
    } catch (const ValidationError& e) {
        throw IoError(manifest_path.string() + ": malformed manifest: " + e.what());
    }
}

core::MaskSweepDataset load_sweep_archive(const std::filesystem::path& manifest_path) {
    SweepArchiveManifest manifest = read_manifest(manifest_path);
    if (manifest.entries.empty())
        throw IoError(manifest_path.string() + ": archive has no entries");
    std::filesystem::path base = manifest_path.parent_path();

    std::uint64_t limit = std::uint64_t{1} << manifest.n_elements;
    std::set<std::uint64_t> seen;
    std::vector<core::Mask> masks;
    std::vector<core::ChannelSweep> sweeps;
    for (const auto& [index, file] : manifest.entries) {
        if (index >= limit)
            throw IoError(manifest_path.string() + ": mask index " + std::to_string(index) +
                          " out of range for " + std::to_string(manifest.n_elements) +
                          " elements");
        if (!seen.insert(index).second)
            throw IoError(manifest_path.string() + ": duplicate mask index " +
                          std::to_string(index));
        std::filesystem::path entry_path = base / file;
        if (!std::filesystem::exists(entry_path))
            throw IoError(manifest_path.string() + ": entry file " + entry_path.string() +
                          " is missing");
        masks.push_back(core::Mask::from_index(index, manifest.n_elements));
        sweeps.emplace_back(manifest.grid, read_mask_csv(entry_path, manifest.grid));
    }
    return core::MaskSweepDataset(std::move(masks), std::move(sweeps),
                                  core::MaskSweepDataset::Origin::measured);
}

std::filesystem::path export_sweep_archive(const core::MaskSweepDataset& dataset,
                                           const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec)
        throw IoError("cannot create " + directory.string() + ": " + ec.message());

    const core::FrequencyGrid& grid = dataset.grid();
    json entries = json::array();
    for (int m = 0; m < dataset.size(); ++m) {
        const core::Mask& mask = dataset.masks()[static_cast<std::size_t>(m)];
        std::string file = "mask_" + std::to_string(mask.to_index()) + ".csv";
        std::string csv = "freq_hz,re,im\n";
        const auto& samples = dataset.sweeps()[static_cast<std::size_t>(m)].samples();
        for (int j = 0; j < grid.count(); ++j) {
            const core::Complex& s = samples[static_cast<std::size_t>(j)];
            csv += format_double(grid.frequency(j));
            csv += ',';
            csv += format_double(s.real());
            csv += ',';
            csv += format_double(s.imag());
            csv += '\n';
        }
        atomic_write(directory / file, csv);
        entries.push_back({{"mask_index", mask.to_index()}, {"file", file}});
    }

    json manifest = {
        {"version", kArchiveVersion},
        {"n_elements", dataset.element_count()},
        {"grid",
         {{"f_start_hz", grid.f_start_hz()},
          {"f_stop_hz", grid.f_stop_hz()},
          {"count", grid.count()}}},
        {"magnitude_convention", "linear-complex"},
        {"origin",
         dataset.origin() == core::MaskSweepDataset::Origin::simulated ? "simulated" : "measured"},
        {"entries", entries},
    };
    std::filesystem::path manifest_path = directory / "manifest.json";
    atomic_write(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

} // namespace riscav::ingest
