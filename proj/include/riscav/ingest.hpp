// SPDX-License-Identifier: Apache-2.0
//
// Measured-data ingestion: the sweep-archive format (manifest.json plus one
// CSV per mask) and a 2-port Touchstone v1 subset reader, so the analysis
// pipeline runs unchanged on recorded campaigns.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riscav/core.hpp"

namespace riscav::ingest {

inline constexpr int kArchiveVersion = 1;

// On-disk index of a campaign. Field names are part of the external contract
// (see docs/FORMATS.md).
struct SweepArchiveManifest {
    int version = kArchiveVersion;
    int n_elements = 0;
    core::FrequencyGrid grid{1.0, 2.0, 2};
    std::vector<std::pair<std::uint64_t, std::string>> entries; // (mask index, file)
    std::string magnitude_convention = "linear-complex";
};

// Frequency axis and S21 of one 2-port Touchstone file, converted to linear
// complex values. Kept as raw vectors because a file may carry any number of
// rows; to_sweep() imposes the uniform-grid contract.
struct TouchstoneData {
    std::vector<double> frequencies_hz;
    std::vector<core::Complex> s21;

    core::ChannelSweep to_sweep() const;
};

// Supported option line: `# HZ|KHZ|MHZ|GHZ S RI|MA|DB R <x>` (tokens in any
// order, Touchstone defaults apply); `!` starts a comment; data rows carry
// the nine 2-port columns. Malformed content raises a ParseError naming the
// line.
TouchstoneData parse_touchstone_s2p(std::string_view text);

SweepArchiveManifest read_manifest(const std::filesystem::path& manifest_path);

// Loads a full campaign. Every entry file must exist and match the manifest
// grid exactly (row count and frequency column); no interpolation ever
// happens on load.
core::MaskSweepDataset load_sweep_archive(const std::filesystem::path& manifest_path);

// Writes manifest.json plus one mask_<index>.csv per mask into `directory`
// and returns the manifest path. Numbers are serialized round-trip exact, so
// load(export(dataset)) reproduces the samples bit for bit.
std::filesystem::path export_sweep_archive(const core::MaskSweepDataset& dataset,
                                           const std::filesystem::path& directory);

} // namespace riscav::ingest
