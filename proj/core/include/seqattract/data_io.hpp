#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqattract/bipolar.hpp"
#include "seqattract/dynamics.hpp"
#include "seqattract/learning.hpp"

namespace seqattract {

// Sequence file: "SEQA1", u32 N, u32 T, u8 periodic, then T rows of N bytes
// (0x00 = -1, 0x01 = +1). Integers little-endian.
std::vector<std::uint8_t> encode_sequence(const PatternSequence& seq);
PatternSequence decode_sequence(std::span<const std::uint8_t> bytes);
void save_sequence(const PatternSequence& seq, const std::filesystem::path& path);
PatternSequence load_sequence(const std::filesystem::path& path);

// Checkpoint: "SATN1", u32 N, u32 M, then U (MxN), V (NxM), P (MxN), hidden
// bias (M), visible bias (N) as little-endian f64 in row-major order, then
// the CRC-32 of everything before it.
std::vector<std::uint8_t> encode_checkpoint(const HiddenNetwork& net);
HiddenNetwork decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const HiddenNetwork& net, const std::filesystem::path& path);
HiddenNetwork load_checkpoint(const std::filesystem::path& path);

struct GrayFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, width * height
};

/// Pixel >= threshold maps to +1, otherwise -1; frames are flattened
/// row-major. The result is periodic when the first and last frames
/// binarize to the same pattern.
PatternSequence binarize_frames(std::span<const GrayFrame> frames, int threshold = 128);

// Frames as concatenated binary graymaps ("P5", maxval 255).
std::vector<GrayFrame> load_pgm_frames(const std::filesystem::path& path);
void save_pgm_frames(std::span<const GrayFrame> frames, const std::filesystem::path& path);
std::vector<GrayFrame> decode_pgm_frames(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string render() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  Hyperparams hp;
  std::map<std::string, std::string> settings;
};

/// Build-time `git describe` string ("unknown" outside a checkout).
std::string_view git_describe();

/// Deterministic JSON manifest (keys sorted, no timestamps).
std::string render_manifest(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);
/// Wall-clock timestamp, kept apart from the manifest so reruns diff clean.
void save_timestamp(const std::filesystem::path& path);

}  // namespace seqattract
