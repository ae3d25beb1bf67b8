#include "seqattract/data_io.hpp"

#include <bit>
#include <cctype>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <zlib.h>

#include "seqattract/errors.hpp"

#ifndef SEQATTRACT_GIT_DESCRIBE
#define SEQATTRACT_GIT_DESCRIBE "unknown"
#endif

namespace seqattract {

namespace {

constexpr std::string_view kSeqMagic = "SEQA1";
constexpr std::string_view kNetMagic = "SATN1";

class Writer {
 public:
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::uint8_t u8() { return in_[pos_++]; }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void check_magic(std::span<const std::uint8_t> bytes, std::string_view magic, std::string_view what) {
  if (bytes.size() < magic.size() || std::memcmp(bytes.data(), magic.data(), magic.size()) != 0) {
    throw FormatError(fmt::format("{}: bad magic (expected \"{}\")", what, magic));
  }
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks so large checkpoints are fine
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - off, 1U << 30);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(chunk));
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t checked_u32(std::size_t v, std::string_view what) {
  if (v > 0xFFFFFFFFULL) throw PreconditionError(fmt::format("{} = {} does not fit the file header", what, v));
  return static_cast<std::uint32_t>(v);
}

void write_matrix(Writer& w, const RowMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
}

RowMatrix read_matrix(Reader& r, std::size_t rows, std::size_t cols) {
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
  return m;
}

Eigen::VectorXd read_vector(Reader& r, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f64();
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_sequence(const PatternSequence& seq) {
  Writer w;
  w.bytes(kSeqMagic);
  w.u32(checked_u32(seq.dim(), "N"));
  w.u32(checked_u32(seq.length(), "T"));
  w.u8(seq.periodic() ? 1 : 0);
  for (const auto& x : seq.patterns())
    for (Bipolar b : x.entries()) w.u8(b > 0 ? 1 : 0);
  return std::move(w.data());
}

PatternSequence decode_sequence(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t header = kSeqMagic.size() + 4 + 4 + 1;
  check_magic(bytes, kSeqMagic, "sequence file");
  if (bytes.size() < header) {
    throw TruncatedError(
        fmt::format("sequence file: truncated header (expected {} bytes, got {})", header, bytes.size()));
  }
  Reader r(bytes.subspan(kSeqMagic.size()));
  const std::uint64_t n = r.u32();
  const std::uint64_t t = r.u32();
  const std::uint8_t flag = r.u8();
  if (n == 0 || t == 0) throw IllegalValueError(fmt::format("sequence file: N={} T={} must be >= 1", n, t));
  if (flag > 1) throw IllegalValueError(fmt::format("sequence file: periodic flag {} at offset 13", flag));
  const std::uint64_t expected = header + n * t;
  if (bytes.size() < expected) {
    throw TruncatedError(
        fmt::format("sequence file: truncated payload (expected {} bytes, got {})", expected, bytes.size()));
  }
  if (bytes.size() > expected) {
    throw FormatError(
        fmt::format("sequence file: {} trailing bytes after payload of {} bytes", bytes.size() - expected, expected));
  }
  std::vector<BipolarVector> pats;
  pats.reserve(t);
  std::size_t off = header;
  for (std::uint64_t k = 0; k < t; ++k) {
    std::vector<Bipolar> row(n);
    for (std::uint64_t i = 0; i < n; ++i, ++off) {
      const std::uint8_t b = bytes[off];
      if (b > 1) throw IllegalValueError(fmt::format("sequence file: illegal byte 0x{:02x} at offset {}", b, off));
      row[i] = b ? Bipolar{1} : Bipolar{-1};
    }
    pats.emplace_back(std::move(row));
  }
  if (flag == 1 && !(pats.front() == pats.back())) {
    throw IllegalValueError("sequence file: periodic flag set but x(1) != x(T)");
  }
  return PatternSequence(std::move(pats), flag == 1);
}

void save_sequence(const PatternSequence& seq, const std::filesystem::path& path) {
  write_file(path, encode_sequence(seq));
}

PatternSequence load_sequence(const std::filesystem::path& path) {
  return decode_sequence(read_file(path));
}

std::vector<std::uint8_t> encode_checkpoint(const HiddenNetwork& net) {
  Writer w;
  w.bytes(kNetMagic);
  w.u32(checked_u32(net.visible_dim(), "N"));
  w.u32(checked_u32(net.hidden_dim(), "M"));
  write_matrix(w, net.hidden_weights());
  write_matrix(w, net.visible_weights());
  write_matrix(w, net.projection());
  for (double v : net.hidden_bias()) w.f64(v);
  for (double v : net.visible_bias()) w.f64(v);
  w.u32(crc32_of(w.data()));
  return std::move(w.data());
}

HiddenNetwork decode_checkpoint(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t header = kNetMagic.size() + 8;
  check_magic(bytes, kNetMagic, "checkpoint");
  if (bytes.size() < header + 4) {
    throw TruncatedError(
        fmt::format("checkpoint: truncated header (expected {} bytes, got {})", header + 4, bytes.size()));
  }
  Reader r(bytes.subspan(kNetMagic.size()));
  const std::uint64_t n = r.u32();
  const std::uint64_t m = r.u32();
  if (n == 0 || m == 0) throw IllegalValueError(fmt::format("checkpoint: N={} M={} must be >= 1", n, m));
  const std::uint64_t expected = header + 8 * (3 * n * m + n + m) + 4;
  if (bytes.size() < expected) {
    throw TruncatedError(fmt::format("checkpoint: truncated (expected {} bytes, got {})", expected, bytes.size()));
  }
  if (bytes.size() > expected) {
    throw ShapeError(fmt::format("checkpoint: header N={} M={} implies {} bytes, file has {}", n, m, expected,
                                 bytes.size()));
  }
  Reader tail(bytes.subspan(expected - 4));
  const std::uint32_t stored = tail.u32();
  const std::uint32_t actual = crc32_of(bytes.first(expected - 4));
  if (stored != actual) {
    throw ChecksumError(fmt::format("checkpoint: checksum mismatch (stored {:08x}, computed {:08x})", stored, actual));
  }
  RowMatrix U = read_matrix(r, m, n);
  RowMatrix V = read_matrix(r, n, m);
  RowMatrix P = read_matrix(r, m, n);
  Eigen::VectorXd bh = read_vector(r, m);
  Eigen::VectorXd bv = read_vector(r, n);
  try {
    return HiddenNetwork(std::move(U), std::move(V), std::move(P), std::move(bh), std::move(bv));
  } catch (const NumericError& e) {
    throw IllegalValueError(fmt::format("checkpoint: {}", e.what()));
  }
}

void save_checkpoint(const HiddenNetwork& net, const std::filesystem::path& path) {
  write_file(path, encode_checkpoint(net));
}

HiddenNetwork load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

PatternSequence binarize_frames(std::span<const GrayFrame> frames, int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw PreconditionError(fmt::format("binarize_frames: threshold {} outside [0, 255]", threshold));
  }
  if (frames.empty()) throw PreconditionError("binarize_frames: no frames");
  const std::size_t w = frames.front().width;
  const std::size_t h = frames.front().height;
  std::vector<BipolarVector> pats;
  pats.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const GrayFrame& fr = frames[f];
    if (fr.width != w || fr.height != h) {
      throw ShapeError(fmt::format("binarize_frames: frame {} is {}x{}, frame 0 is {}x{}", f, fr.width, fr.height, w, h));
    }
    if (fr.pixels.size() != w * h) {
      throw ShapeError(fmt::format("binarize_frames: frame {} has {} pixels, expected {}", f, fr.pixels.size(), w * h));
    }
    std::vector<Bipolar> row(fr.pixels.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = fr.pixels[i] >= threshold ? Bipolar{1} : Bipolar{-1};
    pats.emplace_back(std::move(row));
  }
  const bool periodic = pats.size() > 1 && pats.front() == pats.back();
  return PatternSequence(std::move(pats), periodic);
}

std::vector<GrayFrame> decode_pgm_frames(std::span<const std::uint8_t> bytes) {
  std::vector<GrayFrame> frames;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](std::string_view what) {
    skip_space();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && digits < 9) {
      v = v * 10 + (bytes[pos++] - '0');
      ++digits;
    }
    if (digits == 0) throw FormatError(fmt::format("graymap: expected {} at offset {}", what, pos));
    return v;
  };
  for (;;) {
    skip_space();
    if (pos >= bytes.size()) break;
    if (pos + 2 > bytes.size() || bytes[pos] != 'P' || bytes[pos + 1] != '5') {
      throw FormatError(fmt::format("graymap: expected \"P5\" at offset {}", pos));
    }
    pos += 2;
    GrayFrame fr;
    fr.width = read_int("width");
    fr.height = read_int("height");
    const std::size_t maxval = read_int("maxval");
    if (fr.width == 0 || fr.height == 0) throw IllegalValueError("graymap: zero-sized frame");
    if (maxval != 255) throw IllegalValueError(fmt::format("graymap: maxval {} (only 255 supported)", maxval));
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw FormatError("graymap: missing separator before raster");
    ++pos;
    const std::size_t need = fr.width * fr.height;
    if (bytes.size() - pos < need) {
      throw TruncatedError(fmt::format("graymap: frame {} truncated (expected {} raster bytes, got {})",
                                       frames.size(), need, bytes.size() - pos));
    }
    fr.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    pos += need;
    frames.push_back(std::move(fr));
  }
  if (frames.empty()) throw FormatError("graymap: no frames");
  return frames;
}

std::vector<GrayFrame> load_pgm_frames(const std::filesystem::path& path) {
  return decode_pgm_frames(read_file(path));
}

void save_pgm_frames(std::span<const GrayFrame> frames, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out;
  for (const auto& fr : frames) {
    if (fr.pixels.size() != fr.width * fr.height) throw ShapeError("save_pgm_frames: pixel count mismatch");
    const std::string head = fmt::format("P5\n{} {}\n255\n", fr.width, fr.height);
    out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), fr.pixels.begin(), fr.pixels.end());
  }
  write_file(path, out);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("error reading {}", path.string()));
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw PreconditionError("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw ShapeError(fmt::format("CsvTable: row has {} cells, header has {}", cells.size(), header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        s += '"';
        for (char c : cells[i]) s += c == '"' ? std::string("\"\"") : std::string(1, c);
        s += '"';
      } else {
        s += cells[i];
      }
    }
    return s + '\n';
  };
  std::string out = line(header_);
  for (const auto& r : rows_) out += line(r);
  return out;
}

void CsvTable::save(const std::filesystem::path& path) const {
  const std::string s = render();
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::string_view git_describe() { return SEQATTRACT_GIT_DESCRIBE; }

std::string render_manifest(const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["seed"] = manifest.seed;
  j["git_describe"] = std::string(git_describe());
  j["hyperparams"] = {
      {"eta", manifest.hp.eta},         {"kappa", manifest.hp.kappa},
      {"epochs", manifest.hp.epochs},   {"init_std", manifest.hp.init_std},
      {"theta", manifest.hp.theta},
  };
  nlohmann::json settings = nlohmann::json::object();
  for (const auto& [k, v] : manifest.settings) settings[k] = v;
  j["settings"] = settings;
  return j.dump(2) + "\n";
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  const std::string s = render_manifest(manifest);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void save_timestamp(const std::filesystem::path& path) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  const std::string s = fmt::format("{{\"unix_time\": {}}}\n", secs);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace seqattract
