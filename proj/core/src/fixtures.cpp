#include "seqattract/fixtures.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "seqattract/errors.hpp"

namespace seqattract {

PatternSequence xor_sequence() { return PatternSequence::from_strings({"++", "+-", "-+", "--", "++"}); }

// Blocks: u = neurons 0-2, v = 3-5, c = 6-9.
PatternSequence toy_sequence_a() {
  // (+u,+v) -> (+u,-v) -> (-u,+v) -> (-u,-v) -> back; neuron 0 follows XOR.
  return PatternSequence::from_strings({
      "++++++" "+-+-",
      "+++---" "+-+-",
      "---+++" "+-+-",
      "------" "+-+-",
      "++++++" "+-+-",
  });
}

PatternSequence toy_sequence_b() {
  // x1 + x5 = x2 + x4, while neurons 1, 3 and 5 of the successors agree on
  // (x1, x5) and take the opposite value on (x2, x4).
  return PatternSequence::from_strings({
      "-+++++--+-",
      "++++++-+-+",
      "----+--+--",
      "--+-----+-",
      "+-+----+-+",
      "-+++++--+-",
  });
}

std::vector<GrayFrame> moving_shapes_frames(std::size_t width, std::size_t height, std::size_t frames) {
  if (width < 8 || height < 8 || frames < 1) {
    throw PreconditionError(fmt::format("moving_shapes_frames: {}x{} with {} frames", width, height, frames));
  }
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double radius = 0.2 * std::min(w, h);
  const double orbit = 0.25 * std::min(w, h);
  const double bar_half = 0.06 * h + 0.5;
  std::vector<GrayFrame> out;
  out.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(frames);
    const double cx = 0.5 * w + orbit * std::cos(phase);
    const double cy = 0.5 * h + orbit * std::sin(phase);
    const double bar_y = h * static_cast<double>(t) / static_cast<double>(frames);
    GrayFrame fr{width, height, std::vector<std::uint8_t>(width * height, 0)};
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const double px = static_cast<double>(x) + 0.5;
        const double py = static_cast<double>(y) + 0.5;
        const double d = std::hypot(px - cx, py - cy);
        int v = 0;
        if (d <= radius) v = 255 - static_cast<int>(80.0 * d / radius);
        if (std::abs(py - bar_y) <= bar_half && x < width / 2) v = std::max(v, 200);
        fr.pixels[y * width + x] = static_cast<std::uint8_t>(v);
      }
    }
    out.push_back(std::move(fr));
  }
  return out;
}

}  // namespace seqattract
