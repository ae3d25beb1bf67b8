#pragma once

#include <cstddef>
#include <vector>

#include "seqattract/bipolar.hpp"
#include "seqattract/data_io.hpp"

namespace seqattract {

/// N=2, T=5 cycle (1,1) -> (1,-1) -> (-1,1) -> (-1,-1) -> (1,1). Neuron 0's
/// next state is the XOR of the current state, so no network without hidden
/// units can generate it.
PatternSequence xor_sequence();

/// Two N=10 periodic sequences that contain four patterns a, b, c, d with
/// a + d = b + c whose successors disagree on one neuron (a, d -> +1 and
/// b, c -> -1 or vice versa). No threshold unit separates them, with or
/// without bias, so a visible-only network cannot store either sequence.
PatternSequence toy_sequence_a();
PatternSequence toy_sequence_b();

/// Grayscale frames of a disc circling the centre and a bar sweeping
/// downwards. Consecutive frames overlap heavily. Frames are distinct for
/// frames <= 24 at the default size.
std::vector<GrayFrame> moving_shapes_frames(std::size_t width = 32, std::size_t height = 32,
                                            std::size_t frames = 20);

}  // namespace seqattract
