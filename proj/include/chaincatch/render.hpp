#pragma once

#include <string>
#include <vector>

#include "chaincatch/sim.hpp"

namespace chaincatch {

enum class FrameFormat { Text, Ppm };

struct RenderOptions {
    int every = 1;             // keep cycles divisible by this
    bool k_circle = false;     // ring of radius K around the Catcher
    FrameFormat format = FrameFormat::Text;
    int scale = 4;             // pixels per cell for Ppm
};

struct Frame {
    std::string name;     // file name, e.g. frame_000012.txt or summary.txt
    std::string contents;
};

// Text legend: E/e escapee centre/body, K/k Catcher, M/m chain member, = chain link,
// / and \ dashed slopes, + K circle, ! the pair of a catch made that cycle.
// One frame per sampled cycle plus a summary frame of the final state.
// `header` (e.g. the run manifest) is copied into the summary frame.
std::vector<Frame> render_trace(const GameTrace& trace, const RenderOptions& options,
                                const std::string& header = {});

} // namespace chaincatch
