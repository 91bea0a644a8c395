#include <string>
#include <vector>

#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"
#include "seawake/parallel.hpp"

namespace seawake::flow {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "flowlab: " + msg);
}

}  // namespace

Frame warp(const Frame& frame, const FlowField& flow, double factor) {
    if (frame.width != flow.width || frame.height != flow.height)
        fail(ErrorCode::contract, "warp: flow field dimensions do not match the frame");
    if (factor == 0.0) return frame;
    Frame out = Frame::make(frame.width, frame.height, frame.channels);
    parallel_for(0, frame.height, [&](int y) {
        for (int x = 0; x < frame.width; ++x) {
            const double sx = x - factor * flow.dx_at(x, y);
            const double sy = y - factor * flow.dy_at(x, y);
            for (int c = 0; c < frame.channels; ++c)
                out.at(x, y, c) = sample_bilinear(frame, sx, sy, c);
        }
    });
    return out;
}

std::vector<Frame> extrapolate_sequence(const Frame& first, const Frame& last, int n_missing,
                                        const FlowParams& params) {
    if (n_missing < 1) fail(ErrorCode::contract, "extrapolate_sequence requires n_missing >= 1");
    if (first.width != last.width || first.height != last.height ||
        first.channels != last.channels)
        fail(ErrorCode::contract, "extrapolate_sequence bounding frames must match");

    const FlowField field = farneback_flow(to_luma(first), to_luma(last), params);
    std::vector<Frame> out;
    out.reserve(static_cast<std::size_t>(n_missing));
    for (int i = 1; i <= n_missing; ++i)
        out.push_back(warp(first, field, static_cast<double>(i) / (n_missing + 1)));
    return out;
}

}  // namespace seawake::flow
