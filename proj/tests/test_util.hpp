#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "motioneval/synth.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(MOTIONEVAL_TEST_DATA_DIR "/") + name;
}

// Uniform [0,1) doubles from the same generator the reference-data script
// used, so a seed recreates the exact frozen input.
inline std::vector<double> uniforms(std::uint64_t seed, std::size_t count) {
    motioneval::SplitMix64 rng(seed);
    std::vector<double> out(count);
    for (double& value : out)
        value = rng.next_double();
    return out;
}

} // namespace testutil
