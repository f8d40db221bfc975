#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include "screamkit/audio.hpp"

namespace screamkit {

/// Identity of one block within the corpus.
struct BlockRef {
    std::string source_id;
    int block_index = 0;
    auto operator<=>(const BlockRef&) const = default;
};

/// One observation window: block_len seconds of mono audio at the pipeline rate.
struct Block {
    std::vector<double> samples;
    double start_time = 0.0; // seconds from clip start
    std::string source_id;
    int block_index = 0;
};

/// Slice a canonical (mono, 44100 Hz) clip into overlapping blocks starting at
/// 0, hop, 2*hop, ... A trailing segment shorter than block_len is dropped.
inline std::vector<Block> make_blocks(const AudioClip& clip, double block_len = 2.0,
                                      double hop = 1.0)
{
    if (clip.n_channels() != 1)
        throw std::invalid_argument("make_blocks: clip must be mono");
    if (clip.sample_rate != kPipelineRate)
        throw std::invalid_argument("make_blocks: clip must be at 44100 Hz");
    if (block_len <= 0.0) throw std::invalid_argument("make_blocks: block_len must be positive");
    if (hop <= 0.0 || hop > block_len)
        throw std::invalid_argument("make_blocks: need 0 < hop <= block_len");

    const auto& x = clip.samples[0];
    const std::size_t block_samples = static_cast<std::size_t>(std::llround(block_len * clip.sample_rate));
    const std::size_t hop_samples = static_cast<std::size_t>(std::llround(hop * clip.sample_rate));

    std::vector<Block> blocks;
    if (x.size() < block_samples) return blocks;

    const std::size_t count = (x.size() - block_samples) / hop_samples + 1;
    blocks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Block b;
        b.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(i * hop_samples),
                         x.begin() + static_cast<std::ptrdiff_t>(i * hop_samples + block_samples));
        b.start_time = static_cast<double>(i) * hop;
        b.source_id = clip.source_id;
        b.block_index = static_cast<int>(i);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

} // namespace screamkit
