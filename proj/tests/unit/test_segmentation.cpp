#include <doctest.h>

#include <screamkit/rng.hpp>
#include <screamkit/segmentation.hpp>

using namespace screamkit;

namespace {

AudioClip clip_of(double seconds, double fill = 0.5)
{
    AudioClip c;
    c.samples = {std::vector<double>(static_cast<std::size_t>(std::llround(seconds * 44100)), fill)};
    c.sample_rate = 44100;
    c.source_id = "song";
    return c;
}

} // namespace

TEST_CASE("make_blocks: block starts and counts")
{
    SUBCASE("5 s clip, 2 s blocks, 1 s hop -> 4 blocks")
    {
        const auto blocks = make_blocks(clip_of(5.0));
        REQUIRE(blocks.size() == 4);
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            CHECK(blocks[i].start_time == doctest::Approx(static_cast<double>(i)));
            CHECK(blocks[i].block_index == static_cast<int>(i));
            CHECK(blocks[i].samples.size() == 88200);
            CHECK(blocks[i].source_id == "song");
        }
    }
    SUBCASE("exactly one block at the boundary")
    {
        CHECK(make_blocks(clip_of(2.0)).size() == 1);
    }
    SUBCASE("shorter than one block -> none")
    {
        CHECK(make_blocks(clip_of(1.5)).empty());
    }
}

TEST_CASE("make_blocks: rejects non-canonical clips")
{
    AudioClip stereo;
    stereo.samples = {std::vector<double>(88200, 0.0), std::vector<double>(88200, 0.0)};
    stereo.sample_rate = 44100;
    CHECK_THROWS_AS(make_blocks(stereo), std::invalid_argument);

    AudioClip wrong_rate = clip_of(3.0);
    wrong_rate.sample_rate = 22050;
    CHECK_THROWS_AS(make_blocks(wrong_rate), std::invalid_argument);

    CHECK_THROWS_AS(make_blocks(clip_of(3.0), 2.0, 3.0), std::invalid_argument); // hop > block
    CHECK_THROWS_AS(make_blocks(clip_of(3.0), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("make_blocks: count formula and sample mapping for random durations")
{
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const double seconds = rng.uniform() * 10.0;
        AudioClip c;
        const std::size_t len = static_cast<std::size_t>(std::llround(seconds * 44100));
        c.samples = {std::vector<double>(len)};
        for (std::size_t i = 0; i < len; ++i) c.samples[0][i] = static_cast<double>(i);
        c.sample_rate = 44100;
        c.source_id = "r";

        const auto blocks = make_blocks(c);
        const std::size_t expected =
            len >= 88200 ? (len - 88200) / 44100 + 1 : 0;
        REQUIRE(blocks.size() == expected);

        // every block sample maps back into the clip at offset start_time * rate
        for (const auto& b : blocks) {
            const std::size_t off = static_cast<std::size_t>(std::llround(b.start_time * 44100));
            CHECK(b.samples.front() == doctest::Approx(static_cast<double>(off)));
            CHECK(b.samples.back() == doctest::Approx(static_cast<double>(off + 88199)));
        }
    }
}
