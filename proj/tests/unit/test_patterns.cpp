#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fsmr/errors.hpp"
#include "fsmr/patterns.hpp"

using namespace fsmr;

namespace {

std::size_t count_lost(const LossMask& m) {
    std::size_t n = 0;
    for (int y = 0; y < m.size().height; ++y)
        for (int x = 0; x < m.size().width; ++x) n += m.valid(x, y) ? 0 : 1;
    return n;
}

}  // namespace

TEST_CASE("block mask at defaults loses exactly a quarter") {
    const LossMask m = make_block_mask({224, 224}, 16, 32, 8);
    CHECK(count_lost(m) == 224 * 224 / 4);
    CHECK(m.loss_fraction() == 0.25);
    CHECK(!m.valid(8, 8));
    CHECK(!m.valid(23, 23));
    CHECK(m.valid(24, 23));
    CHECK(m.valid(7, 8));
    CHECK(!m.valid(40, 8));
}

TEST_CASE("single lost pixel") {
    const LossMask m = make_block_mask({224, 224}, 1, 224, 0);
    CHECK(m.lost_count() == 1);
    CHECK(!m.valid(0, 0));
}

TEST_CASE("block squares are clipped at the border") {
    const LossMask m = make_block_mask({20, 20}, 8, 16, 12);
    // squares start at 12 and run to 19 in each axis
    CHECK(m.lost_count() == 64);
    const LossMask c = make_block_mask({18, 18}, 8, 16, 12);
    CHECK(c.lost_count() == 36);
}

TEST_CASE("line mask fractions") {
    CHECK(make_line_mask({224, 224}, 4, 16, 0).loss_fraction() == 0.25);
    const LossMask one = make_line_mask({224, 224}, 1, 224, 0);
    CHECK(one.lost_count() == 224);
    for (int x = 0; x < 224; ++x) CHECK_FALSE(one.valid(x, 0));
    CHECK(one.valid(0, 1));
}

TEST_CASE("line mask leaves valid rows above and below every lost pixel") {
    const PatternSpec spec;
    for (const Size size : {Size{224, 224}, Size{300, 257}, Size{64, 64}}) {
        const LossMask m = make_line_mask(size, spec.line_height, spec.line_stride, spec.line_offset);
        for (int y = 0; y < size.height; ++y) {
            for (int x = 0; x < size.width; ++x) {
                if (m.valid(x, y)) continue;
                bool above = false, below = false;
                for (int d = 1; d <= spec.line_stride; ++d) {
                    if (y - d >= 0 && m.valid(x, y - d)) above = true;
                    if (y + d < size.height && m.valid(x, y + d)) below = true;
                }
                REQUIRE(above);
                REQUIRE(below);
            }
        }
    }
}

TEST_CASE("random mask") {
    SUBCASE("p = 0 keeps everything") { CHECK(make_rand_mask({50, 40}, 0.0, 7).lost_count() == 0); }
    SUBCASE("fraction concentrates around p") {
        for (std::uint64_t seed : {1ULL, 2ULL, 42ULL, 12345ULL}) {
            const LossMask m = make_rand_mask({224, 224}, 0.25, seed);
            CHECK(std::abs(m.loss_fraction() - 0.25) <= 0.02);
        }
    }
    SUBCASE("same seed, same mask; other seed, other mask") {
        CHECK(make_rand_mask({224, 224}, 0.25, 9) == make_rand_mask({224, 224}, 0.25, 9));
        CHECK_FALSE(make_rand_mask({224, 224}, 0.25, 9) == make_rand_mask({224, 224}, 0.25, 10));
    }
}

TEST_CASE("SplitMix64 reference sequence") {
    // Published first outputs for seed 0.
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFULL);
    CHECK(g.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(g.next() == 0x06C45D188009454FULL);
    SplitMix64 u(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("masks regenerate bit-identically") {
    for (PatternKind kind : {PatternKind::none, PatternKind::block, PatternKind::line, PatternKind::rand}) {
        PatternSpec spec;
        spec.kind = kind;
        CHECK(make_mask({300, 257}, spec) == make_mask({300, 257}, spec));
    }
}

TEST_CASE("loss fraction is counted from the plane") {
    std::vector<std::uint8_t> v(10, 1);
    v[3] = 0;
    v[7] = 0;
    const LossMask m({5, 2}, v);
    CHECK(m.lost_count() == 2);
    CHECK(m.loss_fraction() == 0.2);
    // nonzero bytes count as valid
    std::vector<std::uint8_t> w(4, 255);
    w[0] = 0;
    CHECK(LossMask({2, 2}, w).lost_count() == 1);
}

TEST_CASE("pattern errors") {
    CHECK_THROWS_AS((void)make_block_mask({64, 64}, 32, 32, 0), InvalidArgument);
    CHECK_THROWS_AS((void)make_block_mask({64, 64}, 0, 32, 0), InvalidArgument);
    CHECK_THROWS_AS((void)make_block_mask({64, 64}, 4, 8, -1), InvalidArgument);
    CHECK_THROWS_AS((void)make_line_mask({64, 64}, 16, 16, 0), InvalidArgument);
    CHECK_THROWS_AS((void)make_rand_mask({64, 64}, 1.0, 0), InvalidArgument);
    CHECK_THROWS_AS((void)make_rand_mask({64, 64}, -0.1, 0), InvalidArgument);
    CHECK_THROWS_AS((void)make_block_mask({0, 64}, 4, 8, 0), InvalidArgument);
    CHECK_THROWS_AS(LossMask({2, 2}, std::vector<std::uint8_t>(4, 0)), DegenerateInput);
    CHECK_THROWS_AS(LossMask({2, 2}, std::vector<std::uint8_t>(3, 1)), InvalidArgument);
    CHECK_THROWS_AS((void)parse_pattern("stripes"), InvalidArgument);
}

TEST_CASE("pattern names round-trip") {
    for (PatternKind kind : {PatternKind::none, PatternKind::block, PatternKind::line, PatternKind::rand})
        CHECK(parse_pattern(to_string(kind)) == kind);
    CHECK(parse_pattern("BLOCK") == PatternKind::block);
}

TEST_CASE("apply_mask zeroes lost pixels in every channel") {
    Image img({4, 4}, 3, 0.5);
    const LossMask m = make_block_mask({4, 4}, 2, 4, 1);
    const Image out = apply_mask(img, m);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) CHECK(out.channel(c)(x, y) == (m.valid(x, y) ? 0.5 : 0.0));
    CHECK_THROWS_AS((void)apply_mask(Image({3, 4}, 1), m), InvalidArgument);
}
