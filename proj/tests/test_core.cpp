// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "riscav/core.hpp"
#include "riscav/errors.hpp"

using namespace riscav;
using core::ChannelSweep;
using core::Cir;
using core::Complex;
using core::FrequencyGrid;
using core::Mask;
using core::MaskSweepDataset;

TEST_CASE("mask from index: zero, all-on, binary expansion") {
    Mask off = Mask::from_index(0, 16);
    for (int i = 0; i < 16; ++i)
        CHECK_FALSE(off.element_on(i));

    Mask on = Mask::from_index(65535, 16);
    for (int i = 0; i < 16; ++i)
        CHECK(on.element_on(i));

    // index 5 with 3 elements: element 0 on, 1 off, 2 on
    Mask five = Mask::from_index(5, 3);
    CHECK(five.element_on(0));
    CHECK_FALSE(five.element_on(1));
    CHECK(five.element_on(2));
}

TEST_CASE("mask index round trip") {
    // exhaustive for small N
    for (int n = 1; n <= 12; ++n)
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx)
            CHECK(Mask::from_index(idx, n).to_index() == idx);
    // sampled for larger N
    std::mt19937_64 rng(42);
    for (int n = 13; n <= 20; ++n)
        for (int trial = 0; trial < 200; ++trial) {
            std::uint64_t idx = rng() & ((std::uint64_t{1} << n) - 1);
            CHECK(Mask::from_index(idx, n).to_index() == idx);
        }
}

TEST_CASE("mask bounds") {
    CHECK_THROWS_AS(Mask::from_index(8, 3), ValidationError);
    CHECK_THROWS_AS(Mask::from_index(0, 0), ValidationError);
    CHECK_THROWS_AS(Mask::from_index(0, 33), ValidationError);
    CHECK_NOTHROW(Mask::from_index(0xFFFFFFFFull, 32));
}

TEST_CASE("flip element") {
    Mask m = Mask::from_index(0, 2);
    Mask flipped = m.flipped(0);
    CHECK(flipped.to_index() == 1);
    CHECK(m.to_index() == 0); // input unchanged

    Mask both = Mask::from_index(3, 2);
    CHECK(both.flipped(1).to_index() == 1);

    CHECK_THROWS_AS(m.flipped(2), ValidationError);
    CHECK_THROWS_AS(m.flipped(-1), ValidationError);

    // involution on random masks
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Mask r = Mask::from_index(rng() & 0xFFFF, 16);
        CHECK(r.flipped(3).flipped(3) == r);
    }
}

TEST_CASE("grid frequencies endpoints and spacing") {
    FrequencyGrid grid(5.7e9, 6.1e9, 5);
    auto f = grid.frequencies();
    REQUIRE(f.size() == 5);
    CHECK(f[0] == 5.7e9);
    CHECK(f[4] == 6.1e9);
    CHECK(f[1] == doctest::Approx(5.8e9).epsilon(1e-12));
    CHECK(f[2] == doctest::Approx(5.9e9).epsilon(1e-12));
    CHECK(f[3] == doctest::Approx(6.0e9).epsilon(1e-12));

    // uniform spacing within 1e-12 relative
    FrequencyGrid fine(1.3e9, 9.7e9, 1001);
    auto ff = fine.frequencies();
    double spacing = fine.spacing_hz();
    for (std::size_t i = 1; i < ff.size(); ++i)
        CHECK(std::abs((ff[i] - ff[i - 1]) - spacing) <= 1e-12 * spacing);

    FrequencyGrid two(1.0, 2.0, 2);
    CHECK(two.frequencies() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(FrequencyGrid(0.0, 1.0, 3), ValidationError); // start not positive
    CHECK_THROWS_AS(FrequencyGrid(-1.0, 1.0, 3), ValidationError);
    CHECK_THROWS_AS(FrequencyGrid(2.0, 1.0, 3), ValidationError); // start >= stop
    CHECK_THROWS_AS(FrequencyGrid(1.0, 2.0, 1), ValidationError); // too few points
}

TEST_CASE("sweep validation") {
    FrequencyGrid grid(1e9, 2e9, 3);
    CHECK_NOTHROW(ChannelSweep(grid, {Complex(1, 0), Complex(0, 1), Complex(0, 0)}));
    CHECK_THROWS_AS(ChannelSweep(grid, {Complex(1, 0)}), ValidationError);
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ChannelSweep(grid, {Complex(1, 0), Complex(nan, 0), Complex(0, 0)}),
                    ValidationError);
}

TEST_CASE("cir validation") {
    CHECK_NOTHROW(Cir(1e-10, {Complex(1, 0), Complex(0, 0)}));
    CHECK_THROWS_AS(Cir(0.0, {Complex(1, 0), Complex(0, 0)}), ValidationError);
    CHECK_THROWS_AS(Cir(1e-10, {Complex(1, 0)}), ValidationError);
}

TEST_CASE("dataset invariants") {
    FrequencyGrid grid(1e9, 2e9, 2);
    FrequencyGrid other(1e9, 2e9, 3);
    ChannelSweep s1(grid, {Complex(1, 0), Complex(2, 0)});
    ChannelSweep s2(grid, {Complex(3, 0), Complex(4, 0)});
    ChannelSweep s3(other, {Complex(1, 0), Complex(2, 0), Complex(3, 0)});

    MaskSweepDataset ok({Mask::from_index(0, 4), Mask::from_index(7, 4)}, {s1, s2},
                        MaskSweepDataset::Origin::simulated);
    CHECK(ok.size() == 2);
    CHECK(ok.element_count() == 4);

    // mismatched lengths
    CHECK_THROWS_AS(
        MaskSweepDataset({Mask::from_index(0, 4)}, {s1, s2}, MaskSweepDataset::Origin::simulated),
        ValidationError);
    // mismatched grids
    CHECK_THROWS_AS(MaskSweepDataset({Mask::from_index(0, 4), Mask::from_index(1, 4)}, {s1, s3},
                                     MaskSweepDataset::Origin::simulated),
                    ValidationError);
    // duplicate mask indices
    CHECK_THROWS_AS(MaskSweepDataset({Mask::from_index(3, 4), Mask::from_index(3, 4)}, {s1, s2},
                                     MaskSweepDataset::Origin::simulated),
                    ValidationError);
    // mixed element counts
    CHECK_THROWS_AS(MaskSweepDataset({Mask::from_index(0, 4), Mask::from_index(1, 5)}, {s1, s2},
                                     MaskSweepDataset::Origin::simulated),
                    ValidationError);
    // empty
    CHECK_THROWS_AS(MaskSweepDataset({}, {}, MaskSweepDataset::Origin::simulated), ValidationError);
}

TEST_CASE("value comparability") {
    FrequencyGrid grid(1e9, 2e9, 2);
    CHECK(FrequencyGrid(1e9, 2e9, 2) == grid);
    CHECK(Mask::from_index(5, 4) == Mask::from_index(5, 4));
    CHECK_FALSE(Mask::from_index(5, 4) == Mask::from_index(5, 5));
    ChannelSweep a(grid, {Complex(1, 0), Complex(2, 0)});
    ChannelSweep b(grid, {Complex(1, 0), Complex(2, 0)});
    CHECK(a == b);
    CHECK(Cir(1e-10, {Complex(1, 0), Complex(0, 0)}) ==
          Cir(1e-10, {Complex(1, 0), Complex(0, 0)}));
    MaskSweepDataset d1({Mask::from_index(0, 4)}, {a}, MaskSweepDataset::Origin::simulated);
    MaskSweepDataset d2({Mask::from_index(0, 4)}, {b}, MaskSweepDataset::Origin::simulated);
    CHECK(d1 == d2);
}
