#include "doctest.h"

#include "coverwalk/bitvector.hpp"

using namespace coverwalk;

TEST_SUITE("bitvector") {

TEST_CASE("string form lists coordinate 1 first") {
    BitVector x = BitVector::from_string("110");
    CHECK(x.n() == 3);
    CHECK(x.get(1) == 1);
    CHECK(x.get(2) == 1);
    CHECK(x.get(3) == 0);
    CHECK(x.to_string() == "110");
    CHECK(x.weight() == 2);
    CHECK(x.with(2, 0).to_string() == "100");
    CHECK(x.with(3, 1).to_string() == "111");
}

TEST_CASE("rejects bad strings and dimensions") {
    CHECK_THROWS_AS(BitVector::from_string(""), InputError);
    CHECK_THROWS_AS(BitVector::from_string("102"), InputError);
    CHECK_THROWS_AS(BitVector::from_string(std::string(31, '0')), InputError);
}

TEST_CASE("hamming, flips and swaps") {
    BitVector a = BitVector::from_string("110");
    BitVector b = BitVector::from_string("011");
    BitVector c = BitVector::from_string("111");
    CHECK(hamming(a, b) == 2);
    CHECK(hamming(a, a) == 0);
    CHECK(is_flip(a, c));
    CHECK_FALSE(is_flip(a, b));
    CHECK(is_swap(a, b)); // equal weight, distance two
    CHECK_FALSE(is_swap(a, c));
    CHECK(flip_or_swap(a, b));
    CHECK(flip_or_swap(a, c));
    CHECK_FALSE(flip_or_swap(a, a));
    // distance-two pairs of unequal weight are neither
    BitVector d = BitVector::from_string("000");
    CHECK_FALSE(flip_or_swap(a, d));
}

TEST_CASE("cover relation: equal or one extra 1") {
    BitVector x = BitVector::from_string("110");
    CHECK(covers(x, x));
    CHECK(covers(x, BitVector::from_string("100")));
    CHECK(covers(x, BitVector::from_string("010")));
    CHECK_FALSE(covers(x, BitVector::from_string("011")));
    CHECK_FALSE(covers(x, BitVector::from_string("000"))); // two extra
    CHECK_FALSE(covers(BitVector::from_string("100"), x)); // wrong direction
}

TEST_CASE("drop and insert coordinates invert each other") {
    BitVector x = BitVector::from_string("1011");
    CHECK(drop_coords(x, {2}).to_string() == "111");
    CHECK(drop_coords(x, {1, 3}).to_string() == "01");
    CHECK(insert_coord(drop_coords(x, {2}), 2, 0).to_string() == "1011");
    for (int coord = 1; coord <= 4; ++coord) {
        BitVector dropped = drop_coords(x, {coord});
        CHECK(insert_coord(dropped, coord, x.get(coord)) == x);
    }
}

TEST_CASE("support ordering follows masks") {
    // mask order puts "10" (x1=1) before "01" (x2=1)
    CHECK(BitVector::from_string("10") < BitVector::from_string("01"));
    CHECK(BitVector::from_string("00") < BitVector::from_string("10"));
    CHECK(BitVector::from_string("01") < BitVector::from_string("11"));
}

} // TEST_SUITE
