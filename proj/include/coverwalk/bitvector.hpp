#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "coverwalk/errors.hpp"

namespace coverwalk {

/// Point of the boolean lattice {0,1}^n, n <= 30.
///
/// Coordinates are 1-based in the API and in all reports. Coordinate i lives
/// in mask bit i-1. The string form lists coordinates left to right, so
/// "110" means x1=1, x2=1, x3=0.
class BitVector {
public:
    BitVector() = default;
    BitVector(int n, std::uint32_t mask);

    static BitVector from_string(const std::string& s);
    std::string to_string() const;

    int n() const { return n_; }
    std::uint32_t mask() const { return mask_; }

    int get(int coord) const;            // 0 or 1
    BitVector with(int coord, int value) const;

    int weight() const { return std::popcount(mask_); }

    /// Ordered by mask; used for canonical support ordering (requires equal n).
    auto operator<=>(const BitVector& o) const = default;

private:
    int n_ = 0;
    std::uint32_t mask_ = 0;
};

/// Hamming distance; requires equal dimension.
int hamming(const BitVector& x, const BitVector& y);

/// Differ in exactly one coordinate.
bool is_flip(const BitVector& x, const BitVector& y);

/// Exchange a 1 and a 0 between two coordinates (equal weight, distance 2).
bool is_swap(const BitVector& x, const BitVector& y);

/// The move relation of the walks here: a flip or a swap.
bool flip_or_swap(const BitVector& x, const BitVector& y);

/// x dominates y from one step above: x == y, or x == y with a single extra 1.
bool covers(const BitVector& x, const BitVector& y);

/// Delete the given sorted 1-based coordinates, packing the survivors in
/// order into a lower-dimensional point.
BitVector drop_coords(const BitVector& x, const std::vector<int>& sorted_coords);

/// Inverse direction of drop_coords for a single coordinate: re-insert a bit
/// so that it lands at 1-based position `coord` of the result.
BitVector insert_coord(const BitVector& x, int coord, int value);

} // namespace coverwalk
