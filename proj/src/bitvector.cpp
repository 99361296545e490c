#include "coverwalk/bitvector.hpp"

namespace coverwalk {

namespace {
constexpr int kMaxDim = 30;
}

BitVector::BitVector(int n, std::uint32_t mask) : n_(n), mask_(mask) {
    if (n < 0 || n > kMaxDim)
        throw InputError("dimension " + std::to_string(n) + " out of range [0, 30]");
    if (n < kMaxDim && (mask >> n) != 0)
        throw InputError("state mask has bits beyond dimension " + std::to_string(n));
}

BitVector BitVector::from_string(const std::string& s) {
    if (s.empty()) throw InputError("empty state string");
    if (s.size() > kMaxDim)
        throw InputError("state string longer than 30 coordinates");
    std::uint32_t mask = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            mask |= (1u << i);
        else if (s[i] != '0')
            throw InputError("state string '" + s + "' must be over {0,1}");
    }
    return BitVector(static_cast<int>(s.size()), mask);
}

std::string BitVector::to_string() const {
    std::string s(static_cast<size_t>(n_), '0');
    for (int i = 0; i < n_; ++i)
        if (mask_ & (1u << i)) s[static_cast<size_t>(i)] = '1';
    return s;
}

int BitVector::get(int coord) const {
    if (coord < 1 || coord > n_)
        throw InputError("coordinate " + std::to_string(coord) + " out of range");
    return (mask_ >> (coord - 1)) & 1u;
}

BitVector BitVector::with(int coord, int value) const {
    if (coord < 1 || coord > n_)
        throw InputError("coordinate " + std::to_string(coord) + " out of range");
    std::uint32_t m = mask_;
    if (value)
        m |= (1u << (coord - 1));
    else
        m &= ~(1u << (coord - 1));
    return BitVector(n_, m);
}

int hamming(const BitVector& x, const BitVector& y) {
    if (x.n() != y.n()) throw InputError("hamming distance needs equal dimensions");
    return std::popcount(x.mask() ^ y.mask());
}

bool is_flip(const BitVector& x, const BitVector& y) {
    return hamming(x, y) == 1;
}

bool is_swap(const BitVector& x, const BitVector& y) {
    return hamming(x, y) == 2 && x.weight() == y.weight();
}

bool flip_or_swap(const BitVector& x, const BitVector& y) {
    const int h = hamming(x, y);
    return h == 1 || (h == 2 && x.weight() == y.weight());
}

bool covers(const BitVector& x, const BitVector& y) {
    if (x.n() != y.n()) throw InputError("cover test needs equal dimensions");
    return (x.mask() | y.mask()) == x.mask() && std::popcount(x.mask() ^ y.mask()) <= 1;
}

BitVector drop_coords(const BitVector& x, const std::vector<int>& sorted_coords) {
    std::uint32_t dropped = 0;
    for (int c : sorted_coords) {
        if (c < 1 || c > x.n()) throw InputError("drop coordinate out of range");
        dropped |= (1u << (c - 1));
    }
    std::uint32_t mask = 0;
    int pos = 0;
    for (int i = 0; i < x.n(); ++i) {
        if (dropped & (1u << i)) continue;
        if (x.mask() & (1u << i)) mask |= (1u << pos);
        ++pos;
    }
    return BitVector(pos, mask);
}

BitVector insert_coord(const BitVector& x, int coord, int value) {
    if (coord < 1 || coord > x.n() + 1)
        throw InputError("insert coordinate out of range");
    const std::uint32_t low = x.mask() & ((1u << (coord - 1)) - 1u);
    const std::uint32_t high = x.mask() >> (coord - 1);
    std::uint32_t mask = low | (high << coord);
    if (value) mask |= (1u << (coord - 1));
    return BitVector(x.n() + 1, mask);
}

} // namespace coverwalk
