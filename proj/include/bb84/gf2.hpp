#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bb84/rng.hpp"

namespace bb84 {

// Bit order convention, used everywhere in this project: bit index 0 is the
// first (leftmost) bit of the textual form, and row i of a parity-check
// matrix produces syndrome bit i.

// Fixed-length vector over F_2.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length) : bits_(length, 0) {}
    BitString(std::initializer_list<int> bits);

    static BitString zeros(std::size_t length) { return BitString(length); }
    static BitString random(std::size_t length, PhiloxRng& rng);
    // Parses unspaced 0/1 text, leftmost character = index 0.
    static BitString parse(const std::string& text);

    std::size_t size() const { return bits_.size(); }
    int bit(std::size_t i) const { return bits_[i]; }
    void set_bit(std::size_t i, int v) { bits_[i] = static_cast<std::uint8_t>(v & 1); }

    std::size_t weight() const;
    BitString operator^(const BitString& other) const;
    bool operator==(const BitString& other) const { return bits_ == other.bits_; }
    bool operator!=(const BitString& other) const { return bits_ != other.bits_; }
    // Lexicographic order on the bit sequence (index 0 most significant).
    bool operator<(const BitString& other) const { return bits_ < other.bits_; }

    std::string to_string() const;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitString& a, const BitString& b);

// Dense matrix over F_2, row-major.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}
    Gf2Matrix(std::size_t rows, std::size_t cols, std::initializer_list<int> entries);

    static Gf2Matrix identity(std::size_t n);
    static Gf2Matrix random(std::size_t rows, std::size_t cols, PhiloxRng& rng);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, int v) {
        entries_[i * cols_ + j] = static_cast<std::uint8_t>(v & 1);
    }
    BitString row(std::size_t i) const;

    // Rank over F_2 (Gaussian elimination).
    std::size_t rank() const;

    // Vertical concatenation [top; bottom].
    static Gf2Matrix stack(const Gf2Matrix& top, const Gf2Matrix& bottom);

    bool operator==(const Gf2Matrix& other) const;

    // Text format (shared with the CLI): first line "rows cols", then one
    // line of space-separated 0/1 entries per row.
    std::string to_text() const;
    static Gf2Matrix from_text(std::istream& in);
    static Gf2Matrix load(const std::string& path);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> entries_;
};

// Parity-check matrix pc (r x n) and privacy-amplification matrix pk
// (m x n).  The stacked (r+m) x n matrix must have full row rank r+m.
struct LinearCodeSpec {
    Gf2Matrix pc;
    Gf2Matrix pk;

    LinearCodeSpec(Gf2Matrix pc_in, Gf2Matrix pk_in);

    std::size_t n() const { return pc.cols(); }
    std::size_t r() const { return pc.rows(); }
    std::size_t m() const { return pk.rows(); }
    Gf2Matrix stacked() const { return Gf2Matrix::stack(pc, pk); }
};

// xi = x * pc^T  (syndrome bit i = <x, row i of pc> over F_2).
BitString syndrome(const BitString& x, const Gf2Matrix& pc);

// k = x * pk^T.
BitString apply_key_map(const BitString& x, const Gf2Matrix& pk);

// Caps for the exhaustive algorithms below.
inline constexpr std::size_t kMaxSpanEnumerationDim = 20;   // r+m for code_distance_drm
inline constexpr std::size_t kMaxDecodeBits = 64;           // n for decode / coset search
inline constexpr std::size_t kMaxCosetEnumerationDim = 20;  // n-r for decode

// d_{r,m}: min over r <= r' < r+m of the Hamming distance from v_{r'+1} to
// Span{v_1..v_{r'}}, computed by exhaustive span enumeration.  `vectors`
// holds v_1..v_{r+m} in order (pc rows first, then pk rows).
std::size_t code_distance_drm(const std::vector<BitString>& vectors,
                              std::size_t r, std::size_t m);

// Minimum-weight (coset-leader) decoding: returns the x_hat minimizing
// d_H(y, x_hat) subject to x_hat * pc^T = target_syndrome.  Ties are broken
// by the lexicographically smallest error pattern y ^ x_hat.
BitString decode_to_coset_leader(const BitString& y, const Gf2Matrix& pc,
                                 const BitString& target_syndrome);

// Rejection-samples fair-coin (r+m) x n matrices until the stacked matrix
// has rank r+m, then splits it into pc / pk.
LinearCodeSpec random_code(std::size_t n, std::size_t r, std::size_t m, PhiloxRng& rng);

// All solutions x of x * mat^T = rhs, in increasing lexicographic-ish
// enumeration order (particular solution XOR kernel combinations).
std::vector<BitString> solve_all(const Gf2Matrix& mat, const BitString& rhs);

} // namespace bb84
