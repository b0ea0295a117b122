#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <sstream>

#include "bb84/gf2.hpp"

using namespace bb84;

namespace {

// Independent oracle for the layered code distance: for each r' in
// [r, r+m), walk all 2^{r'} coefficient vectors explicitly (no Gray-code
// tricks) and take the minimum Hamming distance from v_{r'+1} to the
// resulting span element.
std::size_t distance_oracle(const std::vector<BitString>& vectors,
                            std::size_t r, std::size_t m) {
    const std::size_t n = vectors.front().size();
    std::size_t best = n + 1;
    for (std::size_t rp = r; rp < r + m; ++rp) {
        const BitString& target = vectors[rp];
        for (std::uint64_t coeffs = 0; coeffs < (std::uint64_t{1} << rp); ++coeffs) {
            BitString u(n);
            for (std::size_t i = 0; i < rp; ++i) {
                if ((coeffs >> i) & 1) u = u ^ vectors[i];
            }
            best = std::min(best, hamming_distance(target, u));
        }
    }
    return best;
}

// Brute-force minimum distance of the code {x : x pc^T = 0}.
std::size_t min_distance(const Gf2Matrix& pc) {
    const auto codewords = solve_all(pc, BitString(pc.rows()));
    std::size_t best = pc.cols() + 1;
    for (const auto& c : codewords) {
        if (c.weight() > 0) best = std::min(best, c.weight());
    }
    return best;
}

} // namespace

TEST_CASE("BitString basics") {
    BitString s = BitString::parse("10110");
    CHECK(s.size() == 5);
    CHECK(s.bit(0) == 1);
    CHECK(s.bit(1) == 0);
    CHECK(s.weight() == 3);
    CHECK(s.to_string() == "10110");
    CHECK((s ^ BitString::parse("11111")) == BitString::parse("01001"));
    CHECK(BitString::parse("01") < BitString::parse("10"));
    CHECK(hamming_distance(BitString::parse("1010"), BitString::parse("0110")) == 2);
    CHECK_THROWS_AS(BitString::parse("10a"), std::invalid_argument);
    CHECK_THROWS_AS(s ^ BitString::parse("11"), std::invalid_argument);
}

TEST_CASE("syndrome") {
    const Gf2Matrix pc(2, 3, {1, 1, 0, 0, 1, 1});
    CHECK(syndrome(BitString::parse("000"), pc).to_string() == "00");
    CHECK(syndrome(BitString::parse("110"), pc).to_string() == "01");
    CHECK(syndrome(BitString::parse("111"), pc).to_string() == "00");
    CHECK_THROWS_AS(syndrome(BitString::parse("10"), pc), std::invalid_argument);
}

TEST_CASE("syndrome linearity on random instances") {
    PhiloxRng rng(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const Gf2Matrix pc = Gf2Matrix::random(3, 9, rng);
        const BitString x = BitString::random(9, rng);
        const BitString e = BitString::random(9, rng);
        CHECK(syndrome(x ^ e, pc) == (syndrome(x, pc) ^ syndrome(e, pc)));
    }
}

TEST_CASE("apply_key_map") {
    CHECK(apply_key_map(BitString::parse("0000"), Gf2Matrix(2, 4, {1, 0, 1, 1, 0, 1, 0, 1}))
              .to_string() == "00");
    CHECK(apply_key_map(BitString::parse("101"), Gf2Matrix(1, 3, {1, 0, 1})).to_string() ==
          "0");
    CHECK(apply_key_map(BitString::parse("100"), Gf2Matrix(2, 3, {1, 0, 1, 1, 1, 0}))
              .to_string() == "11");
}

TEST_CASE("rank") {
    CHECK(Gf2Matrix::identity(3).rank() == 3);
    CHECK(Gf2Matrix(2, 3, {1, 0, 1, 1, 0, 1}).rank() == 1);
    CHECK(Gf2Matrix(3, 3, {1, 1, 0, 0, 1, 1, 1, 0, 1}).rank() == 2);
    CHECK(Gf2Matrix(2, 2).rank() == 0);
}

TEST_CASE("matrix text round trip") {
    const Gf2Matrix m(2, 3, {1, 0, 1, 0, 1, 1});
    std::istringstream in(m.to_text());
    CHECK(Gf2Matrix::from_text(in) == m);
    std::istringstream bad("2 2\n1 0\n1 2\n");
    CHECK_THROWS(Gf2Matrix::from_text(bad));
}

TEST_CASE("LinearCodeSpec requires full stacked rank") {
    CHECK_NOTHROW(LinearCodeSpec(Gf2Matrix(1, 3, {1, 1, 0}), Gf2Matrix(1, 3, {0, 1, 1})));
    CHECK_THROWS_AS(
        LinearCodeSpec(Gf2Matrix(1, 3, {1, 1, 0}), Gf2Matrix(1, 3, {1, 1, 0})),
        std::invalid_argument);
}

TEST_CASE("code_distance_drm frozen examples") {
    CHECK(code_distance_drm({BitString::parse("1011")}, 0, 1) == 3);
    CHECK(code_distance_drm({BitString::parse("100"), BitString::parse("011")}, 1, 1) == 2);
    CHECK(code_distance_drm({BitString::parse("1000"), BitString::parse("0110"),
                             BitString::parse("0001")},
                            1, 2) == 1);
}

TEST_CASE("code_distance_drm matches the independent oracle") {
    PhiloxRng rng(12, 0);
    int done = 0;
    while (done < 40) {
        const std::size_t n = 4 + rng.uniform_int(6);        // 4..9
        const std::size_t r = rng.uniform_int(3);            // 0..2
        const std::size_t m = 1 + rng.uniform_int(3);        // 1..3
        if (r + m > n) continue;
        const Gf2Matrix stacked = Gf2Matrix::random(r + m, n, rng);
        if (stacked.rank() != r + m) continue;
        std::vector<BitString> vectors;
        for (std::size_t i = 0; i < r + m; ++i) vectors.push_back(stacked.row(i));
        CHECK(code_distance_drm(vectors, r, m) == distance_oracle(vectors, r, m));
        ++done;
    }
}

TEST_CASE("code_distance_drm enforces the enumeration cap") {
    std::vector<BitString> vectors;
    const std::size_t big = kMaxSpanEnumerationDim + 1;
    for (std::size_t i = 0; i < big; ++i) {
        BitString v(big);
        v.set_bit(i, 1);
        vectors.push_back(v);
    }
    CHECK_THROWS_AS(code_distance_drm(vectors, big - 1, 1), std::runtime_error);
}

TEST_CASE("decode_to_coset_leader frozen examples") {
    const Gf2Matrix pc(2, 3, {1, 1, 0, 0, 1, 1});
    // already consistent -> unchanged
    const BitString y = BitString::parse("110");
    CHECK(decode_to_coset_leader(y, pc, syndrome(y, pc)) == y);
    CHECK(decode_to_coset_leader(BitString::parse("100"), pc, BitString::parse("00")) ==
          BitString::parse("000"));
    CHECK(decode_to_coset_leader(BitString::parse("111"), pc, BitString::parse("01")) ==
          BitString::parse("110"));
}

TEST_CASE("decode tie-break picks the lexicographically smallest error pattern") {
    // pc = [1 1], target syndrome 1: candidates 01 and 10, both at Hamming
    // distance 1 from y = 00; error patterns are 01 and 10, so 01 wins.
    const Gf2Matrix pc(1, 2, {1, 1});
    CHECK(decode_to_coset_leader(BitString::parse("00"), pc, BitString::parse("1")) ==
          BitString::parse("01"));
}

TEST_CASE("decode corrects below half the minimum distance") {
    PhiloxRng rng(13, 0);
    int done = 0;
    while (done < 30) {
        const std::size_t n = 6 + rng.uniform_int(5);  // 6..10
        const std::size_t r = 3 + rng.uniform_int(3);  // 3..5
        if (r >= n) continue;
        const Gf2Matrix pc = Gf2Matrix::random(r, n, rng);
        if (pc.rank() != r) continue;
        const std::size_t d_min = min_distance(pc);
        if (d_min < 2) continue;
        const std::size_t max_weight = (d_min - 1) / 2;
        const BitString x = BitString::random(n, rng);
        BitString e(n);
        // random error of weight <= max_weight
        const std::size_t w = rng.uniform_int(max_weight + 1);
        std::size_t placed = 0;
        while (placed < w) {
            const std::size_t pos = rng.uniform_int(n);
            if (!e.bit(pos)) {
                e.set_bit(pos, 1);
                ++placed;
            }
        }
        CHECK(decode_to_coset_leader(x ^ e, pc, syndrome(x, pc)) == x);
        ++done;
    }
}

TEST_CASE("decode enforces its caps") {
    const std::size_t n = kMaxDecodeBits + 1;
    Gf2Matrix pc(1, n);
    pc.set(0, 0, 1);
    CHECK_THROWS_AS(decode_to_coset_leader(BitString(n), pc, BitString::parse("1")),
                    std::runtime_error);
}

TEST_CASE("random_code yields full stacked rank") {
    PhiloxRng rng(14, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const LinearCodeSpec code = random_code(8, 3, 2, rng);
        CHECK(code.stacked().rank() == 5);
        CHECK(code.n() == 8);
        CHECK(code.r() == 3);
        CHECK(code.m() == 2);
    }
}

TEST_CASE("solve_all enumerates exactly the solution coset") {
    PhiloxRng rng(15, 0);
    const Gf2Matrix mat = Gf2Matrix::random(3, 7, rng);
    const std::size_t rank = mat.rank();
    const BitString x0 = BitString::random(7, rng);
    const BitString rhs = syndrome(x0, mat);
    const auto sols = solve_all(mat, rhs);
    CHECK(sols.size() == (std::size_t{1} << (7 - rank)));
    for (const auto& s : sols) CHECK(syndrome(s, mat) == rhs);
    // all distinct
    auto sorted = sols;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}
