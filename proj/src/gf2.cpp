#include "bb84/gf2.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace bb84 {

BitString::BitString(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(static_cast<std::uint8_t>(b & 1));
}

BitString BitString::random(std::size_t length, PhiloxRng& rng) {
    BitString s(length);
    for (std::size_t i = 0; i < length; ++i) s.bits_[i] = static_cast<std::uint8_t>(rng.random_bit());
    return s;
}

BitString BitString::parse(const std::string& text) {
    BitString s(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '0') s.bits_[i] = 0;
        else if (text[i] == '1') s.bits_[i] = 1;
        else throw std::invalid_argument("BitString::parse: invalid character '" +
                                         std::string(1, text[i]) + "'");
    }
    return s;
}

std::size_t BitString::weight() const {
    std::size_t w = 0;
    for (std::uint8_t b : bits_) w += b;
    return w;
}

BitString BitString::operator^(const BitString& other) const {
    if (size() != other.size())
        throw std::invalid_argument("BitString XOR: length mismatch");
    BitString out(size());
    for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] ^ other.bits_[i];
    return out;
}

std::string BitString::to_string() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
    return (a ^ b).weight();
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols, std::initializer_list<int> entries)
    : rows_(rows), cols_(cols) {
    if (entries.size() != rows * cols)
        throw std::invalid_argument("Gf2Matrix: wrong number of entries");
    entries_.reserve(entries.size());
    for (int e : entries) entries_.push_back(static_cast<std::uint8_t>(e & 1));
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Gf2Matrix Gf2Matrix::random(std::size_t rows, std::size_t cols, PhiloxRng& rng) {
    Gf2Matrix m(rows, cols);
    for (auto& e : m.entries_) e = static_cast<std::uint8_t>(rng.random_bit());
    return m;
}

BitString Gf2Matrix::row(std::size_t i) const {
    BitString s(cols_);
    for (std::size_t j = 0; j < cols_; ++j) s.set_bit(j, at(i, j));
    return s;
}

std::size_t Gf2Matrix::rank() const {
    std::vector<std::uint8_t> work = entries_;
    auto at_w = [&](std::size_t i, std::size_t j) -> std::uint8_t& {
        return work[i * cols_ + j];
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows_ && !at_w(pivot, col)) ++pivot;
        if (pivot == rows_) continue;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap(at_w(rank, j), at_w(pivot, j));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i != rank && at_w(i, col)) {
                for (std::size_t j = 0; j < cols_; ++j) at_w(i, j) ^= at_w(rank, j);
            }
        }
        ++rank;
    }
    return rank;
}

Gf2Matrix Gf2Matrix::stack(const Gf2Matrix& top, const Gf2Matrix& bottom) {
    if (top.cols() != bottom.cols())
        throw std::invalid_argument("Gf2Matrix::stack: column mismatch");
    Gf2Matrix out(top.rows() + bottom.rows(), top.cols());
    std::copy(top.entries_.begin(), top.entries_.end(), out.entries_.begin());
    std::copy(bottom.entries_.begin(), bottom.entries_.end(),
              out.entries_.begin() + static_cast<std::ptrdiff_t>(top.entries_.size()));
    return out;
}

bool Gf2Matrix::operator==(const Gf2Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

std::string Gf2Matrix::to_text() const {
    std::ostringstream os;
    os << rows_ << ' ' << cols_ << '\n';
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << static_cast<int>(at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

Gf2Matrix Gf2Matrix::from_text(std::istream& in) {
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows == 0 || cols == 0)
        throw std::invalid_argument("Gf2Matrix::from_text: bad header line");
    Gf2Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            int v;
            if (!(in >> v) || (v != 0 && v != 1))
                throw std::invalid_argument("Gf2Matrix::from_text: entries must be 0/1");
            m.set(i, j, v);
        }
    }
    return m;
}

Gf2Matrix Gf2Matrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    return from_text(in);
}

LinearCodeSpec::LinearCodeSpec(Gf2Matrix pc_in, Gf2Matrix pk_in)
    : pc(std::move(pc_in)), pk(std::move(pk_in)) {
    if (pc.cols() != pk.cols())
        throw std::invalid_argument("LinearCodeSpec: pc and pk must have the same n");
    const Gf2Matrix s = stacked();
    if (s.rank() != pc.rows() + pk.rows())
        throw std::invalid_argument(
            "LinearCodeSpec: rows of pc and pk together must be linearly independent");
}

namespace {

int dot_row(const BitString& x, const Gf2Matrix& m, std::size_t i) {
    int acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc ^= x.bit(j) & m.at(i, j);
    return acc;
}

// Row-reduces [mat | rhs] and reports a particular solution plus a kernel
// basis for x with mat * x = rhs (x treated as a column vector).  Returns
// false if the system is inconsistent.
struct LinearSystem {
    BitString particular;
    std::vector<BitString> kernel;
};

bool solve_system(const Gf2Matrix& mat, const BitString& rhs, LinearSystem& out) {
    const std::size_t rows = mat.rows(), cols = mat.cols();
    std::vector<std::vector<std::uint8_t>> a(rows, std::vector<std::uint8_t>(cols + 1, 0));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = static_cast<std::uint8_t>(mat.at(i, j));
        a[i][cols] = static_cast<std::uint8_t>(rhs.bit(i));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t p = rank;
        while (p < rows && !a[p][col]) ++p;
        if (p == rows) continue;
        std::swap(a[rank], a[p]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != rank && a[i][col]) {
                for (std::size_t j = col; j <= cols; ++j) a[i][j] ^= a[rank][j];
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < rows; ++i) {
        if (a[i][cols]) return false;
    }
    std::vector<int> pivot_of_col(cols, -1);
    for (std::size_t i = 0; i < rank; ++i) pivot_of_col[pivot_col[i]] = static_cast<int>(i);

    out.particular = BitString(cols);
    for (std::size_t i = 0; i < rank; ++i) out.particular.set_bit(pivot_col[i], a[i][cols]);

    out.kernel.clear();
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        BitString v(cols);
        v.set_bit(col, 1);
        for (std::size_t i = 0; i < rank; ++i) v.set_bit(pivot_col[i], a[i][col]);
        out.kernel.push_back(std::move(v));
    }
    return true;
}

void enumerate_solutions(const Gf2Matrix& mat, const BitString& rhs,
                         const std::function<void(const BitString&)>& fn) {
    if (rhs.size() != mat.rows())
        throw std::invalid_argument("enumerate_solutions: rhs length != rows");
    LinearSystem sys;
    if (!solve_system(mat, rhs, sys)) return;
    if (sys.kernel.size() > kMaxCosetEnumerationDim)
        throw std::runtime_error("instance too large for exhaustive mode: kernel dimension " +
                                 std::to_string(sys.kernel.size()) + " exceeds cap " +
                                 std::to_string(kMaxCosetEnumerationDim));
    const std::size_t dim = sys.kernel.size();
    BitString x = sys.particular;
    fn(x);
    // Gray-code walk: each step XORs a single kernel basis vector.
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << dim); ++g) {
        std::size_t flip = 0;
        while (!((g >> flip) & 1)) ++flip;
        x = x ^ sys.kernel[flip];
        fn(x);
    }
}

} // namespace

BitString syndrome(const BitString& x, const Gf2Matrix& pc) {
    if (x.size() != pc.cols())
        throw std::invalid_argument("syndrome: length(x) != cols(pc)");
    BitString xi(pc.rows());
    for (std::size_t i = 0; i < pc.rows(); ++i) xi.set_bit(i, dot_row(x, pc, i));
    return xi;
}

BitString apply_key_map(const BitString& x, const Gf2Matrix& pk) {
    if (x.size() != pk.cols())
        throw std::invalid_argument("apply_key_map: length(x) != cols(pk)");
    BitString k(pk.rows());
    for (std::size_t i = 0; i < pk.rows(); ++i) k.set_bit(i, dot_row(x, pk, i));
    return k;
}

std::size_t code_distance_drm(const std::vector<BitString>& vectors,
                              std::size_t r, std::size_t m) {
    if (m < 1) throw std::invalid_argument("code_distance_drm: m must be >= 1");
    if (vectors.size() != r + m)
        throw std::invalid_argument("code_distance_drm: expected r+m vectors");
    if (r + m > kMaxSpanEnumerationDim)
        throw std::runtime_error("instance too large for exhaustive mode: r+m = " +
                                 std::to_string(r + m) + " exceeds cap " +
                                 std::to_string(kMaxSpanEnumerationDim));
    const std::size_t n = vectors[0].size();
    std::size_t best = n + 1;
    for (std::size_t rp = r; rp < r + m; ++rp) {
        // min over u in Span{v_1..v_rp} of d_H(v_{rp+1}, u), via Gray walk
        BitString u(n);
        BitString diff = vectors[rp] ^ u;
        best = std::min(best, diff.weight());
        for (std::uint64_t g = 1; g < (std::uint64_t{1} << rp); ++g) {
            std::size_t flip = 0;
            while (!((g >> flip) & 1)) ++flip;
            u = u ^ vectors[flip];
            best = std::min(best, hamming_distance(vectors[rp], u));
        }
    }
    return best;
}

BitString decode_to_coset_leader(const BitString& y, const Gf2Matrix& pc,
                                 const BitString& target_syndrome) {
    if (y.size() != pc.cols())
        throw std::invalid_argument("decode_to_coset_leader: length(y) != cols(pc)");
    if (y.size() > kMaxDecodeBits)
        throw std::runtime_error("instance too large for exhaustive mode: n = " +
                                 std::to_string(y.size()) + " exceeds cap " +
                                 std::to_string(kMaxDecodeBits));
    // Fast path: y already has the target syndrome (zero-weight error).
    if (syndrome(y, pc) == target_syndrome) return y;

    bool found = false;
    BitString best_error;
    std::size_t best_weight = y.size() + 1;
    enumerate_solutions(pc, target_syndrome, [&](const BitString& cand) {
        const BitString err = y ^ cand;
        const std::size_t w = err.weight();
        if (!found || w < best_weight || (w == best_weight && err < best_error)) {
            found = true;
            best_error = err;
            best_weight = w;
        }
    });
    if (!found)
        throw std::runtime_error("decode_to_coset_leader: empty coset (pc not full row rank?)");
    return y ^ best_error;
}

LinearCodeSpec random_code(std::size_t n, std::size_t r, std::size_t m, PhiloxRng& rng) {
    if (r + m > n)
        throw std::invalid_argument("random_code: r+m must not exceed n");
    for (;;) {
        Gf2Matrix full = Gf2Matrix::random(r + m, n, rng);
        if (full.rank() != r + m) continue;
        Gf2Matrix pc(r, n), pk(m, n);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n; ++j) pc.set(i, j, full.at(i, j));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) pk.set(i, j, full.at(r + i, j));
        return LinearCodeSpec(std::move(pc), std::move(pk));
    }
}

std::vector<BitString> solve_all(const Gf2Matrix& mat, const BitString& rhs) {
    std::vector<BitString> out;
    enumerate_solutions(mat, rhs, [&](const BitString& x) { out.push_back(x); });
    return out;
}

} // namespace bb84
