#pragma once

#include "dpoq/bitops.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpoq {

// Dense bit matrix over GF(2), packed row-major (each row padded to whole
// 64-bit words so row operations run on the word kernels).
class GF2Matrix {
  public:
    GF2Matrix() = default;
    GF2Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64), bits_(rows * stride_, 0) {}

    static GF2Matrix identity(size_t n) {
        GF2Matrix m(n, n);
        for (size_t i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void set(size_t r, size_t c, bool b) {
        uint64_t m = 1ull << (c & 63);
        if (b)
            row(r)[c >> 6] |= m;
        else
            row(r)[c >> 6] &= ~m;
    }
    void flip(size_t r, size_t c) { row(r)[c >> 6] ^= 1ull << (c & 63); }

    void xor_row(size_t dst, size_t src) {
        bitops::xor_words(row(dst), row(src), stride_);
    }

    bool operator==(const GF2Matrix &o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }
    bool operator!=(const GF2Matrix &o) const { return !(*this == o); }

    GF2Matrix mul(const GF2Matrix &other) const {
        if (cols_ != other.rows_)
            throw std::invalid_argument("GF2Matrix::mul: shape mismatch");
        GF2Matrix out(rows_, other.cols_);
        for (size_t i = 0; i < rows_; ++i) {
            const uint64_t *ri = row(i);
            for (size_t k = 0; k < cols_; ++k) {
                if ((ri[k >> 6] >> (k & 63)) & 1)
                    bitops::xor_words(out.row(i), other.row(k), out.stride_);
            }
        }
        return out;
    }

    // Determinant by Gaussian elimination with the first nonzero pivot in
    // column order (deterministic).
    bool det() const {
        if (rows_ != cols_)
            throw std::invalid_argument("GF2Matrix::det: non-square");
        GF2Matrix a = *this;
        for (size_t c = 0; c < cols_; ++c) {
            size_t pivot = rows_;
            for (size_t r = c; r < rows_; ++r) {
                if (a.get(r, c)) {
                    pivot = r;
                    break;
                }
            }
            if (pivot == rows_)
                return false;
            if (pivot != c)
                a.swap_rows(pivot, c); // row swaps do not change det mod 2
            for (size_t r = c + 1; r < rows_; ++r)
                if (a.get(r, c))
                    a.xor_row(r, c);
        }
        return true;
    }

    std::string to_string() const {
        std::string s;
        for (size_t r = 0; r < rows_; ++r) {
            for (size_t c = 0; c < cols_; ++c)
                s.push_back(get(r, c) ? '1' : '0');
            s.push_back('\n');
        }
        return s;
    }

  private:
    uint64_t *row(size_t r) { return bits_.data() + r * stride_; }
    const uint64_t *row(size_t r) const { return bits_.data() + r * stride_; }

    void swap_rows(size_t a, size_t b) {
        for (size_t w = 0; w < stride_; ++w)
            std::swap(row(a)[w], row(b)[w]);
    }

    size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<uint64_t> bits_;
};

} // namespace dpoq
