#pragma once

#include "extmod/errors.hpp"
#include "extmod/field.hpp"

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace extmod {

/// Dense matrix over the exact field.  Zero-row/zero-column shapes are
/// first-class: products with an empty inner dimension are zero matrices
/// of the outer shape.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Mat(std::size_t r, std::size_t c, std::initializer_list<Rat> entries)
        : rows_(r), cols_(c), a_(entries) {
        if (a_.size() != r * c)
            throw std::invalid_argument("entry count does not match shape");
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Rat& operator()(std::size_t r, std::size_t c) const {
        return a_[r * cols_ + c];
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0)
                return false;
        return true;
    }

    Mat transpose() const {
        Mat m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(c, r) = (*this)(r, c);
        return m;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols_ != y.rows_)
            throw std::invalid_argument("shape mismatch in product");
        Mat z(x.rows_, y.cols_);
        for (std::size_t r = 0; r < x.rows_; ++r)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const Rat& f = x(r, k);
                if (f == 0)
                    continue;
                for (std::size_t c = 0; c < y.cols_; ++c) {
                    const Rat& g = y(k, c);
                    if (g != 0)
                        z(r, c) += f * g;
                }
            }
        return z;
    }

    friend Mat operator+(const Mat& x, const Mat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw std::invalid_argument("shape mismatch in sum");
        Mat z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i)
            z.a_[i] += y.a_[i];
        return z;
    }

    friend Mat operator-(const Mat& x, const Mat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw std::invalid_argument("shape mismatch in difference");
        Mat z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i)
            z.a_[i] -= y.a_[i];
        return z;
    }

    friend Mat operator*(const Rat& s, const Mat& x) {
        Mat z = x;
        for (auto& v : z.a_)
            v *= s;
        return z;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[" << rows_ << "x" << cols_ << "]";
        for (std::size_t r = 0; r < rows_; ++r) {
            os << " [";
            for (std::size_t c = 0; c < cols_; ++c)
                os << (c ? " " : "") << rat_to_string((*this)(r, c));
            os << "]";
        }
        return os.str();
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> a_;
};

inline Mat vstack(const std::vector<Mat>& blocks) {
    if (blocks.empty())
        return Mat();
    std::size_t cols = blocks.front().cols(), rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols)
            throw std::invalid_argument("vstack column mismatch");
        rows += b.rows();
    }
    Mat m(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m(off + r, c) = b(r, c);
        off += b.rows();
    }
    return m;
}

inline Mat block_diag(const std::vector<Mat>& blocks) {
    std::size_t rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Mat m(rows, cols);
    std::size_t ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c)
                m(ro + r, co + c) = b(r, c);
        ro += b.rows();
        co += b.cols();
    }
    return m;
}

/// In-place reduced row echelon form with leftmost pivots: scan columns
/// left to right, take the first row with a nonzero entry, scale the
/// pivot to 1, eliminate above and below.  Returns the pivot columns in
/// ascending order.  Fully deterministic.
inline std::vector<std::size_t> rref_inplace(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == 0)
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != row)
            for (std::size_t c = col; c < m.cols(); ++c)
                std::swap(m(sel, c), m(row, c));
        const Rat inv = Rat(1) / m(row, col);
        if (inv != 1)
            for (std::size_t c = col; c < m.cols(); ++c)
                m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row)
                continue;
            const Rat f = m(r, col);
            if (f == 0)
                continue;
            for (std::size_t c = col; c < m.cols(); ++c)
                if (m(row, c) != 0)
                    m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(Mat m) { return rref_inplace(m).size(); }

inline bool is_invertible(const Mat& m) {
    return m.rows() == m.cols() && rank(m) == m.rows();
}

/// Columns form the canonical kernel basis: one vector per free column f,
/// with entry 1 at f and back-substituted pivot entries.
inline Mat kernel_basis(Mat m) {
    const std::size_t n = m.cols();
    std::vector<std::size_t> pivots = rref_inplace(m);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    Mat basis(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis(free_cols[k], k) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            basis(pivots[i], k) = -m(i, free_cols[k]);
    }
    return basis;
}

/// Inverse of a square invertible matrix; throws on singular input.
inline Mat inverse(const Mat& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    Mat work(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            work(r, c) = m(r, c);
        work(r, n + r) = 1;
    }
    auto pivots = rref_inplace(work);
    if (pivots.size() != n || (n > 0 && pivots.back() != n - 1))
        throw std::invalid_argument("matrix is singular");
    Mat inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            inv(r, c) = work(r, n + c);
    return inv;
}

/// Greedy row basis: scan rows top to bottom, keep each row that enlarges
/// the span of the rows kept so far.  Returns the kept row indices.
inline std::vector<std::size_t> greedy_row_basis(const Mat& m) {
    std::vector<std::size_t> kept;
    Mat acc(m.rows(), m.cols());
    std::size_t used = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        // Reduce row r against the echelon rows accumulated in acc.
        std::vector<Rat> v(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            v[c] = m(r, c);
        for (std::size_t i = 0; i < used; ++i) {
            const Rat f = v[pivot_cols[i]];
            if (f == 0)
                continue;
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (acc(i, c) != 0)
                    v[c] -= f * acc(i, c);
        }
        std::size_t lead = m.cols();
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (v[c] != 0) {
                lead = c;
                break;
            }
        if (lead == m.cols())
            continue;
        const Rat inv = Rat(1) / v[lead];
        for (std::size_t c = 0; c < m.cols(); ++c)
            acc(used, c) = v[c] * inv;
        pivot_cols.push_back(lead);
        kept.push_back(r);
        ++used;
    }
    return kept;
}

} // namespace extmod
