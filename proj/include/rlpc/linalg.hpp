#ifndef RLPC_LINALG_HPP
#define RLPC_LINALG_HPP

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rlpc/errors.hpp"
#include "rlpc/gf.hpp"

namespace rlpc {

// A field-operations context: the runtime handle generic algorithms compute
// with. All fields here have characteristic 2, so subtraction is addition.
template <class F>
concept FieldOps = requires(const F f, typename F::Elem a, typename F::Elem b) {
    { f.zero() } -> std::same_as<typename F::Elem>;
    { f.one() } -> std::same_as<typename F::Elem>;
    { f.add(a, b) } -> std::same_as<typename F::Elem>;
    { f.mul(a, b) } -> std::same_as<typename F::Elem>;
    { f.inv(a) } -> std::same_as<typename F::Elem>;
    { f.is_zero(a) } -> std::same_as<bool>;
};

struct BaseOps {
    const TowerField* F;
    using Elem = uint32_t;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const { return a ^ b; }
    Elem mul(Elem a, Elem b) const { return F->base().mul(a, b); }
    Elem inv(Elem a) const { return F->base().inv(a); }
    bool is_zero(Elem a) const { return a == 0; }
    Elem rand(Rng& rng) const { return F->base().rand(rng); }
};

struct MidOps {
    const TowerField* F;
    using Elem = FqmElem;
    Elem zero() const { return F->mid_zero(); }
    Elem one() const { return F->mid_one(); }
    Elem add(Elem a, Elem b) const { return F->mid_add(a, b); }
    Elem mul(Elem a, Elem b) const { return F->mid_mul(a, b); }
    Elem inv(Elem a) const { return F->mid_inv(a); }
    bool is_zero(Elem a) const { return F->mid_is_zero(a); }
    Elem rand(Rng& rng) const { return F->mid_rand(rng); }
};

struct TopOps {
    const TowerField* F;
    using Elem = FqnElem;
    Elem zero() const { return F->top_zero(); }
    Elem one() const { return F->top_one(); }
    Elem add(Elem a, Elem b) const { return F->top_add(a, b); }
    Elem mul(Elem a, Elem b) const { return F->top_mul(a, b); }
    Elem inv(Elem a) const { return F->top_inv(a); }
    bool is_zero(Elem a) const { return F->top_is_zero(a); }
    Elem rand(Rng& rng) const { return F->top_rand(rng); }
};

// Rectangular matrix, row-major value type.
template <class E>
class Mat {
   public:
    Mat() : r_(0), c_(0) {}
    Mat(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }

    E& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const E& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    std::vector<E> row(size_t i) const { return {a_.begin() + i * c_, a_.begin() + (i + 1) * c_}; }
    void set_row(size_t i, const std::vector<E>& v) {
        for (size_t j = 0; j < c_; ++j) a_[i * c_ + j] = v[j];
    }

    bool operator==(const Mat&) const = default;

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < c_; ++k) std::swap(a_[i * c_ + k], a_[j * c_ + k]);
    }

   private:
    size_t r_, c_;
    std::vector<E> a_;
};

template <FieldOps F, class E = typename F::Elem>
Mat<E> mat_identity(const F& f, size_t n) {
    Mat<E> a(n, n);
    for (size_t i = 0; i < n; ++i) a(i, i) = f.one();
    return a;
}

template <class E>
Mat<E> mat_transpose(const Mat<E>& a) {
    Mat<E> t(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

template <class E>
Mat<E> mat_stack(const Mat<E>& a, const Mat<E>& b) {
    Mat<E> s(a.rows() + b.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) s(a.rows() + i, j) = b(i, j);
    return s;
}

template <FieldOps F, class E = typename F::Elem>
Mat<E> mat_mul(const F& f, const Mat<E>& a, const Mat<E>& b) {
    Mat<E> c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            E aik = a(i, k);
            if (f.is_zero(aik)) continue;
            for (size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
        }
    return c;
}

template <FieldOps F, class E = typename F::Elem>
std::vector<E> vec_mat(const F& f, const std::vector<E>& v, const Mat<E>& a) {
    std::vector<E> out(a.cols(), f.zero());
    for (size_t i = 0; i < a.rows(); ++i) {
        if (f.is_zero(v[i])) continue;
        for (size_t j = 0; j < a.cols(); ++j) out[j] = f.add(out[j], f.mul(v[i], a(i, j)));
    }
    return out;
}

template <FieldOps F, class E = typename F::Elem>
std::vector<E> scale_vec(const F& f, E s, const std::vector<E>& v) {
    std::vector<E> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = f.mul(s, v[i]);
    return out;
}

template <FieldOps F, class E = typename F::Elem>
std::vector<E> add_vec(const F& f, const std::vector<E>& a, const std::vector<E>& b) {
    std::vector<E> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
    return out;
}

// In-place Gaussian elimination. Returns the rank; with `reduced` the matrix
// ends in reduced row echelon form.
template <FieldOps F, class E = typename F::Elem>
size_t row_reduce(const F& f, Mat<E>& a, bool reduced = true) {
    size_t rank = 0;
    for (size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
        size_t piv = a.rows();
        for (size_t i = rank; i < a.rows(); ++i)
            if (!f.is_zero(a(i, col))) {
                piv = i;
                break;
            }
        if (piv == a.rows()) continue;
        a.swap_rows(piv, rank);
        E d = f.inv(a(rank, col));
        for (size_t j = col; j < a.cols(); ++j) a(rank, j) = f.mul(d, a(rank, j));
        size_t from = reduced ? 0 : rank + 1;
        for (size_t i = from; i < a.rows(); ++i) {
            if (i == rank) continue;
            E c = a(i, col);
            if (f.is_zero(c)) continue;
            for (size_t j = col; j < a.cols(); ++j) a(i, j) = f.add(a(i, j), f.mul(c, a(rank, j)));
        }
        ++rank;
    }
    return rank;
}

template <FieldOps F, class E = typename F::Elem>
size_t rank_of(const F& f, Mat<E> a) {
    return row_reduce(f, a, false);
}

// Canonical generator of a row space.
template <FieldOps F, class E = typename F::Elem>
Mat<E> rref(const F& f, Mat<E> a) {
    size_t r = row_reduce(f, a, true);
    Mat<E> out(r, a.cols());
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    return out;
}

template <FieldOps F, class E = typename F::Elem>
Mat<E> mat_inverse(const F& f, const Mat<E>& a) {
    if (a.rows() != a.cols()) throw ParameterError("inverse of non-square matrix");
    size_t n = a.rows();
    Mat<E> aug(n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = f.one();
    }
    row_reduce(f, aug, true);
    // all pivots must land in the left block
    for (size_t i = 0; i < n; ++i) {
        size_t col = 0;
        while (col < 2 * n && f.is_zero(aug(i, col))) ++col;
        if (col != i) throw SingularMatrixError();
    }
    Mat<E> inv(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// Basis of the right null space {v : A v^T = 0}; one basis vector per row.
template <FieldOps F, class E = typename F::Elem>
Mat<E> kernel_basis(const F& f, Mat<E> a) {
    size_t r = row_reduce(f, a, true);
    std::vector<size_t> pivot_col(r);
    std::vector<bool> is_pivot(a.cols(), false);
    for (size_t i = 0, col = 0; i < r; ++i) {
        while (col < a.cols() && f.is_zero(a(i, col))) ++col;
        pivot_col[i] = col;
        is_pivot[col] = true;
    }
    Mat<E> ker(a.cols() - r, a.cols());
    size_t row = 0;
    for (size_t fc = 0; fc < a.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        ker(row, fc) = f.one();
        for (size_t i = 0; i < r; ++i) ker(row, pivot_col[i]) = a(i, fc);
        ++row;
    }
    return ker;
}

// Solves x A = y for a row vector x (characteristic 2). Throws if the system
// is inconsistent; among solutions the free coordinates are set to zero.
template <FieldOps F, class E = typename F::Elem>
std::vector<E> solve_left(const F& f, const Mat<E>& a, const std::vector<E>& y) {
    if (y.size() != a.cols()) throw ParameterError("solve_left: size mismatch");
    size_t n = a.cols(), k = a.rows();
    Mat<E> aug(n, k + 1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) aug(i, j) = a(j, i);
        aug(i, k) = y[i];
    }
    size_t r = row_reduce(f, aug, true);
    std::vector<E> x(k, f.zero());
    for (size_t i = 0; i < r; ++i) {
        size_t col = 0;
        while (col <= k && f.is_zero(aug(i, col))) ++col;
        if (col == k) throw NoSolutionError();
        x[col] = aug(i, k);
    }
    return x;
}

// Row-major hex dump of packed coordinates, for debugging.
inline std::string mat_dump(const TowerField& F, const Mat<FqnElem>& a) {
    std::string s;
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) {
            if (j) s += ' ';
            s += F.to_hex(a(i, j));
        }
        s += '\n';
    }
    return s;
}

inline std::string mat_dump(const TowerField& F, const Mat<FqmElem>& a) {
    std::string s;
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) {
            if (j) s += ' ';
            s += F.to_hex(a(i, j));
        }
        s += '\n';
    }
    return s;
}

}  // namespace rlpc

#endif
