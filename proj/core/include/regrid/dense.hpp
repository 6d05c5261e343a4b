#pragma once

#include <regrid/errors.hpp>
#include <regrid/layout.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace regrid {

enum class op_kind { identity, transpose, conj_transpose };

std::string_view to_string(op_kind op);
// "n"/"identity", "t"/"transpose", "c"/"conj-transpose". Throws parse_error.
op_kind parse_op(std::string_view name);

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
T conj_if_complex(const T& x) {
    if constexpr (is_complex<T>::value) {
        return std::conj(x);
    } else {
        return x;
    }
}

/// Row-major dense matrix, used as the reference the distributed result is checked against.
template <class T>
class dense_matrix {
public:
    dense_matrix() = default;
    dense_matrix(index_t rows, index_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(std::size_t(rows * cols), fill) {}

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    T& operator()(index_t r, index_t c) { return data_[std::size_t(r * cols_ + c)]; }
    const T& operator()(index_t r, index_t c) const { return data_[std::size_t(r * cols_ + c)]; }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const dense_matrix&, const dense_matrix&) = default;

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<T> data_;
};

/// Position of the first differing element, if any.
template <class T>
std::optional<std::pair<index_t, index_t>> first_mismatch(const dense_matrix<T>& a,
                                                          const dense_matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::pair<index_t, index_t>{-1, -1};
    for (index_t r = 0; r < a.rows(); ++r) {
        for (index_t c = 0; c < a.cols(); ++c) {
            if (!(a(r, c) == b(r, c))) return std::pair{r, c};
        }
    }
    return std::nullopt;
}

/// alpha * op(b) + beta * a, computed densely.
template <class T>
dense_matrix<T> reference_transform(const T& alpha, op_kind op, const dense_matrix<T>& b,
                                    const T& beta, const dense_matrix<T>& a) {
    const bool trans = op != op_kind::identity;
    const index_t rows = trans ? b.cols() : b.rows();
    const index_t cols = trans ? b.rows() : b.cols();
    if (a.rows() != rows || a.cols() != cols) throw extent_error("reference: incompatible extents");
    dense_matrix<T> out(rows, cols);
    for (index_t r = 0; r < rows; ++r) {
        for (index_t c = 0; c < cols; ++c) {
            T x = trans ? b(c, r) : b(r, c);
            if (op == op_kind::conj_transpose) x = conj_if_complex(x);
            out(r, c) = beta == T{} ? alpha * x : alpha * x + beta * a(r, c);
        }
    }
    return out;
}

} // namespace regrid
