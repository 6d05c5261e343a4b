#pragma once

#include <regrid/dense.hpp>
#include <regrid/layout.hpp>

#include <complex>
#include <cstdint>
#include <string>

namespace regrid {

// Layout files (JSON), either explicit
//   {"rows": m, "cols": n, "row_splits": [...], "col_splits": [...],
//    "n_procs": p, "owners": [[...], ...], "elem_size": k}
// or block-cyclic shorthand
//   {"block_cyclic": {"m", "n", "mb", "nb", "p_rows", "p_cols", "proc_order"}, "elem_size": k}
// proc_order is "row-major" (default) or "col-major". All functions throw parse_error.
layout parse_layout(const std::string& json_text);
layout load_layout(const std::string& path);
std::string layout_to_json(const layout& l);

// Matrix data files: one text line "REGRID-MATRIX <rows> <cols> <type>\n"
// with type i64, f64 or c128, followed by rows*cols elements in row-major
// order as raw little-endian values (c128: real then imaginary part).
enum class element_type { i64, f64, c128 };

std::string_view to_string(element_type t);
element_type parse_element_type(std::string_view name);
int element_size(element_type t);

struct matrix_header {
    index_t rows = 0;
    index_t cols = 0;
    element_type type = element_type::f64;
};

matrix_header read_matrix_header(const std::string& path);

template <class T>
constexpr element_type element_type_of();
template <>
constexpr element_type element_type_of<std::int64_t>() { return element_type::i64; }
template <>
constexpr element_type element_type_of<double>() { return element_type::f64; }
template <>
constexpr element_type element_type_of<std::complex<double>>() { return element_type::c128; }

template <class T>
void save_matrix(const std::string& path, const dense_matrix<T>& m);

// Throws parse_error when the file's element type differs from T.
template <class T>
dense_matrix<T> load_matrix(const std::string& path);

} // namespace regrid
