#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mdsconv/gf.hpp"

namespace mdsconv {

// Dense matrix over GF(2^m). Immutable use after filling; no sparsity to
// exploit at the sizes this library deals with.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Fe> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    Fe& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    Fe at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

Matrix matmul(const Matrix& x, const Matrix& y, const Field& f);
Matrix transpose(const Matrix& x);

// Systematic rate (n-1)/n convolutional code, stored as the parity
// coefficient array r(i,j) for degrees i = 0..deg and positions j = 1..k.
// Rows are kept j-ascending in memory; the j-descending order of the table
// convention is a parse/serialize concern only.
class Code {
public:
    Code(FieldPtr field, int n, std::vector<std::vector<Fe>> coeff_rows);

    // Rows of logs (degrees 1..D in order, entries j-descending, r(0,*) = 1
    // implied), exactly the convention of the bundled tables.
    static Code from_log_rows(FieldPtr field, int n, const std::vector<std::vector<int>>& log_rows);

    const Field& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }
    int n() const { return n_; }
    int k() const { return n_ - 1; }
    int deg() const { return deg_; }  // maximum coefficient degree D

    // degree i in 0..deg, position j in 1..k
    Fe r(int i, int j) const { return coeff_[static_cast<std::size_t>(i) * k() + (j - 1)]; }
    const std::vector<Fe>& coeffs() const { return coeff_; }

    bool canonical() const;  // r(0,j) = 1 for all j and r(1,k) = 1

    bool operator==(const Code& o) const
    {
        return n_ == o.n_ && deg_ == o.deg_ && coeff_ == o.coeff_ &&
               field_->m() == o.field_->m() && field_->poly_mask() == o.field_->poly_mask();
    }

private:
    FieldPtr field_;
    int n_;
    int deg_;
    std::vector<Fe> coeff_;  // (deg+1) x k, row-major, j ascending
};

// Truncated parity check matrix, (L+1) x n(L+1). Coefficients above the
// code's degree are treated as zero.
Matrix parity_truncated(const Code& code, int L);

// Truncated systematic generator, k(L+1) x n(L+1).
Matrix generator_truncated(const Code& code, int L);

// The reduced matrix: parity_truncated with the identity columns
// (k+1), 2(k+1), ... removed; (D+1) x k(D+1). Requires D <= code.deg().
Matrix reduced_matrix(const Code& code, int D);

// Line-oriented text format:
//   gf <m> <poly_mask_binary>
//   n <n>
//   rows <D>
// then D rows of k logs (j-descending). Parse-then-serialize is
// byte-identical for canonical files.
std::string code_to_string(const Code& code);
Code code_from_string(const std::string& text);
void code_to_file(const Code& code, const std::string& path);
Code code_from_file(const std::string& path);

}  // namespace mdsconv
