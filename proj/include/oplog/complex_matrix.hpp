#ifndef OPLOG_COMPLEX_MATRIX_HPP
#define OPLOG_COMPLEX_MATRIX_HPP

// Dense square complex matrix, row-major. The finite-dimensional stand-in for
// bounded operators throughout the library. Values are immutable by
// convention once handed across a module boundary; all operations return
// fresh matrices.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "oplog/kernels.hpp"

namespace oplog {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);
    // rows given as nested lists; all rows must have length = number of rows
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    cplx* row(std::size_t i) { return data_.data() + i * dim_; }
    const cplx* row(std::size_t i) const { return data_.data() + i * dim_; }
    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }
    std::size_t size() const noexcept { return data_.size(); }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);
    // adds s to every diagonal entry
    ComplexMatrix& shift_diagonal(cplx s);

    ComplexMatrix conj_transpose() const;

    double frobenius_norm() const;
    double one_norm() const;   // max column abs sum
    double inf_norm() const;   // max row abs sum
    double max_abs() const;
    bool is_finite() const;

    // y = A x
    std::vector<cplx> apply(const std::vector<cplx>& x) const;

private:
    std::size_t dim_;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// vector helpers shared by the solvers and the field code
double vec_norm(const std::vector<cplx>& v);
bool vec_is_finite(const std::vector<cplx>& v);

}  // namespace oplog

#endif
