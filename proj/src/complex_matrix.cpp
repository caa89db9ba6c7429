#include "oplog/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace oplog {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    ComplexMatrix m(rows.size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != rows.size()) throw std::invalid_argument("from_rows: matrix must be square");
        std::size_t j = 0;
        for (const auto& v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    kernels::axpy(data_.data(), o.data_.data(), cplx{1.0, 0.0}, data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    kernels::axpy(data_.data(), o.data_.data(), cplx{-1.0, 0.0}, data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    kernels::scal(data_.data(), s, data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::shift_diagonal(cplx s) {
    for (std::size_t i = 0; i < dim_; ++i) (*this)(i, i) += s;
    return *this;
}

ComplexMatrix ComplexMatrix::conj_transpose() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::sum_abs2(data_.data(), data_.size()));
}

double ComplexMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += std::abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

double ComplexMatrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += std::abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const cplx& v : data_) {
        double a = std::abs(v);
        if (a > best) best = a;
    }
    return best;
}

bool ComplexMatrix::is_finite() const {
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& x) const {
    if (x.size() != dim_) throw std::invalid_argument("apply: size mismatch");
    std::vector<cplx> y(dim_);
    for (std::size_t i = 0; i < dim_; ++i) y[i] = kernels::dotu(row(i), x.data(), dim_);
    return y;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matmul: dim mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    // ikj order: C[i,:] accumulates a(i,k) * B[k,:], contiguous axpy per term
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik != cplx{0.0, 0.0}) kernels::axpy(c.row(i), b.row(k), aik, n);
        }
    return c;
}

ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

double vec_norm(const std::vector<cplx>& v) {
    return std::sqrt(kernels::sum_abs2(v.data(), v.size()));
}

bool vec_is_finite(const std::vector<cplx>& v) {
    for (const cplx& x : v)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

}  // namespace oplog
