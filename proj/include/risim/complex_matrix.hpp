#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace risim {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Dimensions are strictly positive and
/// entries supplied at construction must be finite.
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const noexcept { return entries_; }

    std::vector<Complex> column(std::size_t c) const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate_transpose() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex factor);

/// sqrt of the sum of squared entry magnitudes.
double frobenius_norm(const ComplexMatrix& h);

}  // namespace risim
