#include "risim/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "risim/errors.hpp"

namespace risim {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;

struct ColumnCouple {
    double norm_p;
    double norm_q;
    Complex inner;
};

ColumnCouple couple(const ComplexMatrix& a, std::size_t p, std::size_t q) {
    ColumnCouple c{0.0, 0.0, Complex{0.0, 0.0}};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        c.norm_p += std::norm(a(i, p));
        c.norm_q += std::norm(a(i, q));
        c.inner += std::conj(a(i, p)) * a(i, q);
    }
    return c;
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, double c, Complex s) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const Complex xp = m(i, p);
        const Complex xq = m(i, q);
        m(i, p) = c * xp - std::conj(s) * xq;
        m(i, q) = s * xp + c * xq;
    }
}

double worst_residual(const ComplexMatrix& a) {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < a.cols(); ++p) {
        for (std::size_t q = p + 1; q < a.cols(); ++q) {
            const ColumnCouple cc = couple(a, p, q);
            const double scale = std::sqrt(cc.norm_p * cc.norm_q);
            if (scale > 0.0) {
                worst = std::max(worst, std::abs(cc.inner) / scale);
            }
        }
    }
    return worst;
}

// Orthogonalizes the columns of `a` in place (rows >= cols), accumulating the
// right-hand rotations into `v`.
void jacobi_orthogonalize(ComplexMatrix& a, ComplexMatrix& v) {
    const std::size_t n = a.cols();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const ColumnCouple cc = couple(a, p, q);
                const double off = std::abs(cc.inner);
                const double scale = std::sqrt(cc.norm_p * cc.norm_q);
                if (scale == 0.0 || off <= kOffDiagonalTol * scale) {
                    continue;
                }
                rotated = true;
                const double zeta = (cc.norm_q - cc.norm_p) / (2.0 * off);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = (cc.inner / off) * (c * t);
                rotate_columns(a, p, q, c, s);
                rotate_columns(v, p, q, c, s);
            }
        }
        if (!rotated) {
            return;
        }
    }
    throw NumericalError("SVD did not converge within the sweep cap", worst_residual(a));
}

// Appends an orthonormal filler column for a zero singular value: the first
// canonical basis vector with enough mass left after projecting out the
// columns already placed in u[0..filled).
void fill_orthonormal_column(ComplexMatrix& u, std::size_t filled, std::size_t dest) {
    const std::size_t m = u.rows();
    for (std::size_t cand = 0; cand < m; ++cand) {
        std::vector<Complex> v(m, Complex{0.0, 0.0});
        v[cand] = 1.0;
        for (std::size_t j = 0; j < filled; ++j) {
            Complex proj{0.0, 0.0};
            for (std::size_t i = 0; i < m; ++i) {
                proj += std::conj(u(i, j)) * v[i];
            }
            for (std::size_t i = 0; i < m; ++i) {
                v[i] -= proj * u(i, j);
            }
        }
        double norm_sq = 0.0;
        for (const Complex& x : v) {
            norm_sq += std::norm(x);
        }
        if (norm_sq > 0.25) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (std::size_t i = 0; i < m; ++i) {
                u(i, dest) = v[i] * inv;
            }
            return;
        }
    }
    throw NumericalError("failed to complete an orthonormal basis", 0.0);
}

SvdResult svd_tall(const ComplexMatrix& h) {
    const std::size_t m = h.rows();
    const std::size_t n = h.cols();

    ComplexMatrix work = h;
    ComplexMatrix v = ComplexMatrix::identity(n);
    jacobi_orthogonalize(work, v);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sum += std::norm(work(i, j));
        }
        norms[j] = std::sqrt(sum);
    }

    // Descending order; stable so equal values keep column order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SvdResult result{ComplexMatrix(m, n), std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t out = 0; out < n; ++out) {
        const std::size_t src = order[out];
        result.singular_values[out] = norms[src];
        for (std::size_t i = 0; i < n; ++i) {
            result.right_vectors(i, out) = v(i, src);
        }
        if (norms[src] > 0.0) {
            const double inv = 1.0 / norms[src];
            for (std::size_t i = 0; i < m; ++i) {
                result.left_vectors(i, out) = work(i, src) * inv;
            }
        } else {
            // Zero values sort last, so every prior column is already final.
            fill_orthonormal_column(result.left_vectors, out, out);
        }
    }
    return result;
}

}  // namespace

SvdResult svd(const ComplexMatrix& h) {
    if (h.rows() >= h.cols()) {
        return svd_tall(h);
    }
    // Wide case via the conjugate transpose: h^H = U' S V'^H implies
    // h = V' S U'^H, so the factors swap roles.
    SvdResult t = svd_tall(h.conjugate_transpose());
    return SvdResult{std::move(t.right_vectors), std::move(t.singular_values),
                     std::move(t.left_vectors)};
}

}  // namespace risim
