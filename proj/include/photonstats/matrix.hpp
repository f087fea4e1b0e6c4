#pragma once

#include <Eigen/Dense>

#include <vector>

#include "photonstats/rational.hpp"

namespace photonstats {

using ZMatrix = Eigen::MatrixXcd;
using ZVector = Eigen::VectorXcd;
using ZScalar = std::complex<double>;

// Dense matrix with exact complex-rational entries, row major.
struct CMatrix {
    int rows = 0, cols = 0;
    std::vector<CRational> a;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    CRational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const CRational& operator()(int i, int j) const {
        return a[static_cast<std::size_t>(i) * cols + j];
    }

    static CMatrix identity(int n);
};

CMatrix cmatrix_from(const ZMatrix& z);
ZMatrix zmatrix_from(const CMatrix& m);
CMatrix matmul(const CMatrix& x, const CMatrix& y);
CMatrix matadd(const CMatrix& x, const CMatrix& y);
CMatrix conj_transpose(const CMatrix& x);
CMatrix scale(const Rational& s, const CMatrix& x);
CRational trace(const CMatrix& x);
bool is_hermitian_exact(const CMatrix& x);

// max_ij |(z - z^H)_ij|, the Hermitian defect of a numeric matrix.
double hermitian_defect(const ZMatrix& z);

inline constexpr double kHermitianTol = 1e-12;

}  // namespace photonstats
