#include "photonstats/matrix.hpp"

#include "photonstats/errors.hpp"

namespace photonstats {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = CRational(Rational(1));
    return m;
}

CMatrix cmatrix_from(const ZMatrix& z) {
    CMatrix m(static_cast<int>(z.rows()), static_cast<int>(z.cols()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = CRational(z(i, j));
    return m;
}

ZMatrix zmatrix_from(const CMatrix& m) {
    ZMatrix z(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) z(i, j) = to_complex(m(i, j));
    return z;
}

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
    if (x.cols != y.rows) throw ValidationError("matmul: shape mismatch");
    CMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const CRational& v = x(i, k);
            if (v.is_zero()) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

CMatrix matadd(const CMatrix& x, const CMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw ValidationError("matadd: shape mismatch");
    CMatrix r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

CMatrix conj_transpose(const CMatrix& x) {
    CMatrix r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = conj(x(i, j));
    return r;
}

CMatrix scale(const Rational& s, const CMatrix& x) {
    CMatrix r = x;
    for (auto& v : r.a) v = s * v;
    return r;
}

CRational trace(const CMatrix& x) {
    if (x.rows != x.cols) throw ValidationError("trace: matrix not square");
    CRational t;
    for (int i = 0; i < x.rows; ++i) t += x(i, i);
    return t;
}

bool is_hermitian_exact(const CMatrix& x) {
    if (x.rows != x.cols) return false;
    for (int i = 0; i < x.rows; ++i)
        for (int j = i; j < x.cols; ++j)
            if (x(i, j) != conj(x(j, i))) return false;
    return true;
}

double hermitian_defect(const ZMatrix& z) {
    if (z.rows() != z.cols()) throw ValidationError("hermitian_defect: matrix not square");
    return (z - z.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace photonstats
