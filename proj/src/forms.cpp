#include "syzlab/forms.hpp"

#include <cmath>

#include "syzlab/errors.hpp"

namespace syz {

const char* chart_name(Chart c) {
    switch (c) {
        case Chart::ZChart:
            return "z";
        case Chart::YChart:
            return "y";
        case Chart::Frame:
            return "frame";
    }
    return "?";
}

void RealTwoForm::validate(double tol) const {
    double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M + M.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
        throw ValidationError("2-form matrix is not antisymmetric");
    }
}

Mat4 wedge1(const Vec4& a, const Vec4& b) { return a * b.transpose() - b * a.transpose(); }

CMat4 wedge1(const CVec4& a, const CVec4& b) { return a * b.transpose() - b * a.transpose(); }

Eigen::Matrix<cplx, 2, 4> holomorphic_coframe(Chart chart) {
    const cplx i(0.0, 1.0);
    Eigen::Matrix<cplx, 2, 4> p = Eigen::Matrix<cplx, 2, 4>::Zero();
    switch (chart) {
        case Chart::ZChart:
            p(0, 0) = 1.0;
            p(0, 1) = i;
            p(1, 2) = 1.0;
            p(1, 3) = i;
            break;
        case Chart::YChart:
            p(0, 2) = 1.0;
            p(0, 3) = i;
            p(1, 0) = 1.0;
            p(1, 1) = i;
            break;
        case Chart::Frame:
            throw ValidationError("frame chart carries no holomorphic coframe");
    }
    return p;
}

Mat4 form_from_hermitian(const CMat2& h, Chart chart) {
    const auto p = holomorphic_coframe(chart);
    const cplx i(0.0, 1.0);
    Mat4 m;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            cplx s = 0.0;
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    s += h(j, k) * (p(j, a) * std::conj(p(k, b)) - p(j, b) * std::conj(p(k, a)));
                }
            }
            m(a, b) = (i * s).real();
        }
    }
    return m;
}

CMat2 hermitian_from_form(const Mat4& m, Chart chart) {
    // Dual frame d/dw_j = (1/2)(d/dRe - i d/dIm) written in chart components.
    const auto p = holomorphic_coframe(chart);
    Eigen::Matrix<cplx, 4, 2> v = Eigen::Matrix<cplx, 4, 2>::Zero();
    for (int j = 0; j < 2; ++j) {
        int re = -1;
        for (int a = 0; a < 4; ++a) {
            if (p(j, a) == cplx(1.0, 0.0)) re = a;
        }
        v(re, j) = 0.5;
        v(re + 1, j) = cplx(0.0, -0.5);
    }
    const CMat4 mc = m.cast<cplx>();
    CMat2 h;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            cplx s = (v.col(j).transpose() * mc * v.col(k).conjugate())(0, 0);
            h(j, k) = cplx(0.0, -1.0) * s;
        }
    }
    return h;
}

Mat4 complex_structure(Chart chart) {
    if (chart == Chart::Frame) throw ValidationError("frame chart carries no complex structure");
    Mat4 j = Mat4::Zero();
    // Both charts pair coordinates (0,1) and (2,3) as (Re, Im).
    j(1, 0) = 1.0;
    j(0, 1) = -1.0;
    j(3, 2) = 1.0;
    j(2, 3) = -1.0;
    return j;
}

Mat4 metric_from_form(const Mat4& m, const Mat4& j) {
    return m * j;
}

double form_norm(const Mat4& b, const Mat4& g) {
    Eigen::LDLT<Mat4> ldlt(g);
    if (ldlt.info() != Eigen::Success) throw NumericalFailure("form_norm: singular metric");
    Mat4 x = ldlt.solve(b);
    Mat4 y = ldlt.solve(b.transpose());
    double s = 0.5 * (x * y).trace();
    return std::sqrt(std::max(0.0, s));
}

}  // namespace syz
