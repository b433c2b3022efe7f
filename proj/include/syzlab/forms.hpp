#pragma once

#include "syzlab/numerics.hpp"

namespace syz {

// Real chart in which a pointwise 2-form is expressed.
//   ZChart: (x1, x2, Re z, Im z) with x = x1 + i x2.
//   YChart: (l, theta, x1, x2) with y = -log z = l + i theta.
//   Frame:  an abstract frame with no complex structure attached.
enum class Chart { ZChart, YChart, Frame };

const char* chart_name(Chart c);

// A 2-form at a point, stored as M_ab = omega(e_a, e_b).
struct RealTwoForm {
    Mat4 M = Mat4::Zero();
    Chart chart = Chart::ZChart;

    // Throws ValidationError if M is not antisymmetric to tol (relative to max|M|).
    void validate(double tol = 1e-12) const;
};

// Coefficient of a ^ b against e0^e1^e2^e3 for antisymmetric a, b.
template <class MatA, class MatB>
auto wedge_top(const MatA& a, const MatB& b) {
    return a(0, 1) * b(2, 3) - a(0, 2) * b(1, 3) + a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3) -
           a(1, 3) * b(0, 2) + a(2, 3) * b(0, 1);
}

// Antisymmetric matrix of the wedge of two 1-forms.
Mat4 wedge1(const Vec4& a, const Vec4& b);
CMat4 wedge1(const CVec4& a, const CVec4& b);

// Components dw_j(e_a) of the two holomorphic coordinates of the chart; row 0
// is the fibre coordinate x, row 1 the base coordinate (z or y).
Eigen::Matrix<cplx, 2, 4> holomorphic_coframe(Chart chart);

// omega = i sum_jk H_jk dw_j ^ conj(dw_k).
Mat4 form_from_hermitian(const CMat2& h, Chart chart);

// Inverse of form_from_hermitian for forms of type (1,1).
CMat2 hermitian_from_form(const Mat4& m, Chart chart);

// Standard complex structure of the chart acting on tangent vectors:
// J d/d(Re w) = d/d(Im w).
Mat4 complex_structure(Chart chart);

// Pullback through a linear map with columns = images of the source basis.
inline Mat4 pullback(const Mat4& m, const Mat4& jac) { return jac.transpose() * m * jac; }

// Riemannian metric g(u, v) = omega(u, J v).
Mat4 metric_from_form(const Mat4& m, const Mat4& j);

// Pointwise norm of a real 2-form b measured with metric g:
// |b|^2 = (1/2) tr(g^-1 b g^-1 b^T).
double form_norm(const Mat4& b, const Mat4& g);

}  // namespace syz
