#include "syzlab/calabi_hk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

Vec4 unit(int i) {
    Vec4 v = Vec4::Zero();
    v(i) = 1.0;
    return v;
}

// Integral of the 1-form dx1 along the straight coordinate segment a -> b.
double integrate_dx1(const CalabiModel& m, const Vec4& a, const Vec4& b) {
    const GaussRule rule = gauss_legendre(8, 0.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const Vec4 q = a + rule.x[i] * (b - a);
        s += rule.w[i] * dx1_form(m, {q(0), q(1), q(2), q(3)}).dot(b - a);
    }
    return s;
}

Vec4 section_start(const CalabiModel& m, double ell, double y2) {
    return {ell, -m.b() / (2.0 * m.a()) * ell * ell, y2 / m.tau.imag(), 0.0};
}

double y2_of(const CalabiModel& m, const CalabiPoint& pt) {
    return m.tau.imag() * pt.xi1 - m.tau.real() * pt.xi2;
}

}  // namespace

CalabiModel CalabiModel::from_input(int k, const ComplexInput& tau) {
    CalabiModel m;
    m.k = k;
    m.tau = tau.value;
    m.tau_exact = tau.exact;
    m.validate();
    return m;
}

void CalabiModel::validate() const {
    if (k < 1) throw ValidationError("Calabi model degree k must be >= 1");
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()) || !(tau.imag() > 0.0)) {
        throw ValidationError("tau must have Im tau > 0");
    }
    if (tau_exact) {
        const Rational& re = tau_exact->re;
        const Rational& im = tau_exact->im;
        const Rational half(1, 2);
        if ((re - (-half)).num() < 0 || (re - half).num() >= 0) {
            throw ValidationError("tau outside the fundamental domain: need Re tau in [-1/2, 1/2)");
        }
        if ((re * re + im * im - Rational(1)).num() < 0) {
            throw ValidationError("tau outside the fundamental domain: need |tau| >= 1");
        }
        return;
    }
    if (tau.real() < -0.5 || tau.real() >= 0.5) {
        throw ValidationError("tau outside the fundamental domain: need Re tau in [-1/2, 1/2)");
    }
    // Points such as -1/2 + i sqrt(3)/2 sit on |tau| = 1 only up to rounding.
    if (std::norm(tau) < 1.0 - 1e-12) {
        throw ValidationError("tau outside the fundamental domain: need |tau| >= 1");
    }
}

void CalabiPoint::validate() const {
    if (!(ell > 0.0) || !std::isfinite(ell)) throw ValidationError("Calabi point needs l > 0");
    if (!std::isfinite(psi) || !std::isfinite(xi1) || !std::isfinite(xi2)) {
        throw ValidationError("Calabi point coordinates must be finite");
    }
}

Mat4 calabi_frame(const CalabiModel& m, const CalabiPoint& pt) {
    const double c2 = m.c() * m.c();
    Mat4 f = Mat4::Identity();
    f(1, 2) = 0.5 * c2 * pt.xi2;
    f(1, 3) = -0.5 * c2 * pt.xi1;
    return f;
}

Mat4 frame_to_coords(const Mat4& mf, const Mat4& frame) { return frame.transpose() * mf * frame; }

HkTriple hk_triple(const CalabiModel& m, const CalabiPoint& pt) {
    m.validate();
    pt.validate();
    const double c = m.c();
    const double l = pt.ell;
    const Vec4 dl = unit(0);
    const Vec4 th = unit(1);
    const Vec4 d1 = unit(2);
    const Vec4 d2 = unit(3);
    HkTriple t;
    t.J = {wedge1(th, dl) + c * c * l * wedge1(d1, d2), Chart::Frame};
    t.I = {c * (wedge1(th, d2) + l * wedge1(dl, d1)), Chart::Frame};
    t.K = {c * (wedge1(d1, th) + l * wedge1(dl, d2)), Chart::Frame};
    return t;
}

Mat4 gibbons_hawking_metric(const CalabiModel& m, const CalabiPoint& pt) {
    m.validate();
    pt.validate();
    const double c2 = m.c() * m.c();
    return Vec4(pt.ell, 1.0 / pt.ell, c2 * pt.ell, c2 * pt.ell).asDiagonal();
}

CMat4 holomorphic_volume_J(const CalabiModel& m, const CalabiPoint& pt) {
    m.validate();
    pt.validate();
    const double c2 = m.c() * m.c();
    const cplx i(0.0, 1.0);
    const CVec4 a(-pt.ell, i, 0.5 * c2 * pt.xi1, 0.5 * c2 * pt.xi2);
    const CVec4 b(0.0, 0.0, 1.0, i);
    const cplx pref = i * std::conj(m.tau) / std::abs(m.tau) * m.c();
    return pref * wedge1(a, b);
}

Mat4 complex_structure_of(const Mat4& omega_coords, const Mat4& metric_coords) {
    Eigen::FullPivLU<Mat4> lu(omega_coords);
    if (!lu.isInvertible()) throw NumericalFailure("complex_structure_of: degenerate 2-form");
    return lu.solve(metric_coords);
}

double gibbons_hawking_check(const CalabiModel& m, const CalabiPoint& pt, double theta_perturb) {
    HkTriple t = hk_triple(m, pt);
    Mat4 om = t.J.M;
    om(1, 0) *= 1.0 + theta_perturb;
    om(0, 1) *= 1.0 + theta_perturb;
    // J on covectors: J dl = theta / l, J theta = -l dl, J dxi1 = -dxi2, J dxi2 = dxi1.
    Mat4 jc = Mat4::Zero();
    jc(1, 0) = 1.0 / pt.ell;
    jc(0, 1) = -pt.ell;
    jc(3, 2) = -1.0;
    jc(2, 3) = 1.0;
    const Mat4 g = metric_from_form(om, jc.transpose());
    return (g - gibbons_hawking_metric(m, pt)).cwiseAbs().maxCoeff();
}

const char* sf_class_name(SfClass c) {
    switch (c) {
        case SfClass::Standard:
            return "standard";
        case SfClass::QuasiRegular:
            return "quasi-regular";
        case SfClass::Irregular:
            return "irregular";
    }
    return "?";
}

RotationConstants rotation_constants(int k, cplx tau) {
    if (k < 1) throw ValidationError("degree k must be >= 1");
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
        throw ValidationError("tau must have Im tau > 0");
    }
    const double at = std::abs(tau);
    return {kTwoPi * at * std::sqrt(kTwoPi * k / tau.imag()), std::sqrt(k * kPi * tau.imag()) / at,
            -k * tau.real() / (2.0 * std::norm(tau))};
}

SfClassification classify_tau(cplx tau, const std::optional<ExactComplex>& tau_exact) {
    if (!(tau.imag() > 0.0)) throw ValidationError("tau must have Im tau > 0");
    SfClassification cls;
    if (tau_exact) {
        try {
            const Rational& re = tau_exact->re;
            const Rational& im = tau_exact->im;
            // 2 b0 / k = -Re tau / |tau|^2.
            const Rational q = -re / (re * re + im * im);
            cls.ratio = q;
            if (q.is_zero()) {
                cls.kind = SfClass::Standard;
            } else {
                cls.kind = SfClass::QuasiRegular;
                cls.m1 = q.den();
                cls.m2 = -q.num();
            }
            return cls;
        } catch (const std::overflow_error&) {
            // Fall through to float mode.
        }
    }
    if (tau.real() == 0.0) {
        cls.ratio = Rational(0);
        cls.kind = SfClass::Standard;
        return cls;
    }
    cls.heuristic = true;
    const std::optional<Rational> q = rational_approx(-tau.real() / std::norm(tau));
    if (q) {
        cls.kind = SfClass::QuasiRegular;
        cls.m1 = q->den();
        cls.m2 = -q->num();
    } else {
        cls.kind = SfClass::Irregular;
    }
    return cls;
}

Rotation rotate(const CalabiModel& m) {
    m.validate();
    const RotationConstants rc = rotation_constants(m.k, m.tau);
    Rotation r;
    r.params.k = m.k;
    r.params.eps = rc.eps;
    r.params.alpha = rc.alpha;
    r.params.b0 = rc.b0;
    r.cls = classify_tau(m.tau, m.tau_exact);
    if (r.cls.ratio) {
        try {
            r.params.set_b0(Rational(m.k, 2) * *r.cls.ratio);
        } catch (const std::overflow_error&) {
            r.params.b0 = rc.b0;
        }
    } else if (r.cls.kind == SfClass::Irregular) {
        r.params.b0_irrational = true;
    }
    return r;
}

Mat4 omega_tau(const CalabiModel& m, const CalabiPoint& pt) {
    HkTriple t = hk_triple(m, pt);
    return frame_to_coords(m.a() * t.I.M + m.b() * t.K.M, calabi_frame(m, pt));
}

Vec4 dx1_form(const CalabiModel& m, const CalabiPoint& pt) {
    const double a = m.a();
    const double b = m.b();
    const double c2 = m.c() * m.c();
    const Vec4 theta = calabi_frame(m, pt).row(1).transpose();
    Vec4 out = a * theta;
    out(2) -= c2 * a * pt.xi2;
    out(3) -= c2 * b * pt.xi2;
    out(0) += b * pt.ell;
    return out;
}

double x1_by_path(const CalabiModel& m, const CalabiPoint& pt) {
    m.validate();
    pt.validate();
    return integrate_dx1(m, section_start(m, pt.ell, y2_of(m, pt)), pt.coords());
}

double x1_closed_form(const CalabiModel& m, const CalabiPoint& pt) {
    const double a = m.a();
    const double b = m.b();
    const double c2 = m.c() * m.c();
    return a * pt.psi - 0.5 * a * c2 * pt.xi1 * pt.xi2 - 0.5 * b * c2 * pt.xi2 * pt.xi2 +
           0.5 * b * pt.ell * pt.ell;
}

HoloCoords holomorphic_coords(const CalabiModel& m, const CalabiPoint& pt) {
    const double x1 = x1_by_path(m, pt);
    const double x2 = m.c() * pt.ell * pt.xi2;
    HoloCoords h;
    h.x_tilde = cplx(x1, x2) / (kTwoPi * m.a());
    h.y = cplx(std::abs(m.tau) * pt.ell / m.c(), y2_of(m, pt));
    h.point = FiberPoint::from_y(h.x_tilde, kTwoPi * h.y / m.tau.imag());
    return h;
}

Mat4 holomorphic_jacobian(const CalabiModel& m, const CalabiPoint& pt) {
    m.validate();
    pt.validate();
    const double s = 1.0 / (kTwoPi * m.a());
    const Vec4 dx2(m.c() * pt.xi2, 0.0, 0.0, m.c() * pt.ell);
    const Vec4 dy1(std::abs(m.tau) / m.c(), 0.0, 0.0, 0.0);
    const Vec4 dy2(0.0, 0.0, m.tau.imag(), -m.tau.real());
    const cplx y(dy1(0) * pt.ell, y2_of(m, pt));
    const cplx lam = -kTwoPi / m.tau.imag() * std::exp(-kTwoPi * y / m.tau.imag());
    Mat4 jac;
    jac.row(0) = s * dx1_form(m, pt).transpose();
    jac.row(1) = s * dx2.transpose();
    jac.row(2) = (lam.real() * dy1 - lam.imag() * dy2).transpose();
    jac.row(3) = (lam.imag() * dy1 + lam.real() * dy2).transpose();
    return jac;
}

double verify_rotation(const CalabiModel& m, const CalabiPoint& pt) {
    const Rotation r = rotate(m);
    const HoloCoords h = holomorphic_coords(m, pt);
    const Mat4 pulled = pullback(sf_form(r.params, h.point).M, holomorphic_jacobian(m, pt));
    const Mat4 direct = omega_tau(m, pt);
    return (pulled - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff();
}

double verify_rotation_grid(const CalabiModel& m, int n_ell, int n_xi) {
    m.validate();
    if (n_ell < 1 || n_xi < 1) throw ValidationError("verify_rotation_grid needs positive grid sizes");
    const std::size_t total = static_cast<std::size_t>(n_ell) * n_xi * n_xi;
    std::vector<double> res(total);
    parallel_for(total, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / (n_xi * n_xi);
        const int j = (static_cast<int>(idx) / n_xi) % n_xi;
        const int q = static_cast<int>(idx) % n_xi;
        const double ell = n_ell == 1 ? 2.0 : 1.0 + 3.0 * i / (n_ell - 1);
        res[idx] = verify_rotation(m, {ell, 1.0, static_cast<double>(j) / n_xi, static_cast<double>(q) / n_xi});
    });
    return *std::max_element(res.begin(), res.end());
}

LatticeRelations lattice_relations(const CalabiModel& m, double ell, double y2) {
    m.validate();
    if (!(ell > 0.0)) throw ValidationError("lattice_relations needs l > 0");
    const double c = m.c();
    const double at = std::abs(m.tau);
    const double im = m.tau.imag();
    const Vec4 start = section_start(m, ell, y2);
    LatticeRelations out;
    out.psi_loop = integrate_dx1(m, start, start + Vec4(0.0, kTwoPi, 0.0, 0.0));
    // The deck transformation xi -> xi + tau acts on the fibre by a phase
    // rotation psi -> psi - k pi y2 / Im tau.
    const Vec4 end = start + Vec4(0.0, -m.k * kPi * y2 / im, m.tau.real(), im);
    out.fiber_loop = cplx(integrate_dx1(m, start, end), c * ell * im);
    const double y1 = at * ell / c;
    out.expected_psi = kTwoPi * m.a();
    out.expected_fiber = cplx(-kTwoPi * m.k * y2 / at, c * c * y1 * im / at);
    return out;
}

SlagDefect slag_Mck_check(const CalabiModel& m, double c, double K, int n, McKSlice slice) {
    m.validate();
    if (!(K > 0.0)) throw ValidationError("slag_Mck_check needs K > 0");
    if (n < 1) throw ValidationError("slag_Mck_check needs a positive grid size");
    const double im = m.tau.imag();
    const double re = m.tau.real();
    const std::size_t total = static_cast<std::size_t>(n) * n;
    std::vector<SlagDefect> vals(total);
    parallel_for(total, [&](std::size_t idx) {
        const double s1 = kTwoPi * static_cast<double>(idx / n) / n;
        const double s2 = static_cast<double>(idx % n) / n;
        CalabiPoint pt{K, s1, 0.0, 0.0};
        Vec4 t2;
        if (slice == McKSlice::Correct) {
            pt.xi2 = im * s2;
            pt.xi1 = (c + re * pt.xi2) / im;
            t2 = Vec4(0.0, 0.0, re / im, 1.0);
        } else {
            pt.xi1 = s2;
            pt.xi2 = c;
            t2 = Vec4(0.0, 0.0, 1.0, 0.0);
        }
        const Vec4 t1 = unit(1);
        const Mat4 frame = calabi_frame(m, pt);
        const Mat4 om = frame_to_coords(hk_triple(m, pt).J.M, frame);
        const Mat4 g = frame_to_coords(gibbons_hawking_metric(m, pt), frame);
        const CMat4 big = holomorphic_volume_J(m, pt);
        const double area = std::sqrt(t1.dot(g * t1) * t2.dot(g * t2) - std::pow(t1.dot(g * t2), 2));
        const cplx ov = (t1.cast<cplx>().transpose() * big * t2.cast<cplx>())(0, 0);
        vals[idx] = {std::abs(t1.dot(om * t2)) / area, std::abs(ov.imag()) / area};
    });
    SlagDefect out;
    for (const auto& v : vals) {
        out.omega = std::max(out.omega, v.omega);
        out.phase = std::max(out.phase, v.phase);
    }
    return out;
}

}  // namespace syz
