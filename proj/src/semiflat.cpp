#include "syzlab/semiflat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

const cplx kI(0.0, 1.0);

using Vec64 = Eigen::Matrix<double, 64, 1>;

inline int idx3(int a, int b, int c) { return a * 16 + b * 4 + c; }
inline int idx4(int a, int b, int c, int d) { return a * 64 + b * 16 + c * 4 + d; }

// Gamma of the y-chart coframe xi = dx - Gamma dy.
cplx gamma_y(double b0, double ell, double x2) {
    return kI * x2 / ell + b0 * ell / (2.0 * kPi * kPi);
}

double w_of(int k, double ell) { return kTwoPi / (k * ell); }

}  // namespace

void ModelParams::validate() const {
    if (k < 1) throw ValidationError("k must be a positive integer");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
    if (!std::isfinite(b0)) throw ValidationError("b0 must be finite");
    for (const auto& [pw, c] : kappa.terms) {
        if (pw < 0 && c != cplx(0.0, 0.0)) {
            throw ValidationError("kappa must be a power series (no negative powers)");
        }
    }
    if (std::abs(kappa.coeff(0) - cplx(1.0, 0.0)) > 1e-14) {
        throw ValidationError("kappa must satisfy kappa(0) = 1");
    }
    if (b0_exact && b0_irrational) {
        throw ValidationError("b0 cannot be both exact rational and irrational");
    }
}

bool ModelParams::kappa_is_one() const {
    for (const auto& [pw, c] : kappa.terms) {
        if (pw != 0 && c != cplx(0.0, 0.0)) return false;
    }
    return true;
}

ModelParams& ModelParams::set_b0(const Rational& r) {
    b0_exact = r;
    b0 = r.to_double();
    b0_irrational = false;
    return *this;
}

CMat2 sf_hermitian(const ModelParams& p, const FiberPoint& pt, Chart chart) {
    p.validate();
    pt.validate();
    // Evaluate omega_{sf, b0, eps'} with eps' = eps / alpha, then scale by alpha.
    const double eps = p.eps / p.alpha;
    const double ell = pt.ell();
    const double w = w_of(p.k, ell);
    const double kap2 = std::norm(p.kappa_at(pt.z));
    const cplx gam = gamma_y(p.b0, ell, pt.x.imag());
    CMat2 h;
    if (chart == Chart::ZChart) {
        const cplx gt = gam / pt.z;
        h(0, 0) = w * eps / 2.0;
        h(0, 1) = w * eps * std::conj(gt) / 2.0;
        h(1, 0) = w * eps * gt / 2.0;
        h(1, 1) = kap2 / (eps * w * std::norm(pt.z)) + w * eps * std::norm(gt) / 2.0;
    } else if (chart == Chart::YChart) {
        h(0, 0) = w * eps / 2.0;
        h(0, 1) = -w * eps * std::conj(gam) / 2.0;
        h(1, 0) = -w * eps * gam / 2.0;
        h(1, 1) = kap2 / (eps * w) + w * eps * std::norm(gam) / 2.0;
    } else {
        throw ValidationError("sf_hermitian: chart must be z or y");
    }
    return p.alpha * h;
}

RealTwoForm sf_form(const ModelParams& p, const FiberPoint& pt) {
    return {form_from_hermitian(sf_hermitian(p, pt, Chart::ZChart), Chart::ZChart), Chart::ZChart};
}

RealTwoForm sf_form_y(const ModelParams& p, const FiberPoint& pt) {
    return {form_from_hermitian(sf_hermitian(p, pt, Chart::YChart), Chart::YChart), Chart::YChart};
}

Mat4 jacobian_y_to_z(const FiberPoint& pt) {
    const double u = pt.z.real();
    const double v = pt.z.imag();
    Mat4 j = Mat4::Zero();
    j(2, 0) = -u;
    j(3, 0) = -v;
    j(2, 1) = v;
    j(3, 1) = -u;
    j(0, 2) = 1.0;
    j(1, 3) = 1.0;
    return j;
}

Mat4 z_to_y_chart(const Mat4& mz, const FiberPoint& pt) { return pullback(mz, jacobian_y_to_z(pt)); }

CMat4 holomorphic_volume(const ModelParams& p, const FiberPoint& pt, Chart chart) {
    p.validate();
    pt.validate();
    const auto cf = holomorphic_coframe(chart);
    CVec4 dx = cf.row(0).transpose();
    CVec4 dw = cf.row(1).transpose();
    const cplx kap = p.kappa_at(pt.z);
    if (chart == Chart::ZChart) return (kap / pt.z) * wedge1(dx, dw);
    // dz / z = -dy, so Omega = kappa dy ^ dx.
    return kap * wedge1(dw, dx);
}

MaResidual ma_residual_of(const Mat4& omega, const CMat4& big_omega, double alpha) {
    const double w2 = wedge_top(omega, omega);
    const double oo = wedge_top(big_omega, big_omega.conjugate().eval()).real();
    MaResidual r;
    r.reference = alpha * alpha * oo;
    r.absolute = w2 - r.reference;
    return r;
}

MaResidual ma_residual(const ModelParams& p, const FiberPoint& pt) {
    return ma_residual_of(sf_form(p, pt).M, holomorphic_volume(p, pt, Chart::ZChart), p.alpha);
}

double pair_form(const ZFormField& field, const CycleSpec& c, int k, int n, CycleOrientation o) {
    c.validate();
    if (n < 4) throw ValidationError("pairing grid must have at least 4 nodes per direction");
    const double sign = o == CycleOrientation::Flipped ? -1.0 : 1.0;
    Grid2 grid;
    grid.n1 = n;
    grid.n2 = n;
    if (c.kind == CycleKind::Fiber) {
        const cplx z(c.level, 0.0);
        auto [e1, e2] = lattice_basis(k, z, 0);
        const Vec4 d1(1.0, 0.0, 0.0, 0.0);
        const Vec4 d2(e2.real(), e2.imag(), 0.0, 0.0);
        grid.d1 = {0.0, 1.0, true};
        grid.d2 = {0.0, 1.0, true};
        cplx v = quad_periodic(
            [&](double s1, double s2) {
                FiberPoint pt;
                pt.x = s1 * e1 + s2 * e2;
                pt.z = z;
                pt.branch = 0;
                return cplx(d1.dot(field(pt) * d2), 0.0);
            },
            grid);
        return sign * v.real();
    }
    grid.d1 = {0.0, 1.0, true};
    grid.d2 = {0.0, kTwoPi * c.m1, true};
    cplx v = quad_periodic(
        [&](double t1, double t2) {
            FiberPoint pt = cycle_point(c, k, t1, t2);
            auto [d1, d2] = cycle_tangents(c, k, t1, t2, o);
            return cplx(d1.dot(field(pt) * d2), 0.0);
        },
        grid);
    return v.real();
}

double pair_cycle(const ModelParams& p, const CycleSpec& c, int n, CycleOrientation o) {
    p.validate();
    return pair_form([&p](const FiberPoint& pt) { return sf_form(p, pt).M; }, c, p.k, n, o);
}

double pair_closed_form(const ModelParams& p, const CycleSpec& c) {
    if (c.kind == CycleKind::Fiber) return p.eps;
    return (c.m1 * 2.0 * p.b0 / p.k + c.m2) * p.eps;
}

Mat4 pullback_by_translation(const ZFormField& field, const SectionData& s, const FiberPoint& pt,
                             int k) {
    pt.validate();
    const cplx sv = section_eval(s, pt.z, pt.branch, k);
    const cplx ds = section_dz(s, pt.z, pt.branch);
    FiberPoint q = pt;
    q.x = pt.x + sv;
    // dT maps d/du to (Re s', Im s', 1, 0) and d/dv to (Re(i s'), Im(i s'), 0, 1).
    Mat4 dt = Mat4::Identity();
    dt(0, 2) = ds.real();
    dt(1, 2) = ds.imag();
    const cplx ids = kI * ds;
    dt(0, 3) = ids.real();
    dt(1, 3) = ids.imag();
    return pullback(field(q), dt);
}

RealTwoForm translate_pullback(const ModelParams& p, const SectionData& s, const FiberPoint& pt) {
    p.validate();
    Mat4 m = pullback_by_translation([&p](const FiberPoint& q) { return sf_form(p, q).M; }, s, pt,
                                     p.k);
    return {m, Chart::ZChart};
}

Mat4 translation_difference_y(const ModelParams& p, const SectionData& s, const FiberPoint& pt) {
    p.validate();
    pt.validate();
    const double ell = pt.ell();
    const cplx y = pt.y();
    const double w = w_of(p.k, ell);
    const cplx gam = gamma_y(p.b0, ell, pt.x.imag());
    const cplx hy = section_y(s, y);
    const cplx gs = section_dy(s, y) - kI * hy.imag() / ell;

    const auto cf = holomorphic_coframe(Chart::YChart);
    const CVec4 dx = cf.row(0).transpose();
    const CVec4 dy = cf.row(1).transpose();
    const CVec4 xi = dx - gam * dy;
    const CVec4 gdy = gs * dy;
    CMat4 d = wedge1(xi, gdy.conjugate().eval()) + wedge1(gdy, xi.conjugate().eval()) +
              wedge1(gdy, gdy.conjugate().eval());
    // The alpha scaling cancels in the fibre block: alpha * W (eps / alpha) / 2.
    d *= kI * (w * p.eps / 2.0);
    return d.real();
}

Mat4 riemannian_metric(const ModelParams& p, const FiberPoint& pt) {
    return metric_from_form(sf_form_y(p, pt).M, complex_structure(Chart::YChart));
}

double radial_distance(const ModelParams& p, double ell) {
    return p.alpha * (2.0 / 3.0) * std::sqrt(p.k / (kPi * p.eps)) * std::pow(ell, 1.5);
}

std::array<double, 256> riemann_lowered(const MetricField& g, const Vec4& q, const Vec4& steps) {
    for (int c = 0; c < 4; ++c) {
        if (!(steps(c) > 1e-10)) throw NumericalFailure("curvature: finite-difference step underflow");
    }
    auto shift = [&](const Vec4& base, int c, double t) {
        Vec4 r = base;
        r(c) += t;
        return r;
    };
    // Christoffel symbols of the second kind, Gamma^a_bc at index idx3(a, b, c).
    auto christoffel = [&](const Vec4& x) -> Vec64 {
        std::array<Mat4, 4> dg;
        for (int c = 0; c < 4; ++c) {
            dg[c] = central_diff4([&](double t) { return Mat4(g(shift(x, c, t))); }, 0.0, steps(c));
        }
        const Mat4 ginv = g(x).inverse();
        Vec64 out;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                for (int c = 0; c < 4; ++c) {
                    double s = 0.0;
                    for (int d = 0; d < 4; ++d) {
                        s += ginv(a, d) * 0.5 * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                    }
                    out(idx3(a, b, c)) = s;
                }
            }
        }
        return out;
    };
    const Vec64 gam = christoffel(q);
    std::array<Vec64, 4> dgam;
    for (int c = 0; c < 4; ++c) {
        dgam[c] = central_diff4([&](double t) { return christoffel(shift(q, c, t)); }, 0.0, steps(c));
    }
    std::array<double, 256> up{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    double v = dgam[c](idx3(a, d, b)) - dgam[d](idx3(a, c, b));
                    for (int e = 0; e < 4; ++e) {
                        v += gam(idx3(a, c, e)) * gam(idx3(e, d, b)) -
                             gam(idx3(a, d, e)) * gam(idx3(e, c, b));
                    }
                    up[idx4(a, b, c, d)] = v;
                }
            }
        }
    }
    const Mat4 g0 = g(q);
    std::array<double, 256> low{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    double v = 0.0;
                    for (int e = 0; e < 4; ++e) v += g0(a, e) * up[idx4(e, b, c, d)];
                    low[idx4(a, b, c, d)] = v;
                }
            }
        }
    }
    return low;
}

double riemann_frobenius(const std::array<double, 256>& r, const Mat4& g) {
    const Mat4 gi = g.inverse();
    // Raise one index at a time: t <- gi applied to slot s.
    std::array<double, 256> t = r;
    for (int slot = 0; slot < 4; ++slot) {
        std::array<double, 256> u{};
        for (int i = 0; i < 256; ++i) {
            int ix[4] = {i / 64, (i / 16) % 4, (i / 4) % 4, i % 4};
            double s = 0.0;
            for (int e = 0; e < 4; ++e) {
                int jx[4] = {ix[0], ix[1], ix[2], ix[3]};
                jx[slot] = e;
                s += gi(ix[slot], e) * t[idx4(jx[0], jx[1], jx[2], jx[3])];
            }
            u[i] = s;
        }
        t = u;
    }
    double s = 0.0;
    for (int i = 0; i < 256; ++i) s += r[i] * t[i];
    return std::sqrt(std::max(0.0, s));
}

double curvature_norm(const ModelParams& p, const FiberPoint& pt, CurvatureOptions opt) {
    p.validate();
    pt.validate();
    const double ell = pt.ell();
    MetricField g = [&p](const Vec4& q) {
        return riemannian_metric(p, FiberPoint::from_y({q(2), q(3)}, {q(0), q(1)}));
    };
    const Vec4 q(ell, pt.theta(), pt.x.real(), pt.x.imag());
    const Vec4 steps(opt.rel_step_ell * ell, opt.step_other, opt.step_other, opt.step_other);
    if (steps(0) >= 0.25 * ell) throw ValidationError("curvature: l step too large for the point");
    auto r = riemann_lowered(g, q, steps);
    double n = riemann_frobenius(r, g(q));
    if (!std::isfinite(n)) throw NumericalFailure("curvature: non-finite result");
    return n;
}

const char* decay_variant_name(DecayVariant v) {
    switch (v) {
        case DecayVariant::NotUniform:
            return "NotUniform";
        case DecayVariant::BoundedDifference:
            return "BoundedDifference";
        case DecayVariant::PowerDecay:
            return "PowerDecay";
        case DecayVariant::ExpDecay:
            return "ExpDecay";
    }
    return "?";
}

DecayClass classify_translation(const ModelParams& p, const SectionData& s,
                                const std::vector<double>& ell_samples, ClassifyOptions opt) {
    p.validate();
    if (ell_samples.size() < 5) throw ValidationError("classify_translation needs >= 5 radii");
    for (std::size_t i = 0; i < ell_samples.size(); ++i) {
        if (!(ell_samples[i] > 0.0)) throw ValidationError("radii must be positive");
        if (i > 0 && !(ell_samples[i] > ell_samples[i - 1])) {
            throw ValidationError("radii must be strictly increasing");
        }
    }
    if (opt.theta_samples < 1) throw ValidationError("need at least one theta sample");

    DecayClass out;
    std::vector<double> vals(ell_samples.size());
    parallel_for(ell_samples.size(), [&](std::size_t i) {
        double best = 0.0;
        for (int j = 0; j < opt.theta_samples; ++j) {
            double th = -kTwoPi * j / opt.theta_samples;
            FiberPoint pt = FiberPoint::from_y({0.0, 0.0}, {ell_samples[i], th});
            Mat4 d = translation_difference_y(p, s, pt);
            Mat4 g = riemannian_metric(p, pt);
            double v = form_norm(d, g);
            if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
            best = std::max(best, v);
        }
        vals[i] = best;
    });
    for (std::size_t i = 0; i < vals.size(); ++i) {
        out.samples.push_back({radial_distance(p, ell_samples[i]), vals[i]});
    }

    const double vmax = *std::max_element(vals.begin(), vals.end());
    if (!std::isfinite(vmax)) {
        out.variant = DecayVariant::NotUniform;
        return out;
    }
    if (vmax <= 1e-14) {
        // T_s is an isometry along the samples.
        out.variant = DecayVariant::BoundedDifference;
        out.scale = 0.0;
        return out;
    }
    const double vmin = *std::min_element(vals.begin(), vals.end());
    if (!(vmin > 0.0)) throw NumericalFailure("classify_translation: vanishing difference at a radius");

    out.fit = fit_decay(out.samples, DecayModel::Power);
    if (out.fit.exponent > 0.25 && vals.back() > vals.front()) {
        out.variant = DecayVariant::NotUniform;
        return out;
    }
    if (vmax / vmin < opt.bounded_ratio) {
        out.variant = DecayVariant::BoundedDifference;
        double sum = 0.0;
        for (double v : vals) sum += v;
        out.scale = sum / vals.size();
        return out;
    }
    if (out.fit.exponent >= opt.power_lo && out.fit.exponent <= opt.power_hi &&
        out.fit.r_squared >= opt.min_r_squared) {
        out.variant = DecayVariant::PowerDecay;
        return out;
    }
    DecayFit se = fit_decay(out.samples, DecayModel::StretchedExp);
    if (se.exponent < 0.0 && se.r_squared >= opt.min_r_squared) {
        out.variant = DecayVariant::ExpDecay;
        out.fit = se;
        return out;
    }
    throw NumericalFailure("classify_translation: no decay model fits (power exponent " +
                           std::to_string(out.fit.exponent) + ", stretched-exp r^2 " +
                           std::to_string(se.r_squared) + ")");
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_near_infinity(const ModelParams& p) {
    if (p.b0_irrational) return std::nullopt;
    if (!p.b0_exact) {
        throw ValidationError("rational_near_infinity needs b0 as an exact rational");
    }
    Rational q = Rational(2) * *p.b0_exact / Rational(p.k);
    return std::make_pair(q.den(), -q.num());
}

ModuliDims moduli_dims(int k) {
    if (k < 1 || k > 9) throw ValidationError("moduli_dims: k must lie in 1..9");
    return {10 - k, 11 - k, 10 - k};
}

}  // namespace syz
