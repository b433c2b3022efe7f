#include "syzlab/hein_glue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

// Quintic smoothstep and its derivatives, clamped to [0, 1].
double smooth(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}
double smooth1(double x) { return (x <= 0.0 || x >= 1.0) ? 0.0 : 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double smooth2(double x) {
    return (x <= 0.0 || x >= 1.0) ? 0.0 : 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

struct Radii {
    double Lr, L1, L2, L3;
};

Radii radii(double r, double s) {
    return {-std::log(r), -std::log(r + s), -std::log(r + 2.0 * s), -std::log(r + 3.0 * s)};
}

double u_of(const ModelParams& p, double L) { return p.k * L * L * L / (3.0 * kPi * p.eps); }
double u_L(const ModelParams& p, double L) { return p.k * L * L / (kPi * p.eps); }
double u_zzbar_of(const ModelParams& p, double L) { return p.k * L * std::exp(2.0 * L) / (2.0 * kPi * p.eps); }

// Radial profile with its L-derivative and harmonic match.
struct Profile {
    std::function<double(double)> f;
    std::function<double(double)> f_L;
    HarmonicMatch v;
};

Profile u_profile(const GlueConfig& cfg) {
    const ModelParams& p = cfg.params;
    return {[p](double L) { return u_of(p, L); }, [p](double L) { return u_L(p, L); },
            harmonic_match_u(p, cfg.r, cfg.s)};
}

Profile w_profile(const GlueConfig& cfg) {
    const double g = cfg.gamma;
    auto f = [g](double L) { return g * std::exp(-2.0 * L); };
    return {f, [g](double L) { return -2.0 * g * std::exp(-2.0 * L); }, harmonic_match(f, cfg.r, cfg.s)};
}

// Cutoff error term (psi_LL w + 2 psi_L w_L) / (4 rho^2) for w = f - v.
double cutoff_error(const Profile& pr, const CutoffValues& c, double L) {
    const double w = pr.f(L) - pr.v(L);
    const double wl = pr.f_L(L) - pr.v.B;
    return (c.psi_LL * w + 2.0 * c.psi_L * wl) * std::exp(2.0 * L) / 4.0;
}

ModelParams unit_alpha(const ModelParams& p) {
    ModelParams q = p;
    q.alpha = 1.0;
    return q;
}

void check_point(const GlueConfig& cfg, const FiberPoint& pt) {
    const double rho = std::abs(pt.z);
    if (!(rho > cfg.rho_min) || !(rho < cfg.rho_out)) {
        std::ostringstream os;
        os << "point |z| = " << rho << " outside the modeled annulus (" << cfg.rho_min << ", "
           << cfg.rho_out << ")";
        throw ValidationError(os.str());
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("glue alpha must be positive");
}

// Addition to H_zz of omega_0 relative to omega_sf(1) on the transition annulus.
double transition_delta(const GlueConfig& cfg, double alpha, double t, double L) {
    const CutoffValues c = cutoffs(cfg.r, cfg.s, L);
    const double e_u = cutoff_error(u_profile(cfg), c, L);
    const double e_w = cfg.gamma > 0.0 ? cutoff_error(w_profile(cfg), c, L) : 0.0;
    const double uz = u_zzbar_of(cfg.params, L);
    return cfg.gamma * (1.0 - c.psi) + 0.5 * t * c.beta + c.psi * (alpha - 1.0) * uz +
           (alpha - 1.0) * e_u - e_w;
}

}  // namespace

void GlueConfig::validate() const {
    params.validate();
    if (!params.kappa_is_one()) {
        throw ValidationError("gluing needs kappa = 1 (the radial potential is closed-form only then)");
    }
    if (!(r > 0.0) || !(s > 0.0)) throw ValidationError("gluing radii r, s must be positive");
    if (!(r + 3.0 * s < 1.0)) throw ValidationError("gluing needs r + 3s < 1");
    if (!(rho_out > r + 3.0 * s) || !(rho_out < 1.0)) {
        throw ValidationError("outer edge of the modeled annulus must lie in (r + 3s, 1)");
    }
    if (!(rho_min > 0.0) || !(rho_min < r)) throw ValidationError("rho_min must lie in (0, r)");
    if (!(t > 0.0)) throw ValidationError("gluing parameter t must be positive");
    if (!(v0c >= 0.0) || !(vomc >= 0.0)) throw ValidationError("external constants must be non-negative");
    if (!(gamma >= 0.0)) throw ValidationError("gamma must be non-negative");
    if (!(c0 > 0.0) || !(c0_rs > 0.0)) {
        throw ValidationError("positivity constants c0, c0_rs must be positive (see calibrate)");
    }
    if (quad_nodes < 4) throw ValidationError("quad_nodes must be at least 4");
}

GlueConfig calibrate(GlueConfig cfg) {
    cfg.c0 = 1.0;
    cfg.c0_rs = 1.0;
    cfg.validate();
    const double cut = cutoff_bound(cfg.r, cfg.s);
    if (!(cut * cfg.r < 1.0) || !(cut * cfg.s < cfg.r)) {
        std::ostringstream os;
        os << "cutoff constant " << cut << " violates C0 r < 1 or C0 s < r";
        throw ValidationError(os.str());
    }
    const Radii rd = radii(cfg.r, cfg.s);
    const Profile pu = u_profile(cfg);
    const Profile pw = w_profile(cfg);
    double sup_u = 0.0;
    double sup_w = 0.0;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        const double L = rd.L2 + (rd.L1 - rd.L2) * i / (n - 1);
        const CutoffValues c = cutoffs(cfg.r, cfg.s, L);
        sup_u = std::max(sup_u, std::abs(cutoff_error(pu, c, L)));
        if (cfg.gamma > 0.0) sup_w = std::max(sup_w, std::abs(cutoff_error(pw, c, L)));
    }
    cfg.c0 = 1.05 * 2.0 * sup_u / sup_u_zzbar(cfg);
    cfg.c0_rs = std::max(1.05 * 2.0 * sup_w, 1e-6);
    return cfg;
}

double potential_u(const ModelParams& p, cplx z) {
    p.validate();
    if (!p.kappa_is_one()) throw ValidationError("potential_u needs kappa = 1");
    const double rho = std::abs(z);
    if (!(rho > 0.0) || !(rho < 1.0)) throw ValidationError("potential_u needs 0 < |z| < 1");
    return u_of(p, -std::log(rho));
}

double potential_u_zzbar(const ModelParams& p, cplx z) {
    potential_u(p, z);
    return u_zzbar_of(p, -std::log(std::abs(z)));
}

HarmonicMatch harmonic_match(const std::function<double(double)>& f, double r, double s) {
    if (!(r > 0.0) || !(s > 0.0)) throw ValidationError("harmonic_match needs r, s > 0");
    if (!(r + 3.0 * s < 1.0)) throw ValidationError("harmonic_match needs r + 3s < 1");
    const Radii rd = radii(r, s);
    HarmonicMatch v;
    v.B = (f(rd.Lr) - f(rd.L3)) / (rd.Lr - rd.L3);
    v.A = f(rd.Lr) - v.B * rd.Lr;
    return v;
}

HarmonicMatch harmonic_match_u(const ModelParams& p, double r, double s) {
    return harmonic_match([&p](double L) { return u_of(p, L); }, r, s);
}

CutoffValues cutoffs(double r, double s, double L) {
    const Radii rd = radii(r, s);
    CutoffValues c;
    const double d = rd.L1 - rd.L2;
    const double x = (L - rd.L2) / d;
    c.psi = smooth(x);
    c.psi_L = smooth1(x) / d;
    c.psi_LL = smooth2(x) / (d * d);
    if (L >= rd.Lr || L <= rd.L3) {
        c.beta = 0.0;
    } else if (L >= rd.L1) {
        c.beta = smooth((rd.Lr - L) / (rd.Lr - rd.L1));
    } else if (L <= rd.L2) {
        c.beta = smooth((L - rd.L3) / (rd.L2 - rd.L3));
    } else {
        c.beta = 1.0;
    }
    return c;
}

double cutoff_bound(double r, double s, int n) {
    const Radii rd = radii(r, s);
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double L = rd.L3 + (rd.Lr - rd.L3) * i / (n - 1);
        const CutoffValues c = cutoffs(r, s, L);
        const double rho = std::exp(-L);
        best = std::max(best, s * std::abs(c.psi_L) / (2.0 * rho) + s * s * std::abs(c.psi_LL) / (4.0 * rho * rho));
    }
    return best;
}

double harmonic_match_ratio(const ModelParams& p, double r, double s, int n) {
    const HarmonicMatch v = harmonic_match_u(p, r, s);
    const Radii rd = radii(r, s);
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double L = rd.L3 + (rd.Lr - rd.L3) * i / (n - 1);
        const double rho = std::exp(-L);
        const double w = u_of(p, L) - v(L);
        const double wz = std::abs(u_L(p, L) - v.B) / (2.0 * rho);
        best = std::max(best, std::abs(w) / (s * s) + wz / s);
    }
    return best / u_zzbar_of(p, rd.Lr);
}

double fit_harmonic_match_constant(const ModelParams& p, const std::vector<std::pair<double, double>>& rs) {
    if (rs.empty()) throw ValidationError("fit_harmonic_match_constant needs samples");
    double best = 0.0;
    for (auto [r, s] : rs) best = std::max(best, harmonic_match_ratio(p, r, s));
    return 1.05 * best;
}

double sup_u_zzbar(const GlueConfig& cfg) { return u_zzbar_of(cfg.params, -std::log(cfg.r)); }

CMat2 glued_hermitian(const GlueConfig& cfg, double alpha, double t, const FiberPoint& pt) {
    cfg.validate();
    check_alpha(alpha);
    check_point(cfg, pt);
    const double rho = std::abs(pt.z);
    const ModelParams p1 = unit_alpha(cfg.params);
    if (rho < cfg.r) {
        ModelParams pa = cfg.params;
        pa.alpha = glue_to_model_alpha(alpha);
        return sf_hermitian(pa, pt, Chart::ZChart);
    }
    CMat2 h = sf_hermitian(p1, pt, Chart::ZChart);
    if (rho >= cfg.r + 3.0 * cfg.s) {
        h(1, 1) += cfg.gamma;
        return h;
    }
    h(1, 1) += transition_delta(cfg, alpha, t, -std::log(rho));
    return h;
}

RealTwoForm glued_form(const GlueConfig& cfg, double alpha, const FiberPoint& pt) {
    return {form_from_hermitian(glued_hermitian(cfg, alpha, cfg.t, pt), Chart::ZChart), Chart::ZChart};
}

CMat2 glued_hermitian_termwise(const GlueConfig& cfg, double alpha, double t, const FiberPoint& pt) {
    cfg.validate();
    check_alpha(alpha);
    check_point(cfg, pt);
    const double rho = std::abs(pt.z);
    if (rho < cfg.r || rho >= cfg.r + 3.0 * cfg.s) return glued_hermitian(cfg, alpha, t, pt);
    const ModelParams& p = cfg.params;
    const double L = -std::log(rho);
    const CutoffValues c = cutoffs(cfg.r, cfg.s, L);
    // psi as a function of rho.
    const double psi_r = -c.psi_L / rho;
    const double psi_rr = (c.psi_LL + c.psi_L) / (rho * rho);
    // u~ = (alpha - 1)(u - v_u) - (w0 - v_w) with w0 = gamma rho^2.
    const HarmonicMatch vu = harmonic_match_u(p, cfg.r, cfg.s);
    const double g = cfg.gamma;
    const HarmonicMatch vw = harmonic_match([g](double l) { return g * std::exp(-2.0 * l); }, cfg.r, cfg.s);
    const double kpe = p.k / (kPi * p.eps);
    const double u = kpe * L * L * L / 3.0;
    const double u_r = -kpe * L * L / rho;
    const double u_rr = kpe * (2.0 * L + L * L) / (rho * rho);
    const double a1 = alpha - 1.0;
    const double ut = a1 * (u - vu(L)) - (g * rho * rho - vw(L));
    const double ut_r = a1 * (u_r + vu.B / rho) - (2.0 * g * rho + vw.B / rho);
    const double ut_rr = a1 * (u_rr - vu.B / (rho * rho)) - (2.0 * g - vw.B / (rho * rho));
    const double f_r = psi_r * ut + c.psi * ut_r;
    const double f_rr = psi_rr * ut + 2.0 * psi_r * ut_r + c.psi * ut_rr;
    const double f_zzbar = 0.25 * (f_rr + f_r / rho);
    CMat2 h = sf_hermitian(unit_alpha(p), pt, Chart::ZChart);
    h(1, 1) += g + 0.5 * t * c.beta + f_zzbar;
    return h;
}

double positivity_threshold(const GlueConfig& cfg, double alpha) {
    return cfg.c0_rs + cfg.c0 * std::abs(alpha - 1.0) * sup_u_zzbar(cfg);
}

PositivityResult positivity_scan(const GlueConfig& cfg, double alpha, double t, int n_radial) {
    cfg.validate();
    check_alpha(alpha);
    if (n_radial < 2) throw ValidationError("positivity_scan needs at least 2 radial samples");
    PositivityResult res;
    res.threshold = positivity_threshold(cfg, alpha);
    if (!(t > res.threshold)) {
        std::ostringstream os;
        os.precision(10);
        os << "positivity needs t > " << res.threshold << " at alpha = " << alpha << " (got t = " << t << ")";
        throw PreconditionError(os.str());
    }
    const Radii rd = radii(cfg.r, cfg.s);
    const ModelParams p1 = unit_alpha(cfg.params);
    const int n_ang = 4;
    std::vector<double> margins(static_cast<std::size_t>(n_radial) * n_ang);
    parallel_for(margins.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / n_ang;
        const int j = static_cast<int>(idx) % n_ang;
        // Cell midpoints of the open annulus; on its boundary the difference is
        // exactly half of a positive form and does not depend on t.
        const double L = rd.L3 + (rd.Lr - rd.L3) * (i + 0.5) / n_radial;
        const double rho = std::exp(-L);
        const cplx z = std::polar(rho, kTwoPi * j / n_ang + 0.3);
        const FiberPoint pt{cplx(0.2, 0.35), z, 0};
        const CMat2 ha = glued_hermitian(cfg, alpha, t, pt);
        CMat2 h0 = sf_hermitian(p1, pt, Chart::ZChart);
        h0(1, 1) += cfg.gamma;
        const CutoffValues c = cutoffs(cfg.r, cfg.s, L);
        const double ua = (alpha - 1.0) * u_zzbar_of(cfg.params, L) - cfg.gamma;
        CMat2 ref = h0;
        ref(1, 1) += c.psi * ua;
        const CMat2 diff = ha - 0.5 * ref;
        // diff_xx = h0_xx / 2 > 0, so diff >= 0 exactly when its Schur complement is.
        const double schur = diff(1, 1).real() - std::norm(diff(0, 1)) / diff(0, 0).real();
        const double schur0 = h0(1, 1).real() - std::norm(h0(0, 1)) / h0(0, 0).real();
        margins[idx] = schur / schur0;
    });
    res.margin = *std::min_element(margins.begin(), margins.end());
    res.positive = res.margin >= 0.0;
    return res;
}

double mass_integral(const GlueConfig& cfg, double alpha, double t) {
    cfg.validate();
    check_alpha(alpha);
    const Radii rd = radii(cfg.r, cfg.s);
    const double l_out = -std::log(cfg.rho_out);
    const double breaks[] = {l_out, rd.L3, rd.L2, rd.L1, rd.Lr};
    const ModelParams p1 = unit_alpha(cfg.params);
    std::vector<double> pieces;
    for (int piece = 0; piece < 4; ++piece) {
        const GaussRule rule = gauss_legendre(cfg.quad_nodes, breaks[piece], breaks[piece + 1]);
        std::vector<double> terms(rule.x.size());
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double L = rule.x[i];
            const double rho = std::exp(-L);
            const FiberPoint pt{cplx(0.0, 0.0), cplx(rho, 0.0), 0};
            CMat2 h = sf_hermitian(p1, pt, Chart::ZChart);
            h(1, 1) += piece == 0 ? cfg.gamma : transition_delta(cfg, alpha, t, L);
            const double omega2 = 8.0 * h.determinant().real();
            const double vol = alpha * 4.0 / (rho * rho);
            // Fibre area 1; rho drho dphi = -rho^2 dL dphi.
            terms[i] = rule.w[i] * kTwoPi * rho * rho * (omega2 - vol);
        }
        pieces.push_back(pairwise_sum(terms));
    }
    // Over |z| < r the glued form is the rescaled semi-flat metric, which solves
    // the Monge-Ampere equation, so that disk contributes nothing.
    return pairwise_sum(pieces) + cfg.v0c - alpha * cfg.vomc;
}

AlphaSolution solve_alpha(const GlueConfig& cfg, double tprime) {
    cfg.validate();
    if (!(tprime > 0.0)) throw ValidationError("t' must be positive");
    const double supu = sup_u_zzbar(cfg);
    auto t_of = [&](double a) { return cfg.c0_rs * tprime + cfg.c0 * std::abs(a - 1.0) * supu; };
    auto f = [&](double a) { return mass_integral(cfg, a, t_of(a)); };
    AlphaSolution sol;
    const double lo = 1e-3;
    const double hi = 1e6;
    const double f_lo = f(lo);
    const double f_one = f(1.0);
    const double f_hi = f(hi);
    sol.i_lo = f_lo;
    sol.i_hi = f_hi;
    sol.slope_below = (f_one - f_lo) / (1.0 - lo);
    sol.slope_above = (f_hi - f_one) / (hi - 1.0);
    sol.unique = sol.slope_below < 0.0 && sol.slope_above < 0.0;
    if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
        std::ostringstream os;
        os.precision(10);
        os << "no sign change of I on [1e-3, 1e6]: I(1e-3) = " << f_lo << ", I(1e6) = " << f_hi;
        throw NumericalFailure(os.str());
    }
    // I is affine on each side of alpha = 1, so bracket on the correct side.
    if (f_one <= 0.0) {
        sol.bracket_lo = lo;
        sol.bracket_hi = 1.0;
    } else {
        sol.bracket_lo = 1.0;
        sol.bracket_hi = hi;
    }
    sol.alpha = f_one == 0.0 ? 1.0 : find_root_linear(f, sol.bracket_lo, sol.bracket_hi, 1e-12);
    sol.t = t_of(sol.alpha);
    return sol;
}

}  // namespace syz
