#include <gtest/gtest.h>

#include <vector>

#include "syzlab/errors.hpp"
#include "syzlab/hein_glue.hpp"

using namespace syz;

namespace {

ModelParams target(int k = 1, double eps = 1.0, double b0 = 0.0) {
    ModelParams p;
    p.k = k;
    p.eps = eps;
    p.b0 = b0;
    return p;
}

GlueConfig config(double r, double s, double b0 = 0.0) {
    GlueConfig cfg;
    cfg.params = target(1, 1.0, b0);
    cfg.r = r;
    cfg.s = s;
    cfg.v0c = 1.0;
    cfg.vomc = 0.2;
    return calibrate(cfg);
}

FiberPoint at_radius(double rho, double phase = 0.7) { return {cplx(0.1, 0.4), std::polar(rho, phase), 0}; }

double rel(const CMat2& a, const CMat2& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Potential, ClosedFormValue) {
    EXPECT_NEAR(potential_u(target(), std::exp(-1.0)), 1.0 / (3.0 * kPi), 1e-15);
    EXPECT_NEAR(potential_u(target(), std::exp(-1.0)), 0.10610, 5e-6);
}

TEST(Potential, LaplacianMatchesFiniteDifference) {
    const ModelParams p = target(2, 0.7);
    const double rho = 0.3;
    const double h = 1e-3;
    auto u = [&](double x, double y) { return potential_u(p, {x, y}); };
    const double lap = (u(rho + h, 0) + u(rho - h, 0) + u(rho, h) + u(rho, -h) - 4.0 * u(rho, 0)) / (h * h);
    // Richardson with step 2h for a fourth-order estimate.
    const double h2 = 2.0 * h;
    const double lap2 = (u(rho + h2, 0) + u(rho - h2, 0) + u(rho, h2) + u(rho, -h2) - 4.0 * u(rho, 0)) / (h2 * h2);
    const double fd = (4.0 * lap - lap2) / 3.0 / 4.0;
    const double exact = p.k * (-std::log(rho)) / (2.0 * kPi * p.eps * rho * rho);
    EXPECT_NEAR(fd, exact, 1e-8 * exact);
    EXPECT_NEAR(potential_u_zzbar(p, rho), exact, 1e-14 * exact);
}

TEST(Potential, PositiveAndIncreasingTowardCentre) {
    double prev = 0.0;
    for (double rho : {0.9, 0.5, 0.1, 1e-3, 1e-8}) {
        const double u = potential_u(target(), rho);
        EXPECT_GT(u, prev);
        prev = u;
    }
    ModelParams p = target();
    p.kappa = LaurentSeries{{{0, 1.0}, {1, 0.5}}};
    EXPECT_THROW(potential_u(p, 0.5), ValidationError);
    EXPECT_THROW(potential_u(target(), 1.0), ValidationError);
}

TEST(HarmonicMatch, ConstantAndLinearSystem) {
    HarmonicMatch c = harmonic_match([](double) { return 2.5; }, 0.1, 0.02);
    EXPECT_NEAR(c.A, 2.5, 1e-15);
    EXPECT_NEAR(c.B, 0.0, 1e-15);
    const ModelParams p = target();
    HarmonicMatch v = harmonic_match_u(p, 0.1, 0.02);
    const double l0 = -std::log(0.1);
    const double l1 = -std::log(0.16);
    const double u0 = l0 * l0 * l0 / (3.0 * kPi);
    const double u1 = l1 * l1 * l1 / (3.0 * kPi);
    EXPECT_NEAR(v.B, (u0 - u1) / (l0 - l1), 1e-13);
    EXPECT_NEAR(v(l0), u0, 1e-13);
    EXPECT_NEAR(v(l1), u1, 1e-13);
    EXPECT_THROW(harmonic_match_u(p, 0.5, 0.2), ValidationError);
}

TEST(HarmonicMatch, MatchConstantIsScaleFree) {
    const ModelParams p = target();
    const std::vector<std::pair<double, double>> rs{{0.1, 0.02}, {0.05, 0.01}, {0.2, 0.04}};
    const double c = fit_harmonic_match_constant(p, rs);
    for (auto [r, s] : rs) {
        const double ratio = harmonic_match_ratio(p, r, s);
        EXPECT_LE(ratio, c);
        EXPECT_GT(ratio, 0.5 * c) << r << " " << s;
    }
    EXPECT_LT(c, 10.0);
}

TEST(Cutoffs, ProfilesAndBounds) {
    const double r = 0.1;
    const double s = 0.02;
    for (int i = 0; i <= 200; ++i) {
        const double rho = 0.05 + 0.15 * i / 200.0;
        const CutoffValues c = cutoffs(r, s, -std::log(rho));
        EXPECT_GE(c.psi, 0.0);
        EXPECT_LE(c.psi, 1.0);
        EXPECT_GE(c.beta, 0.0);
        EXPECT_LE(c.beta, 1.0);
        if (rho <= r + s) EXPECT_EQ(c.psi, 1.0);
        if (rho >= r + 2 * s) EXPECT_EQ(c.psi, 0.0);
        if (rho >= r + s && rho <= r + 2 * s) EXPECT_EQ(c.beta, 1.0);
        if (rho <= r || rho >= r + 3 * s) EXPECT_EQ(c.beta, 0.0);
    }
    const double bound = cutoff_bound(r, s);
    EXPECT_GT(bound, 0.0);
    EXPECT_LT(bound * r, 1.0);
    EXPECT_LT(bound * s, r);
    // The bound depends on s / r only, to leading order.
    EXPECT_NEAR(cutoff_bound(0.05, 0.01) / bound, 1.0, 0.05);
}

TEST(GluedForm, RegionsMatchReferenceForms) {
    GlueConfig cfg = config(0.1, 0.02);
    cfg.t = 3.0;
    const double alpha = 2.0;
    const FiberPoint out = at_radius(0.5);
    CMat2 h0 = sf_hermitian(cfg.params, out, Chart::ZChart);
    h0(1, 1) += cfg.gamma;
    EXPECT_EQ((glued_hermitian(cfg, alpha, cfg.t, out) - h0).cwiseAbs().maxCoeff(), 0.0);
    const FiberPoint in = at_radius(0.05);
    ModelParams pa = cfg.params;
    pa.alpha = std::sqrt(alpha);
    EXPECT_EQ((glued_hermitian(cfg, alpha, cfg.t, in) - sf_hermitian(pa, in, Chart::ZChart)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((glued_form(cfg, alpha, in).M - sf_form(pa, in).M).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(glued_form(cfg, alpha, at_radius(0.95)), ValidationError);
}

TEST(GluedForm, TwoAssemblyRoutesAgree) {
    GlueConfig cfg = config(0.1, 0.02, 0.3);
    for (double alpha : {0.5, 2.0, 7.0}) {
        for (int i = 0; i <= 30; ++i) {
            const double rho = 0.1 + 0.06 * i / 30.0;
            const FiberPoint pt = at_radius(rho);
            EXPECT_LE(rel(glued_hermitian(cfg, alpha, 4.0, pt), glued_hermitian_termwise(cfg, alpha, 4.0, pt)), 1e-12)
                << alpha << " " << rho;
        }
    }
}

TEST(GluedForm, ContinuousAcrossBoundaries) {
    GlueConfig cfg = config(0.1, 0.02);
    for (double edge : {0.1, 0.16}) {
        for (double d : {1e-6, 1e-8}) {
            const CMat2 a = glued_hermitian(cfg, 3.0, 2.0, at_radius(edge - d));
            const CMat2 b = glued_hermitian(cfg, 3.0, 2.0, at_radius(edge + d));
            EXPECT_LE(rel(a, b), 1e4 * d) << edge << " " << d;
        }
    }
    const CMat2 a = glued_hermitian(cfg, 3.0, 2.0, at_radius(0.1 - 1e-12));
    const CMat2 b = glued_hermitian(cfg, 3.0, 2.0, at_radius(0.1 + 1e-12));
    EXPECT_LE(rel(a, b), 1e-10);
}

TEST(GluedForm, HarmonicPartDropsOut) {
    // The Laplacian of v vanishes, so i ddbar u~ = i ddbar u_alpha wherever psi = 1.
    GlueConfig cfg = config(0.1, 0.02);
    const double alpha = 3.0;
    for (double rho : {0.101, 0.11, 0.119}) {
        ModelParams pa = cfg.params;
        pa.alpha = std::sqrt(alpha);
        const FiberPoint pt = at_radius(rho);
        CMat2 want = sf_hermitian(pa, pt, Chart::ZChart);
        want(1, 1) += 0.5 * 2.0 * cutoffs(cfg.r, cfg.s, -std::log(rho)).beta;
        EXPECT_LE(rel(glued_hermitian_termwise(cfg, alpha, 2.0, pt), want), 1e-10) << rho;
    }
}

TEST(Positivity, AboveThresholdAndMonotoneInT) {
    GlueConfig cfg = config(0.1, 0.02);
    const double thr = positivity_threshold(cfg, 2.0);
    PositivityResult one = positivity_scan(cfg, 2.0, 1.01 * thr);
    EXPECT_TRUE(one.positive);
    EXPECT_GT(one.margin, 0.0);
    PositivityResult ten = positivity_scan(cfg, 2.0, 10.0 * thr);
    EXPECT_GT(ten.margin, one.margin);
    EXPECT_THROW(positivity_scan(cfg, 50.0, 1.01 * thr), PreconditionError);
    PositivityResult small = positivity_scan(cfg, 0.2, 1.01 * positivity_threshold(cfg, 0.2));
    EXPECT_TRUE(small.positive);
}

TEST(MassIntegral, SignsAndAffineInAlpha) {
    GlueConfig cfg = config(0.1, 0.005);
    const double t = 5.0;
    EXPECT_GT(mass_integral(cfg, 0.01, t), 0.0);
    EXPECT_LT(mass_integral(cfg, 1e4, 1e4 * t), 0.0);
    std::vector<double> a{1.0, 2.0, 4.0, 8.0};
    std::vector<double> v;
    for (double x : a) v.push_back(mass_integral(cfg, x, t));
    const double slope = (v[3] - v[0]) / (a[3] - a[0]);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(v[i], v[0] + slope * (a[i] - a[0]), 1e-9 * (1.0 + std::abs(v[i])));
    }
}

TEST(SolveAlpha, UniqueRootWithBracket) {
    GlueConfig cfg = config(0.1, 0.005);
    AlphaSolution sol = solve_alpha(cfg, 2.0);
    EXPECT_GT(sol.i_lo, 0.0);
    EXPECT_LT(sol.i_hi, 0.0);
    EXPECT_TRUE(sol.unique);
    EXPECT_GE(sol.alpha, sol.bracket_lo);
    EXPECT_LE(sol.alpha, sol.bracket_hi);
    EXPECT_NEAR(mass_integral(cfg, sol.alpha, sol.t), 0.0, 1e-8 * std::abs(sol.i_lo));
    EXPECT_GT(sol.t, positivity_threshold(cfg, sol.alpha));
    // Doubling the quadrature barely moves the root.
    GlueConfig fine = cfg;
    fine.quad_nodes = 2 * cfg.quad_nodes;
    EXPECT_NEAR(solve_alpha(fine, 2.0).alpha / sol.alpha, 1.0, 1e-6);
}

TEST(SolveAlpha, WideTransitionHasNoRoot) {
    // With s / r = 0.2 the t-term grows faster in alpha than the volume deficit.
    GlueConfig cfg = config(0.1, 0.02);
    EXPECT_THROW(solve_alpha(cfg, 2.0), NumericalFailure);
}

TEST(GlueConfig, Validation) {
    GlueConfig cfg;
    cfg.params = target();
    cfg.r = 0.3;
    cfg.s = 0.3;
    EXPECT_THROW(calibrate(cfg), ValidationError);
    cfg.r = 0.1;
    cfg.s = 0.01;
    EXPECT_THROW(cfg.validate(), ValidationError);  // constants not calibrated
    GlueConfig ok = calibrate(cfg);
    EXPECT_GT(ok.c0, 0.0);
    EXPECT_GT(ok.c0_rs, 0.0);
    ok.vomc = -1.0;
    EXPECT_THROW(ok.validate(), ValidationError);
    EXPECT_DOUBLE_EQ(model_to_glue_alpha(glue_to_model_alpha(3.0)), 3.0);
}
