#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "syzlab/errors.hpp"
#include "syzlab/slag.hpp"

using namespace syz;

namespace {

ModelParams params(int k, double eps, double b0, double alpha = 1.0) {
    ModelParams p;
    p.k = k;
    p.eps = eps;
    p.b0 = b0;
    p.alpha = alpha;
    return p;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<DecaySample> s;
    for (std::size_t i = 0; i < x.size(); ++i) s.push_back({x[i], y[i]});
    return fit_decay(s, DecayModel::Power, 0.0).exponent;
}

}  // namespace

TEST(FlatLattice, RectangleInvariants) {
    FlatLattice lat{{2.0, 0.0}, {0.0, 3.0}};
    EXPECT_NEAR(lat.covolume(), 6.0, 1e-15);
    EXPECT_NEAR(lat.lambda1(), 4.0 * kPi * kPi / 9.0, 1e-12);
    EXPECT_NEAR(lat.diameter(), 0.5 * std::sqrt(13.0), 1e-12);
    EXPECT_NEAR(lat.systole(), 2.0, 1e-15);
    EXPECT_NEAR(lat.ball_area(0.5), kPi * 0.25, 1e-12);
    EXPECT_NEAR(lat.ball_area(10.0), 6.0, 1e-12);
    // Radius 1.2 clips the disk on the two short sides.
    const double r = 1.2;
    const double seg = r * r * std::acos(1.0 / r) - std::sqrt(r * r - 1.0);
    EXPECT_NEAR(lat.ball_area(r), kPi * r * r - 2.0 * seg, 1e-12);
}

TEST(FlatLattice, ReductionPreservesLattice) {
    FlatLattice lat{{1.0, 0.0}, {7.3, 0.9}};
    FlatLattice red = lat.reduced();
    EXPECT_NEAR(red.covolume(), lat.covolume(), 1e-12);
    EXPECT_GE(red.b1.dot(red.b2), 0.0);
    EXPECT_LE(2.0 * red.b1.dot(red.b2), red.b1.squaredNorm() + 1e-12);
    EXPECT_NEAR(lat.lambda1(), red.lambda1(), 1e-9);
    EXPECT_NEAR(lat.diameter(), red.diameter(), 1e-12);
    // Hexagonal lattice: covering radius is the circumradius of the unit triangle.
    FlatLattice hex{{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    EXPECT_NEAR(hex.diameter(), 1.0 / std::sqrt(3.0), 1e-12);
    EXPECT_THROW(FlatLattice({{1.0, 0.0}, {2.0, 0.0}}).reduced(), ValidationError);
}

TEST(SpecialLagrangian, ModelCyclesAreSpecial) {
    ModelFiber c10 = model_fiber(params(1, 1.0, 0.0), 1, 0, 6.0, 0.3);
    SpecialDefect d = check_special(c10, 12);
    EXPECT_LE(d.omega, 1e-10);
    EXPECT_LE(d.phase, 1e-10);
    // C_{2,1} needs 2 b0 / k = -1/2.
    ModelFiber c21 = model_fiber(params(2, 0.8, -0.5), 2, 1, 9.0, -0.2);
    d = check_special(c21, 12);
    EXPECT_LE(d.omega, 1e-10);
    EXPECT_LE(d.phase, 1e-10);
    // A mismatched b0 is not Lagrangian.
    ModelFiber bad = model_fiber(params(2, 0.8, 0.0), 2, 1, 9.0);
    EXPECT_GT(check_special(bad, 12).omega, 1e-3);
}

TEST(SpecialLagrangian, PhaseDefectOfPerturbedKappaDecays) {
    std::vector<DecaySample> s;
    for (double ell : {4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0}) {
        ModelParams p = params(1, 1.0, 0.0);
        p.kappa = LaurentSeries{{{0, 1.0}, {1, 1.0}}};
        SpecialDefect d = check_special(model_fiber(p, 1, 0, ell), 16);
        EXPECT_LE(d.omega, 1e-10);
        s.push_back({radial_distance(p, ell), d.phase});
    }
    DecayFit fit = fit_decay(s, DecayModel::StretchedExp, 0.0);
    EXPECT_LT(fit.exponent, 0.0);
    EXPECT_GT(fit.r_squared, 0.99);
}

TEST(FiberGeometry, ClosedFormAtReferencePoint) {
    ModelFiber f = model_fiber(params(1, 1.0, 0.0), 1, 0, 10.0);
    FiberGeometry g = fiber_geometry(f);
    EXPECT_NEAR(g.B, kTwoPi / 10.0, 1e-13);
    EXPECT_NEAR(g.A, 10.0 / kPi, 1e-12);
    EXPECT_NEAR(g.lambda1, kPi / 10.0, 1e-12);
    EXPECT_NEAR(g.volume, std::sqrt(2.0) * kTwoPi, 1e-12);
    EXPECT_NEAR(g.scale, std::sqrt(g.B), 1e-15);
}

TEST(FiberGeometry, VolumeIndependentOfRadiusAndAlpha) {
    for (double ell : {3.0, 10.0, 40.0}) {
        for (double alpha : {1.0, 2.5}) {
            FiberGeometry g = fiber_geometry(model_fiber(params(3, 0.4, 0.0, alpha), 1, 0, ell));
            EXPECT_NEAR(g.volume, std::sqrt(2.0) * kTwoPi * alpha, 1e-11) << ell << " " << alpha;
        }
    }
}

TEST(FiberGeometry, VolumeMultiplicativeInM1) {
    const int k = 2;
    const double vol1 = fiber_geometry(model_fiber(params(k, 1.0, 0.0), 1, 0, 8.0)).volume;
    for (int m1 : {2, 3, 5}) {
        const int m2 = 1;
        const double b0 = -0.5 * k * m2 / static_cast<double>(m1);
        FiberGeometry g = fiber_geometry(model_fiber(params(k, 1.0, b0), m1, m2, 8.0));
        EXPECT_NEAR(g.volume, m1 * vol1, 1e-10 * m1 * vol1) << m1;
    }
}

TEST(FiberGeometry, Lambda1ScalesInverselyWithEll) {
    std::vector<double> ells{5.0, 10.0, 20.0, 40.0, 80.0};
    std::vector<double> lam;
    for (double ell : ells) lam.push_back(fiber_geometry(model_fiber(params(2, 0.5, 0.0), 1, 0, ell)).lambda1);
    EXPECT_NEAR(log_slope(ells, lam), -1.0, 0.05);
}

TEST(FiberGeometry, NonModelMetricIsPreconditionError) {
    ModelFiber bad = model_fiber(params(2, 0.8, 0.0), 2, 1, 9.0);
    EXPECT_THROW(fiber_geometry(bad), PreconditionError);
    ModelParams p = params(1, 1.0, 0.0);
    p.kappa = LaurentSeries{{{0, 1.0}, {1, 1.0}}};
    EXPECT_THROW(fiber_geometry(model_fiber(p, 1, 0, 1.0)), PreconditionError);
}

TEST(FiberGeometry, RayleighAgreesWithLattice) {
    for (auto [m1, m2, ell] : {std::tuple{1, 0, 10.0}, std::tuple{2, 1, 6.0}, std::tuple{1, 0, 0.5}}) {
        const int k = 2;
        ModelFiber f = model_fiber(params(k, 1.0, -0.5 * k * m2 / m1), m1, m2, ell);
        const double exact = fiber_geometry(f).lambda1;
        const double fd = lambda1_rayleigh(f, 48);
        EXPECT_NEAR(fd / exact, 1.0, 0.02) << m1 << " " << ell;
    }
}

TEST(SecondFundamentalForm, MinimalAndDecaying) {
    std::vector<double> r;
    std::vector<double> pi;
    for (double ell : {8.0, 12.0, 18.0, 27.0, 40.0}) {
        ModelParams p = params(2, 1.0, 0.0);
        ModelFiber f = model_fiber(p, 1, 0, ell, 0.4);
        SecondFundamentalForm s = second_fundamental_form(f, 0.2, 1.1);
        EXPECT_LE(s.mean_curvature, 1e-8 * std::max(1.0, s.norm)) << ell;
        r.push_back(radial_distance(p, ell));
        pi.push_back(s.norm);
    }
    EXPECT_NEAR(log_slope(r, pi), -1.0, 0.15);
}

TEST(SecondFundamentalForm, GaussEquationHolds) {
    for (double ell : {5.0, 10.0}) {
        ModelFiber f = model_fiber(params(2, 1.0, -0.5), 2, 1, ell, 0.1);
        auto [k_amb, rhs] = gauss_check(f, 0.3, 0.7);
        EXPECT_NEAR(k_amb + rhs, 0.0, 1e-6 + 1e-4 * std::abs(rhs)) << ell;
    }
}

TEST(NonCollapsing, HoldsUpToScaleAndFailsWhenSquashed) {
    ModelFiber f = model_fiber(params(1, 1.0, 0.0), 1, 0, 10.0);
    const double scale = fiber_geometry(f).scale;
    EXPECT_TRUE(noncollapse_check(f, 0.5 * scale));
    EXPECT_TRUE(noncollapse_check(f, scale));
    EXPECT_THROW(noncollapse_check(f, 1.01 * scale), ValidationError);
    EXPECT_THROW(noncollapse_check(f, 0.0), ValidationError);
    // A torus whose short side is B / 100 collapses at radius B.
    const double b = 1.0;
    FlatLattice thin{{b / 100.0, 0.0}, {0.0, 10.0}};
    EXPECT_FALSE(noncollapse_on_lattice(thin, b, std::sqrt(2.0)));
}

TEST(ModelFiber, Validation) {
    EXPECT_THROW(model_fiber(params(1, 1.0, 0.0), 0, 1, 5.0), ValidationError);
    EXPECT_THROW(model_fiber(params(1, 1.0, 0.0), 1, 0, -1.0), ValidationError);
    EXPECT_THROW(model_fiber(params(1, 1.0, 0.0), 1, 0, 5.0, NAN), ValidationError);
}
