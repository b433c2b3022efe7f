#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "syzlab/errors.hpp"
#include "syzlab/numerics.hpp"

using namespace syz;

namespace {

Grid2 torus_grid(int n1, int n2) {
    Grid2 g;
    g.n1 = n1;
    g.n2 = n2;
    g.d1 = {0.0, 1.0, true};
    g.d2 = {0.0, kTwoPi, true};
    return g;
}

}  // namespace

TEST(QuadPeriodic, ConstantGivesArea) {
    cplx v = quad_periodic([](double, double) { return cplx(1.0, 0.0); }, torus_grid(8, 8));
    EXPECT_NEAR(v.real(), kTwoPi, 1e-13);
    EXPECT_EQ(v.imag(), 0.0);
}

TEST(QuadPeriodic, OrthogonalModeVanishes) {
    cplx v = quad_periodic([](double t1, double) { return std::exp(cplx(0.0, kTwoPi * t1)); },
                           torus_grid(16, 16));
    EXPECT_LT(std::abs(v), 1e-12);
}

TEST(QuadPeriodic, ExactForLowDegreeTrigPolynomials) {
    const int n = 16;
    for (int p = 0; p < n / 2; ++p) {
        for (int q = 0; q < n / 2; ++q) {
            auto f = [p, q](double t1, double t2) {
                return cplx(1.0 + std::cos(kTwoPi * p * t1) * std::cos(q * t2), 0.0) +
                       cplx(0.0, std::sin(kTwoPi * p * t1 + q * t2));
            };
            cplx v = quad_periodic(f, torus_grid(n, n));
            double exact = kTwoPi * (1.0 + (p == 0 && q == 0 ? 1.0 : 0.0));
            EXPECT_NEAR(v.real(), exact, 1e-12 * exact) << p << "," << q;
            EXPECT_NEAR(v.imag(), 0.0, 1e-12 * exact) << p << "," << q;
        }
    }
}

TEST(QuadPeriodic, ThreadCountDoesNotChangeBits) {
    auto f = [](double t1, double t2) {
        return cplx(std::exp(std::sin(kTwoPi * t1)) * std::cos(3.0 * t2), std::cos(t2 + t1));
    };
    set_thread_count(1);
    cplx a = quad_periodic(f, torus_grid(64, 48));
    set_thread_count(4);
    cplx b = quad_periodic(f, torus_grid(64, 48));
    set_thread_count(3);
    cplx c = quad_periodic(f, torus_grid(64, 48));
    set_thread_count(0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(QuadPeriodic, RejectsNonFiniteSamplesAndBadGrids) {
    EXPECT_THROW(quad_periodic([](double, double) { return cplx(NAN, 0.0); }, torus_grid(8, 8)),
                 NumericalFailure);
    EXPECT_THROW(quad_periodic([](double, double) { return cplx(1.0); }, torus_grid(3, 8)),
                 ValidationError);
    Grid2 g = torus_grid(8, 8);
    g.d1.periodic = false;
    EXPECT_THROW(quad_periodic([](double, double) { return cplx(1.0); }, g), ValidationError);
}

TEST(Grid2, PeriodicNodesHaveNoEndpointDuplicate) {
    Grid2 g = torus_grid(4, 4);
    EXPECT_DOUBLE_EQ(g.node1(0), 0.0);
    EXPECT_DOUBLE_EQ(g.node1(3), 0.75);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    GaussRule r = gauss_legendre(6, -1.0, 2.0);
    for (int deg = 0; deg <= 11; ++deg) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], deg);
        double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
        EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << deg;
    }
}

TEST(FitDecay, RecoversInverseSquare) {
    std::vector<DecaySample> s;
    for (double r : {10.0, 20.0, 40.0, 80.0}) s.push_back({r, 1.0 / (r * r)});
    DecayFit f = fit_decay(s, DecayModel::Power);
    EXPECT_NEAR(f.exponent, -2.0, 1e-9);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_GE(f.n_samples, 3);
}

TEST(FitDecay, RecoversFourThirdsWithPrefactor) {
    std::vector<DecaySample> s;
    for (int i = 1; i <= 20; ++i) {
        double r = 2.0 * i;
        s.push_back({r, 5.0 * std::pow(r, -4.0 / 3.0)});
    }
    DecayFit f = fit_decay(s, DecayModel::Power);
    EXPECT_NEAR(f.exponent, -4.0 / 3.0, 1e-9);
    EXPECT_NEAR(f.intercept, std::log(5.0), 1e-9);
    EXPECT_EQ(f.n_samples, 16);
}

TEST(FitDecay, StretchedExponential) {
    std::vector<DecaySample> s;
    for (int i = 1; i <= 10; ++i) {
        double r = 5.0 * i;
        s.push_back({r, 3.0 * std::exp(-0.7 * std::cbrt(r * r))});
    }
    DecayFit f = fit_decay(s, DecayModel::StretchedExp);
    EXPECT_NEAR(f.exponent, -0.7, 1e-9);
    EXPECT_GT(f.r_squared, 0.999999);
}

TEST(FitDecay, Validation) {
    std::vector<DecaySample> two{{1.0, 1.0}, {2.0, 0.5}};
    EXPECT_THROW(fit_decay(two, DecayModel::Power), ValidationError);
    std::vector<DecaySample> unordered{{1.0, 1.0}, {3.0, 0.5}, {2.0, 0.2}};
    EXPECT_THROW(fit_decay(unordered, DecayModel::Power), ValidationError);
    std::vector<DecaySample> nonpos{{1.0, 1.0}, {2.0, 0.0}, {3.0, 0.2}};
    EXPECT_THROW(fit_decay(nonpos, DecayModel::Power), ValidationError);
}

TEST(FindRootLinear, AffineIsExact) {
    double r = find_root_linear([](double a) { return 3.0 - a; }, 0.0, 10.0);
    EXPECT_NEAR(r, 3.0, 3.0 * 1e-14);
    double r2 = find_root_linear([](double a) { return 0.7 * a - 2.1e3; }, 1e-3, 1e6);
    EXPECT_NEAR(r2, 3000.0, 3000.0 * 1e-14);
}

TEST(FindRootLinear, Sqrt2) {
    double r = find_root_linear([](double a) { return a * a - 2.0; }, 1.0, 2.0);
    EXPECT_NEAR(r, std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(r, std::sqrt(2.0), 1e-10 * std::sqrt(2.0) * 2);
}

TEST(FindRootLinear, NoSignChange) {
    EXPECT_THROW(find_root_linear([](double a) { return a * a + 1.0; }, -1.0, 2.0), ValidationError);
}

TEST(SmallLinearAlgebra, IdentityAndIndefinite) {
    EXPECT_DOUBLE_EQ(sym_min_eig(Mat4::Identity()), 1.0);
    EXPECT_TRUE(herm_pos(CMat2::Identity()));
    CMat2 d = CMat2::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    EXPECT_FALSE(herm_pos(d));
}

TEST(SmallLinearAlgebra, MinEigMatchesKnownSpectrum) {
    Mat4 m;
    m << 4, 1, 0, 0, 1, 3, 0, 0, 0, 0, 2, 0.5, 0, 0, 0.5, -1;
    // 2x2 blocks: eigenvalues (7 +- sqrt 5)/2 and (1 +- sqrt 10)/2.
    EXPECT_NEAR(sym_min_eig(m), (1.0 - std::sqrt(10.0)) / 2.0, 1e-13);
}

TEST(SmallLinearAlgebra, AsymmetryRejected) {
    Mat4 m = Mat4::Identity();
    m(0, 1) = 1e-6;
    EXPECT_THROW(sym_min_eig(m), ValidationError);
    CMat2 h = CMat2::Identity();
    h(0, 1) = cplx(0.0, 1e-6);
    EXPECT_THROW(herm_pos(h), ValidationError);
}

TEST(FiniteDifference, FourthOrder) {
    auto f = [](double x) { return std::sin(x); };
    double e1 = std::abs(diff4(f, 0.7, 0.1) - std::cos(0.7));
    double e2 = std::abs(diff4(f, 0.7, 0.05) - std::cos(0.7));
    EXPECT_LT(e1, 1e-5);
    EXPECT_GT(e1 / e2, 12.0);  // ~16 for a fourth-order stencil
}
