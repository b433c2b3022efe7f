#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "syzlab/errors.hpp"
#include "syzlab/kernels.hpp"

using namespace syz;

namespace {

ModelParams params(int k, double eps, double b0, double alpha) {
    ModelParams p;
    p.k = k;
    p.eps = eps;
    p.b0 = b0;
    p.alpha = alpha;
    return p;
}

struct Batch {
    std::vector<double> ell;
    std::vector<double> x2;
};

Batch random_batch(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> l(1.0, 60.0);
    std::uniform_real_distribution<double> x(-3.0, 3.0);
    Batch b;
    for (std::size_t i = 0; i < n; ++i) {
        b.ell.push_back(l(rng));
        b.x2.push_back(x(rng));
    }
    return b;
}

}  // namespace

TEST(Kernels, ScalarMatchesDenseResidual) {
    ModelParams p = params(3, 0.7, 0.4, 1.3);
    Batch b = random_batch(37, 1);
    std::vector<double> out(b.ell.size());
    ma_residual_batch(p, b.ell, b.x2, out, SimdPath::Scalar);
    for (std::size_t i = 0; i < out.size(); ++i) {
        FiberPoint pt = FiberPoint::from_y({0.1, b.x2[i]}, {b.ell[i], -0.3});
        EXPECT_NEAR(out[i], ma_residual(p, pt).relative(), 1e-12);
        EXPECT_LE(std::abs(out[i]), 1e-10);
    }
}

TEST(Kernels, EveryAvailablePathAgreesWithScalar) {
    ModelParams p = params(2, 1.5, -0.25, 0.8);
    Batch b = random_batch(1027, 2);
    std::vector<double> ref(b.ell.size());
    ma_residual_batch(p, b.ell, b.x2, ref, SimdPath::Scalar);
    for (SimdPath path : {SimdPath::Avx2, SimdPath::Neon}) {
        if (!simd_path_available(path)) continue;
        std::vector<double> out(b.ell.size());
        ma_residual_batch(p, b.ell, b.x2, out, path);
        for (std::size_t i = 0; i < out.size(); ++i) {
            EXPECT_NEAR(out[i], ref[i], 1e-13) << simd_path_name(path) << " " << i;
        }
    }
}

TEST(Kernels, RejectsBadInput) {
    ModelParams p = params(1, 1.0, 0.0, 1.0);
    std::vector<double> ell{1.0, 2.0};
    std::vector<double> x2{0.0};
    std::vector<double> out(2);
    EXPECT_THROW(ma_residual_batch(p, ell, x2, out), ValidationError);
    std::vector<double> bad{1.0, -1.0};
    std::vector<double> x2b{0.0, 0.0};
    EXPECT_THROW(ma_residual_batch(p, bad, x2b, out), ValidationError);
    p.kappa = LaurentSeries{{{0, 1.0}, {1, 0.5}}};
    EXPECT_THROW(ma_residual_batch(p, ell, x2b, out), ValidationError);
}

TEST(Kernels, BestPathIsAvailable) { EXPECT_TRUE(simd_path_available(best_simd_path())); }
