#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace syz {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using CMat2 = Eigen::Matrix2cd;
using CMat4 = Eigen::Matrix<cplx, 4, 4>;
using CVec4 = Eigen::Matrix<cplx, 4, 1>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Default tolerances used when a caller does not pass its own.
struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-8;
};

// ---------------------------------------------------------------------------
// Threading.  The worker count comes from set_thread_count, else from the
// SYZLAB_THREADS environment variable, else from the hardware.  Work is split
// into contiguous index blocks; every reduction in this library is done after
// the parallel phase in a fixed order, so results do not depend on the count.

void set_thread_count(int n);
int thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Fixed-shape pairwise (cascade) summation.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// ---------------------------------------------------------------------------
// Quadrature.

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = true;
};

struct Grid2 {
    int n1 = 16;
    int n2 = 16;
    Interval d1{};
    Interval d2{};

    void validate() const;
    double node1(int i) const;
    double node2(int j) const;
    double cell_area() const;
};

// Rectangle rule on a doubly periodic grid (spectrally accurate for smooth
// periodic integrands).  Samples are evaluated in parallel and summed
// pairwise in row-major order.
cplx quad_periodic(const std::function<cplx(double, double)>& f, const Grid2& grid);

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point Gauss-Legendre nodes and weights mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

// ---------------------------------------------------------------------------
// Decay fitting.

enum class DecayModel { Power, StretchedExp };

struct DecaySample {
    double r = 0.0;
    double value = 0.0;
};

struct DecayFit {
    double exponent = 0.0;   // slope of log(value) against log(r) or r^(2/3)
    double intercept = 0.0;  // log-prefactor
    double r_squared = 0.0;
    int n_samples = 0;       // samples actually used after discarding
};

// Least-squares fit of log(value) against log(r) (Power) or r^(2/3)
// (StretchedExp).  The smallest discard_fraction of the radii is dropped, as
// long as at least three samples remain.
DecayFit fit_decay(std::span<const DecaySample> samples, DecayModel model,
                   double discard_fraction = 0.2);

// ---------------------------------------------------------------------------
// Root finding.

// Root of f inside [a, b] with f(a) f(b) < 0, found by secant steps
// safeguarded with bisection.  An affine f is solved by the first secant step.
double find_root_linear(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10);

// ---------------------------------------------------------------------------
// Small linear algebra.

// Smallest eigenvalue of a symmetric 4x4 matrix.
double sym_min_eig(const Mat4& m, double sym_tol = 1e-12);

// Positive definiteness of a Hermitian 2x2 matrix via trace and determinant.
bool herm_pos(const CMat2& h, double herm_tol = 1e-12);

// ---------------------------------------------------------------------------
// Finite differences.

// Fourth-order central first derivative.
double diff4(const std::function<double(double)>& f, double x, double h);

// Fourth-order central first derivative for any sample type with vector
// arithmetic (double, Eigen matrices).
template <class F>
auto central_diff4(F&& f, double x, double h) {
    auto fp1 = f(x + h);
    auto fm1 = f(x - h);
    auto fp2 = f(x + 2.0 * h);
    auto fm2 = f(x - 2.0 * h);
    using T = decltype(fp1);
    return T(((fm2 - fp2) + 8.0 * (fp1 - fm1)) / (12.0 * h));
}

}  // namespace syz
