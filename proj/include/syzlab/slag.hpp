#pragma once

#include <array>
#include <utility>

#include "syzlab/model_fibration.hpp"
#include "syzlab/semiflat.hpp"

namespace syz {

// A model special Lagrangian fibre: the quasi-bad cycle C_{m1,m2}(level)
// shifted by Im x = t.
struct ModelFiber {
    CycleSpec cycle;
    double t = 0.0;
    ModelParams params;

    void validate() const;
    double ell() const { return -std::log(cycle.level); }
    // Embedding (t1, t2) -> y-chart coordinates (l, theta, x1, x2); it is affine.
    Vec4 embed_y(double t1, double t2) const;
    // Tangent vectors d/dt1, d/dt2 in y-chart components.
    std::pair<Vec4, Vec4> tangents_y() const;
};

// Convenience constructor for a cycle at l = -log|z|.
ModelFiber model_fiber(const ModelParams& p, int m1, int m2, double ell, double t = 0.0);

// A flat 2-torus R^2 / (Z b1 + Z b2) in orthonormal coordinates.
struct FlatLattice {
    Eigen::Vector2d b1;
    Eigen::Vector2d b2;

    double covolume() const;
    // Lagrange-Gauss reduced basis with b1 . b2 >= 0.
    FlatLattice reduced() const;
    // Smallest nonzero Laplace eigenvalue 4 pi^2 min |w|^2 over the dual lattice.
    double lambda1() const;
    // Diameter of the torus, equal to the covering radius of the lattice.
    double diameter() const;
    // Shortest nonzero lattice vector length (twice the injectivity radius).
    double systole() const;
    // Area of a geodesic ball of radius delta, wrap-around included.
    double ball_area(double delta) const;
};

struct FiberGeometry {
    double A = 0.0;       // dtheta^2 coefficient after removing the shear
    double B = 0.0;       // dx1^2 coefficient
    double twist = 0.0;   // shear of the identification t2 -> t2 + 2 pi m1, in units of x1
    double volume = 0.0;
    double diameter = 0.0;
    double lambda1 = 0.0;
    double kappa_nc = 0.0;  // non-collapsing constant
    double scale = 0.0;     // non-collapsing scale
    FlatLattice lattice;
};

struct SpecialDefect {
    double omega = 0.0;  // sup |omega restricted| / induced area form
    double phase = 0.0;  // sup |Im(e^{-i pi/2} Omega) restricted| / induced area form
};

// Suprema of the restricted forms over an n x n grid on the cycle.
SpecialDefect check_special(const ModelFiber& f, int n);

// Induced metric in the parameters (t1, t2): [[g11, g12], [g12, g22]].
Eigen::Matrix2d induced_metric(const ModelFiber& f, double t1, double t2);

// Throws PreconditionError when the induced metric is not flat with constant
// coefficients along t1 (then the fibre is not a model fibre).
FiberGeometry fiber_geometry(const ModelFiber& f, int samples = 16);

struct SecondFundamentalForm {
    double norm = 0.0;           // |Pi|
    double mean_curvature = 0.0; // |H|, H = trace of Pi
    std::array<Vec4, 3> pi{};    // Pi(d1,d1), Pi(d1,d2), Pi(d2,d2) in y-chart components
    Eigen::Matrix2d induced;     // induced metric in (t1, t2)
};

struct SffOptions {
    double rel_step_ell = 1e-3;
    double step_other = 1e-3;
};

SecondFundamentalForm second_fundamental_form(const ModelFiber& f, double t1, double t2,
                                              SffOptions opt = {});

// Ambient sectional curvature of the tangent plane and the Gauss-equation
// right-hand side <Pi11, Pi22> - |Pi12|^2 (orthonormalized); for a flat
// fibre they sum to zero.
std::pair<double, double> gauss_check(const ModelFiber& f, double t1, double t2);

// Vol(B(p, delta)) >= kappa delta^2 on a flat torus.
bool noncollapse_on_lattice(const FlatLattice& lat, double delta, double kappa);
// Same test for the model fibre with its constant sqrt 2; delta must lie in (0, scale].
bool noncollapse_check(const ModelFiber& f, double delta);

// lambda_1 of the induced metric from a Rayleigh-quotient finite-difference
// solve on an n x n periodic grid in (t1, t2).
double lambda1_rayleigh(const ModelFiber& f, int n = 64);

}  // namespace syz
