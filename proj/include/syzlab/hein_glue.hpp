#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "syzlab/semiflat.hpp"

namespace syz {

// Conventions.  The gluing parameter alpha multiplies i ddbar u, so the
// metric over the small disk is the semi-flat form whose ModelParams alpha is
// sqrt(alpha).  All radial profiles are functions of L = -log|z|.
inline double glue_to_model_alpha(double alpha_glue) { return std::sqrt(alpha_glue); }
inline double model_to_glue_alpha(double alpha_model) { return alpha_model * alpha_model; }

struct GlueConfig {
    ModelParams params;   // semi-flat target; params.alpha is ignored
    double r = 0.1;
    double s = 0.005;
    double t = 1.0;       // used by glued_form
    double rho_min = 1e-8;
    double rho_out = 0.9; // outer edge of the modeled annulus
    double v0c = 0.0;     // integral of omega_0^2 outside the modeled region
    double vomc = 0.0;    // integral of Omega ^ conj(Omega) outside the modeled region
    double gamma = 0.05;  // omega_0 = omega_sf(1) + gamma i dz ^ dz-bar
    double c0 = 0.0;      // positivity coefficient of |alpha - 1| sup u_zzbar
    double c0_rs = 0.0;   // positivity constant C0(r, s)
    int quad_nodes = 64;  // Gauss-Legendre nodes per radial piece

    void validate() const;
};

// Fills c0 and c0_rs from the cutoff profiles (sup of the cutoff error terms,
// with a 5% safety factor) and validates.
GlueConfig calibrate(GlueConfig cfg);

// u = k L^3 / (3 pi eps), the radial solution of u_zzbar = k L / (2 pi eps |z|^2).
double potential_u(const ModelParams& p, cplx z);
double potential_u_zzbar(const ModelParams& p, cplx z);

// v = A + B L.
struct HarmonicMatch {
    double A = 0.0;
    double B = 0.0;
    double operator()(double L) const { return A + B * L; }
};

// Radial harmonic function agreeing with f(L) at |z| = r and |z| = r + 3s.
HarmonicMatch harmonic_match(const std::function<double(double)>& f, double r, double s);
HarmonicMatch harmonic_match_u(const ModelParams& p, double r, double s);

struct CutoffValues {
    double psi = 0.0;     // 1 on |z| <= r + s, 0 on |z| >= r + 2s
    double psi_L = 0.0;
    double psi_LL = 0.0;
    double beta = 0.0;    // beta = beta_coef * |dz|^2, 1 on [r + s, r + 2s], 0 off (r, r + 3s)
};

CutoffValues cutoffs(double r, double s, double L);

// sup over the annulus of s |psi_z| + s^2 |psi_zzbar| from n samples.
double cutoff_bound(double r, double s, int n = 4001);

// sup over r <= |z| <= r + 3s of (s^-2 |u - v| + s^-1 |(u - v)_z|) / sup u_zzbar.
double harmonic_match_ratio(const ModelParams& p, double r, double s, int n = 4001);
// Largest ratio over the samples with a 5% safety factor.
double fit_harmonic_match_constant(const ModelParams& p, const std::vector<std::pair<double, double>>& rs);

// sup u_zzbar over the transition annulus, attained at |z| = r.
double sup_u_zzbar(const GlueConfig& cfg);

// Hermitian coefficients (x, z) of omega_alpha(t) at pt.
CMat2 glued_hermitian(const GlueConfig& cfg, double alpha, double t, const FiberPoint& pt);
RealTwoForm glued_form(const GlueConfig& cfg, double alpha, const FiberPoint& pt);
// Independent assembly: omega_0 + t beta + i ddbar(psi u~) with the Laplacian
// of the product taken in Cartesian polar form.
CMat2 glued_hermitian_termwise(const GlueConfig& cfg, double alpha, double t, const FiberPoint& pt);

// t must exceed c0_rs + c0 |alpha - 1| sup u_zzbar.
double positivity_threshold(const GlueConfig& cfg, double alpha);

struct PositivityResult {
    double margin = 0.0;     // min Schur complement of the difference over that of omega_0
    bool positive = false;
    double threshold = 0.0;
};

// Checks omega_alpha(t) - (omega_0 + psi i ddbar u_alpha) / 2 >= 0 on an
// n_radial x 4 grid of cell midpoints in the open transition annulus.
PositivityResult positivity_scan(const GlueConfig& cfg, double alpha, double t, int n_radial = 200);

// I(alpha, t) = integral of omega_alpha(t)^2 - alpha Omega ^ conj(Omega) over the
// modeled region plus v0c - alpha vomc.
double mass_integral(const GlueConfig& cfg, double alpha, double t);

struct AlphaSolution {
    double alpha = 0.0;
    double t = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double i_lo = 0.0;        // I at bracket_lo (positive)
    double i_hi = 0.0;        // I at bracket_hi (negative)
    double slope_below = 0.0; // dI/dalpha on alpha < 1
    double slope_above = 0.0; // dI/dalpha on alpha > 1
    bool unique = false;      // both slopes negative
};

// Root of alpha -> I(alpha, c0_rs t' + c0 |alpha - 1| sup u_zzbar) on [1e-3, 1e6].
AlphaSolution solve_alpha(const GlueConfig& cfg, double tprime);

}  // namespace syz
