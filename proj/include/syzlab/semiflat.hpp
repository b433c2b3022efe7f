#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "syzlab/forms.hpp"
#include "syzlab/model_fibration.hpp"
#include "syzlab/numerics.hpp"
#include "syzlab/rational.hpp"

namespace syz {

// Data of a (possibly non-standard, rescaled) semi-flat metric.  The form is
// alpha * omega_{sf, b0, eps / alpha}.
struct ModelParams {
    int k = 1;
    double eps = 1.0;
    double b0 = 0.0;
    double alpha = 1.0;
    LaurentSeries kappa{{{0, cplx(1.0, 0.0)}}};
    // Exact value of b0 when classification matters; b0_irrational marks the
    // sentinel mode in which b0 is known to be irrational.
    std::optional<Rational> b0_exact;
    bool b0_irrational = false;

    void validate() const;
    bool kappa_is_one() const;
    cplx kappa_at(cplx z) const { return kappa.eval(z); }

    // Sets b0 from an exact rational, keeping the float copy in sync.
    ModelParams& set_b0(const Rational& r);
};

// Hermitian coefficient matrix H with omega = i sum H_jk dw_j ^ conj(dw_k),
// rows/columns ordered (x, z) or (x, y).
CMat2 sf_hermitian(const ModelParams& p, const FiberPoint& pt, Chart chart = Chart::ZChart);

// Semi-flat form in the z-chart (x1, x2, Re z, Im z).
RealTwoForm sf_form(const ModelParams& p, const FiberPoint& pt);
// Semi-flat form in the y-chart (l, theta, x1, x2).
RealTwoForm sf_form_y(const ModelParams& p, const FiberPoint& pt);

// Jacobian of the map y-chart -> z-chart at pt; columns are the images of
// d/dl, d/dtheta, d/dx1, d/dx2 in (x1, x2, Re z, Im z) components.
Mat4 jacobian_y_to_z(const FiberPoint& pt);
// Re-expresses a z-chart form in the y-chart.
Mat4 z_to_y_chart(const Mat4& mz, const FiberPoint& pt);

// Holomorphic volume form kappa(z) dx ^ dz / z as a complex antisymmetric matrix.
CMat4 holomorphic_volume(const ModelParams& p, const FiberPoint& pt, Chart chart = Chart::ZChart);

struct MaResidual {
    double absolute = 0.0;   // coefficient of omega^2 - alpha^2 Omega ^ conj(Omega)
    double reference = 0.0;  // coefficient of alpha^2 Omega ^ conj(Omega)
    double relative() const { return absolute / reference; }
};

MaResidual ma_residual(const ModelParams& p, const FiberPoint& pt);
// Residual of an arbitrary real 2-form against alpha^2 Omega ^ conj(Omega).
MaResidual ma_residual_of(const Mat4& omega, const CMat4& big_omega, double alpha);

// A real 2-form field in the z-chart.
using ZFormField = std::function<Mat4(const FiberPoint&)>;

// Integral of a form field over a cycle on an n x n periodic grid.
double pair_form(const ZFormField& field, const CycleSpec& c, int k, int n,
                 CycleOrientation o = CycleOrientation::Standard);

// Pairing of the semi-flat class with the fibre or a quasi-bad cycle.
double pair_cycle(const ModelParams& p, const CycleSpec& c, int n,
                  CycleOrientation o = CycleOrientation::Standard);
// Closed form (m1 2 b0 / k + m2) eps, and eps for the fibre.
double pair_closed_form(const ModelParams& p, const CycleSpec& c);

// Pullback of a form field by T_s(x, z) = (x + s(z), z), by the chain rule.
Mat4 pullback_by_translation(const ZFormField& field, const SectionData& s, const FiberPoint& pt,
                             int k);
RealTwoForm translate_pullback(const ModelParams& p, const SectionData& s, const FiberPoint& pt);

// T_s^* omega - omega computed in the y-chart from the coframe
// xi = dx - Gamma dy; no subtraction of large quantities is involved.
Mat4 translation_difference_y(const ModelParams& p, const SectionData& s, const FiberPoint& pt);

// Riemannian metric g(u, v) = omega(u, J v) in the y-chart.
Mat4 riemannian_metric(const ModelParams& p, const FiberPoint& pt);

// Metric distance from the base point scale, r(l) = alpha (2/3) sqrt(k / (pi eps)) l^(3/2).
double radial_distance(const ModelParams& p, double ell);

struct CurvatureOptions {
    double rel_step_ell = 0.01;  // step in l as a fraction of l
    double step_other = 0.01;    // step in theta, x1, x2
};

// Frobenius norm of the Riemann tensor of riemannian_metric at pt, computed
// from finite-difference Christoffel symbols.
double curvature_norm(const ModelParams& p, const FiberPoint& pt, CurvatureOptions opt = {});

// Riemann tensor R_abcd (all indices lowered) in y-chart coordinates for an
// arbitrary metric field q -> g(q), q = (l, theta, x1, x2).
using MetricField = std::function<Mat4(const Vec4&)>;
std::array<double, 256> riemann_lowered(const MetricField& g, const Vec4& q, const Vec4& steps);
double riemann_frobenius(const std::array<double, 256>& r, const Mat4& g);

enum class DecayVariant { NotUniform, BoundedDifference, PowerDecay, ExpDecay };

const char* decay_variant_name(DecayVariant v);

struct DecayClass {
    DecayVariant variant = DecayVariant::BoundedDifference;
    double scale = 0.0;     // bounded case: mean difference norm
    DecayFit fit{};         // power or stretched-exponential fit, when performed
    std::vector<DecaySample> samples;  // (r, |T^* omega - omega|)
};

struct ClassifyOptions {
    int theta_samples = 8;
    double bounded_ratio = 1.5;
    double power_lo = -1.5;
    double power_hi = -1.2;
    double min_r_squared = 0.9;
};

// Measures |T_s^* omega - omega|_omega along the given l samples and maps
// the decay profile to a variant.
DecayClass classify_translation(const ModelParams& p, const SectionData& s,
                                const std::vector<double>& ell_samples, ClassifyOptions opt = {});

// Coprime (m1 > 0, m2) with 2 b0 / k = -m2 / m1; nullopt in irrational mode.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_near_infinity(const ModelParams& p);

struct ModuliDims {
    int v_m;
    int h2;
    int m_k;
};
ModuliDims moduli_dims(int k);

}  // namespace syz
