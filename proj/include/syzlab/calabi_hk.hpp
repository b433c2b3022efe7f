#pragma once

#include <optional>
#include <vector>

#include "syzlab/forms.hpp"
#include "syzlab/rational.hpp"
#include "syzlab/semiflat.hpp"

namespace syz {

// Degree-k line bundle over C / (Z + tau Z) with the Calabi ansatz.
struct CalabiModel {
    int k = 1;
    cplx tau{0.0, 1.0};
    std::optional<ExactComplex> tau_exact;  // present in rational mode

    static CalabiModel from_input(int k, const ComplexInput& tau);

    // Requires k >= 1, Im tau > 0, Re tau in [-1/2, 1/2) and |tau| >= 1.
    void validate() const;
    double a() const { return tau.imag() / std::abs(tau); }
    double b() const { return -tau.real() / std::abs(tau); }
    double c() const { return std::sqrt(kTwoPi * k / tau.imag()); }
};

// Point of the Calabi space in coordinates (l, psi, xi1, xi2).
struct CalabiPoint {
    double ell = 1.0;
    double psi = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;

    void validate() const;
    Vec4 coords() const { return {ell, psi, xi1, xi2}; }
};

// Rows are the frame covectors (dl, theta, dxi1, dxi2) in coordinate components,
// theta = dpsi + (c^2 / 2)(xi2 dxi1 - xi1 dxi2).
Mat4 calabi_frame(const CalabiModel& m, const CalabiPoint& pt);
// Re-expresses a frame 2-form in coordinates (l, psi, xi1, xi2).
Mat4 frame_to_coords(const Mat4& mf, const Mat4& frame);

struct HkTriple {
    RealTwoForm I;
    RealTwoForm J;
    RealTwoForm K;
};

// The hyperKaehler triple in the frame (dl, theta, dxi1, dxi2):
//   omega_J = theta ^ dl + c^2 l dxi1 ^ dxi2
//   omega_I = c (theta ^ dxi2 + l dl ^ dxi1)
//   omega_K = c (dxi1 ^ theta + l dl ^ dxi2)
HkTriple hk_triple(const CalabiModel& m, const CalabiPoint& pt);

// Gibbons-Hawking metric l (dl^2 + c^2 (dxi1^2 + dxi2^2)) + theta^2 / l in the frame.
Mat4 gibbons_hawking_metric(const CalabiModel& m, const CalabiPoint& pt);

// Holomorphic volume form Omega_J = i (conj(tau) / |tau|) c (dphi / 2 - l dl + i dpsi) ^ (dxi1 + i dxi2)
// with phi = (c^2 / 2)|xi|^2, in coordinates (l, psi, xi1, xi2).
CMat4 holomorphic_volume_J(const CalabiModel& m, const CalabiPoint& pt);

// Complex structure on tangent vectors with g(u, v) = omega(u, J v), in coordinates.
Mat4 complex_structure_of(const Mat4& omega_coords, const Mat4& metric_coords);

// max |g - g_GH| in frame components, with g = omega_J(., J .) and J the
// complex structure of omega_J; theta_perturb rescales the theta ^ dl term of
// omega_J by (1 + theta_perturb) to exercise the detector.
double gibbons_hawking_check(const CalabiModel& m, const CalabiPoint& pt, double theta_perturb = 0.0);

enum class SfClass { Standard, QuasiRegular, Irregular };
const char* sf_class_name(SfClass c);

struct SfClassification {
    SfClass kind = SfClass::Standard;
    std::int64_t m1 = 0;  // quasi-regular: 2 b0 / k = -m2 / m1
    std::int64_t m2 = 0;
    bool heuristic = false;  // decided by a continued-fraction search on floats
    std::optional<Rational> ratio;  // exact 2 b0 / k when known
};

// Classifies 2 b0 / k = -Re tau / |tau|^2 for any Im tau > 0: exactly when
// tau_exact is given and fits in 64 bits, otherwise by continued fractions.
SfClassification classify_tau(cplx tau, const std::optional<ExactComplex>& tau_exact);

struct RotationConstants {
    double eps = 0.0;
    double alpha = 0.0;
    double b0 = 0.0;
};

// The closed-form constants for any Im tau > 0, without the fundamental-domain
// check; used to follow a degenerating family through other lattice bases.
RotationConstants rotation_constants(int k, cplx tau);

struct Rotation {
    ModelParams params;
    SfClassification cls;
};

// Semi-flat parameters of the rotated Calabi model:
// eps = 2 pi |tau| c, alpha = sqrt(k pi Im tau) / |tau|, b0 = -k Re tau / (2 |tau|^2).
Rotation rotate(const CalabiModel& m);

// omega_tau = a omega_I + b omega_K in coordinates (l, psi, xi1, xi2).
Mat4 omega_tau(const CalabiModel& m, const CalabiPoint& pt);

// Holomorphic coordinates: x~ = (x1 + i x2) / (2 pi a) and z = exp(-2 pi y / Im tau),
// with y = |tau| l / c + i (Im tau xi1 - Re tau xi2), x2 = c l xi2 and x1 the
// integral of dx1 = J_tau dx2 from the parallel section.
struct HoloCoords {
    cplx x_tilde;
    cplx y;
    FiberPoint point;  // (x~, z) with the branch of log z fixed by y
};

// dx1 = a theta - c^2 (a xi2 dxi1 + b xi2 dxi2) + b l dl in coordinates.
Vec4 dx1_form(const CalabiModel& m, const CalabiPoint& pt);
// x1 by Gauss-Legendre integration of dx1 inside the fibre (l and y2 fixed),
// starting on the parallel section psi = -(b / 2a) l^2, xi2 = 0 where x1 = 0.
double x1_by_path(const CalabiModel& m, const CalabiPoint& pt);
// Closed form of the same integral.
double x1_closed_form(const CalabiModel& m, const CalabiPoint& pt);
HoloCoords holomorphic_coords(const CalabiModel& m, const CalabiPoint& pt);
// Jacobian of (l, psi, xi1, xi2) -> (Re x~, Im x~, Re z, Im z).
Mat4 holomorphic_jacobian(const CalabiModel& m, const CalabiPoint& pt);

// Relative max-norm difference between omega_tau and the pullback of
// sf_form(rotate(m)) through the holomorphic coordinates.
double verify_rotation(const CalabiModel& m, const CalabiPoint& pt);
// Maximum of verify_rotation over n_ell x n_xi x n_xi points with
// l in [1, 4], xi1, xi2 in [0, 1).
double verify_rotation_grid(const CalabiModel& m, int n_ell = 3, int n_xi = 5);

struct LatticeRelations {
    cplx psi_loop;        // change of x over psi -> psi + 2 pi
    cplx fiber_loop;      // change of x between the two identified ends of the fibre
    cplx expected_psi;    // 2 pi a
    cplx expected_fiber;  // i c^2 y1 Im tau / |tau| - 2 pi k y2 / |tau|
};

// Integrates dx1 along the two generating loops of the fibre over (l, y2).
LatticeRelations lattice_relations(const CalabiModel& m, double ell, double y2);

enum class McKSlice { Correct, ConstantXi2 };

struct SlagDefect {
    double omega = 0.0;  // sup |omega_J restricted| / induced area
    double phase = 0.0;  // sup |Im Omega_J restricted| / induced area
};

// Restrictions of omega_J and Im Omega_J to M_{c,K} = {l = K, Im tau xi1 - Re tau xi2 = c}
// on an n x n grid; ConstantXi2 replaces the second condition by xi2 = c.
SlagDefect slag_Mck_check(const CalabiModel& m, double c, double K, int n = 8,
                          McKSlice slice = McKSlice::Correct);

}  // namespace syz
