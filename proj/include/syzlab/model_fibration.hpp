#pragma once

#include <utility>
#include <vector>

#include "syzlab/numerics.hpp"

namespace syz {

// Point of the model fibration on the universal cover of the fibre.
//   log z = log|z| + i(arg z + 2 pi branch), arg z in [0, 2 pi)
//   y = -log z = l + i theta, so l = -log|z| and theta = -(arg z + 2 pi branch).
struct FiberPoint {
    cplx x{0.0, 0.0};
    cplx z{0.5, 0.0};
    int branch = 0;

    void validate() const;
    double arg() const;  // in [0, 2 pi)
    cplx log_z() const;
    cplx y() const { return -log_z(); }
    double ell() const { return -std::log(std::abs(z)); }
    double theta() const { return y().imag(); }

    // Builds the point with the given y; the branch is read off Im y.
    static FiberPoint from_y(cplx x, cplx y);
};

// Generators (1, (k / 2 pi i) log z) of the fibre lattice.
std::pair<cplx, cplx> lattice_basis(int k, cplx z, int branch);

// Translates x into the half-open parallelogram spanned by lattice_basis.
FiberPoint reduce_point(const FiberPoint& p, int k);

// Finite Laurent series sum_p c_p z^p.
struct LaurentSeries {
    std::vector<std::pair<int, cplx>> terms;

    cplx eval(cplx z) const;
    cplx deriv(cplx z) const;
    cplx deriv2(cplx z) const;
    cplx coeff(int power) const;
    bool has_pole() const;
    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
};

// Multivalued section h(z) + (a / 2 pi i) log z + (b / (2 pi i)^2) (log z)^2.
struct SectionData {
    LaurentSeries h;
    double a = 0.0;
    double b = 0.0;

    SectionData operator+(const SectionData& o) const;
    SectionData operator-() const;
    // Single valued modulo the lattice: a + b and 2b/k integral.
    bool is_single_valued(int k, double tol = 1e-12) const;
};

cplx section_eval(const SectionData& s, cplx z, int branch, int k);
// d/dz of the section on the given branch.
cplx section_dz(const SectionData& s, cplx z, int branch);
// The section as a function of y = -log z and its y-derivatives.
cplx section_y(const SectionData& s, cplx y);
cplx section_dy(const SectionData& s, cplx y);
cplx section_dy2(const SectionData& s, cplx y);

enum class CycleKind { Fiber, QuasiBad };

// Orientation of the parametrization (t1, t2) of a quasi-bad cycle.  With
// Standard orientation the integral of dx ^ dz / z is a positive multiple of i.
enum class CycleOrientation { Standard, Flipped };

struct CycleSpec {
    CycleKind kind = CycleKind::QuasiBad;
    int m1 = 1;
    int m2 = 0;
    double level = 0.5;  // radius |z| of the base circle

    void validate() const;
    static CycleSpec fiber(double level) { return {CycleKind::Fiber, 0, 0, level}; }
    static CycleSpec quasi_bad(int m1, int m2, double level) {
        return {CycleKind::QuasiBad, m1, m2, level};
    }
};

// Point of C_{m1,m2}(level) at parameters t1 in [0,1), t2 in [0, 2 pi m1).
FiberPoint cycle_point(const CycleSpec& c, int k, double t1, double t2);

// Tangent vectors d/dt1, d/dt2 of cycle_point in the z-chart (x1, x2, Re z, Im z).
std::pair<Vec4, Vec4> cycle_tangents(const CycleSpec& c, int k, double t1, double t2,
                                     CycleOrientation o = CycleOrientation::Standard);

// Homology coefficients: [C_{m1,m2}] = m1 [C_{1,0}] + m2 [F].
std::pair<int, int> cycle_decompose(const CycleSpec& c);

}  // namespace syz
