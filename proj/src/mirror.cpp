#include "syzlab/mirror.hpp"

#include <cmath>
#include <limits>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

std::string cycle_name(const CycleSpec& c) {
    if (c.kind == CycleKind::Fiber) return "F";
    return "C(" + std::to_string(c.m1) + "," + std::to_string(c.m2) + ")";
}

bool fits_int(std::int64_t v) {
    return v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max();
}

}  // namespace

MirrorData mirror_map(const ComplexInput& tau, int m, int k) {
    if (!(tau.value.imag() > 0.0) || !std::isfinite(tau.value.real()) || !std::isfinite(tau.value.imag())) {
        throw ValidationError("tau must have Im tau > 0");
    }
    if (m < 1) throw ValidationError("pairing m must be >= 1");
    const ModuliDims dims = moduli_dims(k);

    MirrorData d;
    d.tau = tau.value;
    d.m = m;
    d.k = k;
    const double im = tau.value.imag();
    d.alpha_q = im / m;
    d.v_check = 1.0 / im;
    d.v_mirror = m * d.alpha_q;
    d.sf_class = classify_tau(tau.value, tau.exact);
    d.kahler_moduli_dim = dims.m_k;
    d.b_field.assign(static_cast<std::size_t>(dims.h2), 0.0);
    if (tau.exact) {
        try {
            ExactVolumes e;
            e.alpha_q = tau.exact->im / Rational(m);
            e.v_check = Rational(1) / tau.exact->im;
            e.v_mirror = Rational(m) * e.alpha_q;
            e.product = e.v_check * e.v_mirror;
            d.exact = e;
        } catch (const std::overflow_error&) {
            // Float mode only.
        }
    }
    return d;
}

DualityReport duality_report(const ComplexInput& tau, int m, int k, int n) {
    if (n < 4) throw ValidationError("duality_report needs n >= 4");
    DualityReport rep;
    rep.data = mirror_map(tau, m, k);
    rep.rotated = rotation_constants(k, tau.value);

    ModelParams p;
    p.k = k;
    p.eps = rep.rotated.eps;
    p.alpha = rep.rotated.alpha;
    p.b0 = rep.rotated.b0;
    if (rep.data.sf_class.ratio) p.set_b0(Rational(k, 2) * *rep.data.sf_class.ratio);

    const double level = 0.5;
    std::vector<CycleSpec> cycles{CycleSpec::fiber(level), CycleSpec::quasi_bad(1, 0, level)};
    const SfClassification& cls = rep.data.sf_class;
    if (cls.kind == SfClass::Standard) {
        rep.lagrangian_cycle = CycleSpec::quasi_bad(1, 0, level);
    } else if (cls.kind == SfClass::QuasiRegular && fits_int(cls.m1) && fits_int(cls.m2)) {
        rep.lagrangian_cycle = CycleSpec::quasi_bad(static_cast<int>(cls.m1), static_cast<int>(cls.m2), level);
        if (!(cls.m1 == 1 && cls.m2 == 0)) cycles.push_back(*rep.lagrangian_cycle);
    }
    for (const CycleSpec& c : cycles) {
        rep.pairings.push_back({cycle_name(c), pair_cycle(p, c, n), pair_closed_form(p, c)});
    }
    return rep;
}

}  // namespace syz
