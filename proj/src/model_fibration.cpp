#include "syzlab/model_fibration.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

const cplx kI(0.0, 1.0);
const cplx kTwoPiI(0.0, kTwoPi);

void check_z(cplx z) {
    double r = std::abs(z);
    if (!(r > 0.0) || !(r < 1.0) || !std::isfinite(r)) {
        throw ValidationError("base point must satisfy 0 < |z| < 1, got |z| = " + std::to_string(r));
    }
}

double arg02pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

cplx log_branch(cplx z, int branch) {
    return {std::log(std::abs(z)), arg02pi(z) + kTwoPi * branch};
}

}  // namespace

void FiberPoint::validate() const {
    check_z(z);
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw ValidationError("fibre coordinate must be finite");
    }
}

double FiberPoint::arg() const { return arg02pi(z); }

cplx FiberPoint::log_z() const { return log_branch(z, branch); }

FiberPoint FiberPoint::from_y(cplx x, cplx y) {
    double phase = -y.imag();  // arg z + 2 pi branch
    int branch = static_cast<int>(std::floor(phase / kTwoPi));
    FiberPoint p;
    p.x = x;
    p.z = std::exp(-y);
    p.branch = branch;
    // exp may round the argument across the cut; keep log z consistent with y.
    double a = arg02pi(p.z);
    double want = phase - kTwoPi * branch;
    if (std::abs(a - want) > kPi) p.branch += a > want ? -1 : 1;
    return p;
}

std::pair<cplx, cplx> lattice_basis(int k, cplx z, int branch) {
    check_z(z);
    if (k < 1) throw ValidationError("degree k must be positive");
    return {cplx(1.0, 0.0), static_cast<double>(k) * log_branch(z, branch) / kTwoPiI};
}

FiberPoint reduce_point(const FiberPoint& p, int k) {
    p.validate();
    auto [e1, e2] = lattice_basis(k, p.z, p.branch);
    double c2 = p.x.imag() / e2.imag();
    double c1 = p.x.real() - c2 * e2.real();
    // The small offset keeps reduce_point idempotent when a coefficient
    // lands a rounding error below an integer.
    double n1 = std::floor(c1 + 1e-13);
    double n2 = std::floor(c2 + 1e-13);
    FiberPoint out = p;
    out.x = p.x - n1 * e1 - n2 * e2;
    return out;
}

cplx LaurentSeries::eval(cplx z) const {
    cplx s = 0.0;
    for (const auto& [p, c] : terms) s += c * std::pow(z, p);
    return s;
}

cplx LaurentSeries::deriv(cplx z) const {
    cplx s = 0.0;
    for (const auto& [p, c] : terms) {
        if (p != 0) s += c * static_cast<double>(p) * std::pow(z, p - 1);
    }
    return s;
}

cplx LaurentSeries::deriv2(cplx z) const {
    cplx s = 0.0;
    for (const auto& [p, c] : terms) {
        if (p != 0 && p != 1) s += c * static_cast<double>(p) * (p - 1.0) * std::pow(z, p - 2);
    }
    return s;
}

cplx LaurentSeries::coeff(int power) const {
    cplx s = 0.0;
    for (const auto& [p, c] : terms) {
        if (p == power) s += c;
    }
    return s;
}

bool LaurentSeries::has_pole() const {
    for (const auto& [p, c] : terms) {
        if (p < 0 && c != cplx(0.0, 0.0)) return true;
    }
    return false;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    std::map<int, cplx> acc;
    for (const auto& [p, c] : terms) acc[p] += c;
    for (const auto& [p, c] : o.terms) acc[p] += c;
    LaurentSeries out;
    for (const auto& [p, c] : acc) out.terms.emplace_back(p, c);
    return out;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries out = *this;
    for (auto& t : out.terms) t.second = -t.second;
    return out;
}

SectionData SectionData::operator+(const SectionData& o) const {
    return {h + o.h, a + o.a, b + o.b};
}

SectionData SectionData::operator-() const { return {-h, -a, -b}; }

bool SectionData::is_single_valued(int k, double tol) const {
    auto near_int = [tol](double v) { return std::abs(v - std::round(v)) <= tol; };
    return near_int(a + b) && near_int(2.0 * b / k);
}

cplx section_eval(const SectionData& s, cplx z, int branch, int k) {
    check_z(z);
    if (k < 1) throw ValidationError("degree k must be positive");
    cplx lz = log_branch(z, branch);
    return s.h.eval(z) + s.a * lz / kTwoPiI + s.b * lz * lz / (kTwoPiI * kTwoPiI);
}

cplx section_dz(const SectionData& s, cplx z, int branch) {
    cplx lz = log_branch(z, branch);
    return s.h.deriv(z) + s.a / (kTwoPiI * z) + 2.0 * s.b * lz / (kTwoPiI * kTwoPiI * z);
}

cplx section_y(const SectionData& s, cplx y) {
    return s.h.eval(std::exp(-y)) - s.a * y / kTwoPiI + s.b * y * y / (kTwoPiI * kTwoPiI);
}

cplx section_dy(const SectionData& s, cplx y) {
    cplx z = std::exp(-y);
    return -z * s.h.deriv(z) - s.a / kTwoPiI + 2.0 * s.b * y / (kTwoPiI * kTwoPiI);
}

cplx section_dy2(const SectionData& s, cplx y) {
    cplx z = std::exp(-y);
    return z * s.h.deriv(z) + z * z * s.h.deriv2(z) + 2.0 * s.b / (kTwoPiI * kTwoPiI);
}

void CycleSpec::validate() const {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw ValidationError("cycle level must lie in (0,1)");
    }
    if (kind == CycleKind::QuasiBad) {
        if (m1 < 1) throw ValidationError("quasi-bad cycle needs m1 >= 1");
        if (std::gcd(m1, m2) != 1) throw ValidationError("quasi-bad cycle needs gcd(m1, m2) = 1");
    }
}

FiberPoint cycle_point(const CycleSpec& c, int k, double t1, double t2) {
    c.validate();
    if (c.kind != CycleKind::QuasiBad) {
        throw ValidationError("cycle_point: fibres are parametrized by the fundamental domain");
    }
    double big_l = -std::log(c.level);
    FiberPoint p;
    double x2 = static_cast<double>(c.m2) / c.m1 * (k * big_l / kTwoPi) * (t2 / kTwoPi);
    p.x = {t1, x2};
    p.branch = static_cast<int>(std::floor(t2 / kTwoPi));
    double phase = t2 - kTwoPi * p.branch;
    p.z = std::polar(c.level, phase);
    return p;
}

std::pair<Vec4, Vec4> cycle_tangents(const CycleSpec& c, int k, double /*t1*/, double t2,
                                     CycleOrientation o) {
    c.validate();
    double big_l = -std::log(c.level);
    Vec4 d1(1.0, 0.0, 0.0, 0.0);
    Vec4 d2(0.0, static_cast<double>(c.m2) / c.m1 * (k * big_l / kTwoPi) / kTwoPi,
            -c.level * std::sin(t2), c.level * std::cos(t2));
    if (o == CycleOrientation::Flipped) d2 = -d2;
    return {d1, d2};
}

std::pair<int, int> cycle_decompose(const CycleSpec& c) {
    c.validate();
    if (c.kind != CycleKind::QuasiBad) return {0, 1};
    return {c.m1, c.m2};
}

}  // namespace syz
