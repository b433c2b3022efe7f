#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syzlab/calabi_hk.hpp"
#include "syzlab/rational.hpp"
#include "syzlab/semiflat.hpp"

namespace syz {

struct ExactVolumes {
    Rational alpha_q;
    Rational v_check;
    Rational v_mirror;
    Rational product;
};

struct MirrorData {
    cplx tau;
    int m = 1;
    int k = 1;
    double alpha_q = 0.0;    // Im tau / m
    double v_check = 0.0;    // 1 / Im tau, volume of the special Lagrangian fibre
    double v_mirror = 0.0;   // m alpha_q, fibre volume of the mirror
    SfClassification sf_class;
    std::optional<ExactVolumes> exact;  // present in rational mode
    int kahler_moduli_dim = 0;  // 10 - k
    // B-field class carried as an opaque vector in H^2 (dimension 11 - k); it
    // is never evaluated and stays zero.
    std::vector<double> b_field;

    double product() const { return v_check * v_mirror; }
};

// Mirror parameters from (tau, m, k); needs Im tau > 0, m >= 1 and 1 <= k <= 9.
MirrorData mirror_map(const ComplexInput& tau, int m, int k);

struct PairingRow {
    std::string cycle;  // "F" or "C(m1,m2)"
    double quadrature = 0.0;
    double closed_form = 0.0;
};

struct DualityReport {
    MirrorData data;
    RotationConstants rotated;  // (eps, alpha, b0) of the rotated Calabi model
    std::vector<PairingRow> pairings;
    // Quasi-bad cycle C(m1, m2) with 2 b0 / k = -m2 / m1, when one exists.
    std::optional<CycleSpec> lagrangian_cycle;
};

// Combines mirror_map with the rotated Calabi model and pairs its semi-flat
// class against F, C(1,0) and the Lagrangian quasi-bad cycle (n x n quadrature).
DualityReport duality_report(const ComplexInput& tau, int m, int k, int n = 32);

}  // namespace syz
