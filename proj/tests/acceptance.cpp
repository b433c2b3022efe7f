// Acceptance run: one PASS/FAIL line per criterion, each with its measured
// values, pinned tolerances and wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "syzlab/calabi_hk.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/hein_glue.hpp"
#include "syzlab/mirror.hpp"
#include "syzlab/semiflat.hpp"
#include "syzlab/slag.hpp"

using namespace syz;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records "label measured op bound" and folds the comparison into pass.
    void le(const char* label, double measured, double bound) {
        const bool ok = measured <= bound;
        pass = pass && ok;
        detail << label << " " << measured << (ok ? " <= " : " > ") << bound << "; ";
    }
    void ge(const char* label, double measured, double bound) {
        const bool ok = measured >= bound;
        pass = pass && ok;
        detail << label << " " << measured << (ok ? " >= " : " < ") << bound << "; ";
    }
    void gt(const char* label, double measured, double bound) {
        const bool ok = measured > bound;
        pass = pass && ok;
        detail << label << " " << measured << (ok ? " > " : " <= ") << bound << "; ";
    }
    void in(const char* label, double measured, double lo, double hi) {
        const bool ok = measured >= lo && measured <= hi;
        pass = pass && ok;
        detail << label << " " << measured << (ok ? " in [" : " outside [") << lo << ", " << hi << "]; ";
    }
    void truth(const char* label, bool ok) {
        pass = pass && ok;
        detail << label << " " << (ok ? "yes" : "NO") << "; ";
    }
};

ModelParams params(int k, double eps, double b0, double alpha = 1.0) {
    ModelParams p;
    p.k = k;
    p.eps = eps;
    p.b0 = b0;
    p.alpha = alpha;
    return p;
}

FiberPoint point_at(double ell, double theta, cplx x) { return FiberPoint::from_y(x, {ell, theta}); }

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. Monge-Ampere identity over 12 configurations x 200 points.
void criterion1(Outcome& o) {
    const int ks[] = {1, 2, 3, 9};
    const double epss[] = {0.1, 1.0, 10.0};
    const double b0s[] = {0.0, 0.25, -0.25};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ell(0.2, 30.0);
    std::uniform_real_distribution<double> th(-10.0, 10.0);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    double worst = 0.0;
    for (int c = 0; c < 12; ++c) {
        ModelParams p = params(ks[c % 4], epss[(c / 4) % 3], b0s[c % 3], 0.5 + 0.25 * c);
        if (c % 2 == 1) p.kappa = LaurentSeries{{{0, 1.0}, {1, 1.0}}};
        for (int i = 0; i < 200; ++i) {
            const FiberPoint pt = point_at(ell(rng), th(rng), {xs(rng), xs(rng)});
            worst = std::max(worst, std::abs(ma_residual(p, pt).relative()));
        }
    }
    o.le("max relative residual", worst, 1e-10);
}

// 2. Pairings against the closed form on 64 x 64 grids.
void criterion2(Outcome& o) {
    struct Case {
        ModelParams p;
        CycleSpec c;
    };
    const std::vector<Case> cases{
        {params(2, 0.5, 0.0), CycleSpec::fiber(0.5)},
        {params(1, 1.0, -0.25), CycleSpec::quasi_bad(1, 0, 0.5)},
        {params(3, 2.0, 0.5, 1.7), CycleSpec::quasi_bad(1, 1, 0.3)},
        {params(2, 1.5, 0.25, 0.6), CycleSpec::quasi_bad(3, -1, 0.7)},
        {params(1, 1.0, 0.0, 2.0), CycleSpec::fiber(0.2)},
    };
    double worst = 0.0;
    for (const Case& c : cases) worst = std::max(worst, rel_err(pair_cycle(c.p, c.c, 64), pair_closed_form(c.p, c.c)));
    o.le("max relative pairing error", worst, 1e-8);
    double lag = 0.0;
    lag = std::max(lag, std::abs(pair_cycle(params(1, 1.0, -0.25), CycleSpec::quasi_bad(2, 1, 0.5), 64)));
    lag = std::max(lag, std::abs(pair_cycle(params(1, 1.0, 0.0), CycleSpec::quasi_bad(1, 0, 0.5), 64)));
    lag = std::max(lag, std::abs(pair_cycle(params(3, 2.0, 1.5), CycleSpec::quasi_bad(1, -1, 0.4), 64)));
    o.le("Lagrangian |pairing|", lag, 1e-10);
}

// 3. Translation decay variants on the four canonical sections.
void criterion3(Outcome& o) {
    const ModelParams p = params(2, 1.0, 0.0);
    std::vector<double> ells;
    for (int i = 0; i < 12; ++i) ells.push_back(5.0 * std::pow(8.0, i / 11.0));
    const DecayClass a = classify_translation(p, {{{{-1, 1.0}}}, 0.0, 0.0}, ells);
    const DecayClass b = classify_translation(p, {{}, 0.0, 1.0}, ells);
    const DecayClass c = classify_translation(p, {{{{0, cplx(0.0, 1.0)}, {1, 1.0}}}, 0.0, 0.0}, ells);
    const DecayClass d = classify_translation(p, {{{{0, 0.5}, {1, 1.0}}}, 0.0, 0.0}, ells);
    o.truth("variants (i)-(iv)", a.variant == DecayVariant::NotUniform &&
                                     b.variant == DecayVariant::BoundedDifference &&
                                     c.variant == DecayVariant::PowerDecay && d.variant == DecayVariant::ExpDecay);
    o.in("case (iii) exponent", c.fit.exponent, -1.5, -1.2);
    o.ge("case (iv) r^2", d.fit.r_squared, 0.99);
}

// 4. Model special Lagrangian geometry.
void criterion4(Outcome& o) {
    double lam = 0.0;
    double lam_exact = 0.0;
    for (auto [k, eps, ell] : {std::tuple{1, 1.0, 10.0}, std::tuple{2, 0.5, 4.0}, std::tuple{1, 3.0, 0.5}}) {
        const ModelFiber f = model_fiber(params(k, eps, 0.0), 1, 0, ell);
        const double exact = std::min(kPi * eps / (k * ell), kTwoPi * k * ell / eps);
        lam = std::max(lam, rel_err(lambda1_rayleigh(f, 64), exact));
        lam_exact = std::max(lam_exact, rel_err(fiber_geometry(f).lambda1, exact));
    }
    o.le("lambda_1 lattice vs closed form", lam_exact, 1e-12);
    o.le("lambda_1 Rayleigh rel. error", lam, 0.02);

    const ModelParams p = params(1, 1.0, 0.0);
    const double v5 = fiber_geometry(model_fiber(p, 1, 0, 5.0)).volume;
    const double v50 = fiber_geometry(model_fiber(p, 1, 0, 50.0)).volume;
    o.le("volume change l=5 vs l=50", rel_err(v50, v5), 1e-12);

    double h = 0.0;
    std::vector<DecaySample> pi;
    for (double ell : {5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 40.0}) {
        const SecondFundamentalForm s = second_fundamental_form(model_fiber(p, 1, 0, ell), 0.2, 1.1);
        h = std::max(h, s.mean_curvature);
        pi.push_back({radial_distance(p, ell), s.norm});
    }
    o.le("|H|", h, 1e-8);
    o.in("|Pi| exponent", fit_decay(pi, DecayModel::Power, 0.0).exponent, -1.15, -0.85);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ell(2.0, 60.0);
    std::uniform_real_distribution<double> frac(0.01, 1.0);
    std::uniform_real_distribution<double> shift(0.0, 1.0);
    bool all = true;
    for (int i = 0; i < 20; ++i) {
        // The fibre is a flat homogeneous torus, so the centre p only enters through t.
        const ModelFiber f = model_fiber(params(1 + i % 3, 0.5 + 0.1 * i, 0.0), 1, 0, ell(rng), shift(rng));
        const double scale = fiber_geometry(f).scale;
        all = all && noncollapse_check(f, frac(rng) * scale);
    }
    o.truth("non-collapsed at 20 random (p, delta)", all);
}

// 5. Curvature decay.
void criterion5(Outcome& o) {
    const ModelParams p = params(1, 1.0, 0.0);
    std::vector<DecaySample> s;
    for (double ell : {5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 40.0}) {
        s.push_back({radial_distance(p, ell), curvature_norm(p, point_at(ell, 0.0, 0.0))});
    }
    o.in("|Rm| exponent", fit_decay(s, DecayModel::Power).exponent, -2.15, -1.85);
}

// 6. HyperKaehler triple, rotation and lattice relations.
void criterion6(Outcome& o) {
    const double s3 = std::sqrt(3.0) / 2.0;
    const std::vector<cplx> taus{{0.0, 1.0}, {0.0, 2.0}, {-0.5, s3}, {-0.5, 2.0}};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> l(0.3, 5.0);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    double triple = 0.0;
    double volume = 0.0;
    double rotation = 0.0;
    double lattice = 0.0;
    for (int k : {1, 2, 3}) {
        for (cplx tau : taus) {
            CalabiModel m;
            m.k = k;
            m.tau = tau;
            m.validate();
            for (int i = 0; i < 100; ++i) {
                const CalabiPoint pt{l(rng), ang(rng), xi(rng), xi(rng)};
                const HkTriple t = hk_triple(m, pt);
                const double sq = 2.0 * m.c() * m.c() * pt.ell;
                triple = std::max({triple, std::abs(wedge_top(t.I.M, t.J.M)) / sq,
                                   std::abs(wedge_top(t.I.M, t.K.M)) / sq, std::abs(wedge_top(t.J.M, t.K.M)) / sq,
                                   std::abs(-wedge_top(t.I.M, t.I.M) - sq) / sq,
                                   std::abs(-wedge_top(t.J.M, t.J.M) - sq) / sq,
                                   std::abs(-wedge_top(t.K.M, t.K.M) - sq) / sq});
                const Mat4 om = frame_to_coords(t.J.M, calabi_frame(m, pt));
                const CMat4 big = holomorphic_volume_J(m, pt);
                const cplx rhs = 0.5 * wedge_top(big, CMat4(big.conjugate()));
                const double lhs = wedge_top(om, om);
                volume = std::max(volume, std::abs(lhs - rhs) / std::abs(lhs));
            }
            rotation = std::max(rotation, verify_rotation_grid(m, 3, 5));
            for (auto [ell, y2] : {std::pair{1.0, 0.3}, std::pair{2.5, -0.7}}) {
                const LatticeRelations lr = lattice_relations(m, ell, y2);
                lattice = std::max({lattice, std::abs(lr.psi_loop - lr.expected_psi),
                                    std::abs(lr.fiber_loop - lr.expected_fiber) / (1.0 + std::abs(lr.expected_fiber))});
            }
        }
    }
    o.le("triple identities", triple, 1e-12);
    o.le("omega_J^2 - Omega_J^Omega_J-bar/2", volume, 1e-12);
    o.le("rotation residual", rotation, 1e-8);
    o.le("lattice relations", lattice, 1e-10);
}

GlueConfig glue_config(double r, double s) {
    GlueConfig cfg;
    cfg.params = params(1, 1.0, 0.0);
    cfg.r = r;
    cfg.s = s;
    cfg.v0c = 1.0;
    cfg.vomc = 0.2;
    return calibrate(cfg);
}

// 7. Gluing: harmonic-match constant, positivity, affine mass integral, root.
void criterion7(Outcome& o) {
    const ModelParams p = params(1, 1.0, 0.0);
    std::vector<double> ratios;
    for (auto [r, s] : {std::pair{0.1, 0.02}, std::pair{0.05, 0.01}, std::pair{0.2, 0.04}}) {
        ratios.push_back(harmonic_match_ratio(p, r, s));
    }
    o.le("harmonic-match ratio spread (max/min)", *std::max_element(ratios.begin(), ratios.end()) /
                                               *std::min_element(ratios.begin(), ratios.end()),
         2.0);

    double margin = 1e300;
    for (auto [r, s] : {std::pair{0.1, 0.02}, std::pair{0.1, 0.005}}) {
        const GlueConfig cfg = glue_config(r, s);
        for (double alpha : {0.2, 0.7, 1.0, 2.0, 5.0}) {
            for (double f : {1.01, 3.0}) {
                margin = std::min(margin, positivity_scan(cfg, alpha, f * positivity_threshold(cfg, alpha)).margin);
            }
        }
    }
    o.gt("min positivity margin above threshold", margin, 0.0);

    const GlueConfig cfg = glue_config(0.1, 0.005);
    const double t = 5.0;
    std::vector<double> a{1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
    std::vector<double> v;
    for (double x : a) v.push_back(mass_integral(cfg, x, t));
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sx += a[i];
        sy += v[i];
        sxx += a[i] * a[i];
        sxy += a[i] * v[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double resid = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        resid = std::max(resid, std::abs(v[i] - (icpt + slope * a[i])));
        scale = std::max(scale, std::abs(v[i]));
    }
    o.le("I(alpha) regression residual (rel.)", resid / scale, 1e-9);

    const AlphaSolution sol = solve_alpha(cfg, 2.0);
    GlueConfig fine = cfg;
    fine.quad_nodes = 2 * cfg.quad_nodes;
    const AlphaSolution sol2 = solve_alpha(fine, 2.0);
    o.truth("sign bracket I(lo) > 0 > I(hi)", sol.i_lo > 0.0 && sol.i_hi < 0.0 && sol.unique);
    o.le("root drift under 2x refinement", std::abs(sol2.alpha - sol.alpha) / sol.alpha, 1e-6);
}

// 8. Mirror arithmetic.
void criterion8(Outcome& o) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> num(-40, 40);
    std::uniform_int_distribution<int> den(1, 30);
    std::uniform_int_distribution<int> pos(1, 60);
    std::uniform_int_distribution<int> mm(1, 12);
    bool exact = true;
    bool trichotomy = true;
    for (int i = 0; i < 50; ++i) {
        const int re = i % 5 == 0 ? 0 : num(rng);
        const std::string text = std::to_string(re) + "/" + std::to_string(den(rng)) + "+" +
                                 std::to_string(pos(rng)) + "/" + std::to_string(den(rng)) + "i";
        const MirrorData d = mirror_map(parse_complex(text), mm(rng), 1 + i % 9);
        exact = exact && d.exact && d.exact->product == Rational(1);
        trichotomy = trichotomy && ((d.sf_class.kind == SfClass::Standard) == (d.tau.real() == 0.0));
    }
    o.truth("exact V_check V_mirror = 1 (50 draws)", exact);
    o.truth("Standard iff Re tau = 0", trichotomy);
    bool dims = true;
    for (int k = 1; k <= 9; ++k) {
        const ModuliDims md = moduli_dims(k);
        const MirrorData d = mirror_map(parse_complex("2i"), 1, k);
        dims = dims && md.v_m == 10 - k && md.h2 == 11 - k && d.kahler_moduli_dim == 10 - k &&
               static_cast<int>(d.b_field.size()) == 11 - k;
    }
    o.truth("dimensions (10-k, 11-k) for k=1..9", dims);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "Monge-Ampere identity", 5.0, criterion1},
        {2, "pairing closed form", 10.0, criterion2},
        {3, "translation decay", 30.0, criterion3},
        {4, "model special Lagrangian geometry", 60.0, criterion4},
        {5, "curvature decay", 60.0, criterion5},
        {6, "hyperKaehler rotation end to end", 30.0, criterion6},
        {7, "gluing and mass integral", 60.0, criterion7},
        {8, "mirror arithmetic", 1.0, criterion8},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what() << "; ";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.le("runtime s", secs, c.budget_s);
        std::printf("criterion %d %s: %s | %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
