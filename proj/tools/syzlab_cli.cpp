#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "report.hpp"
#include "syzlab/calabi_hk.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/hein_glue.hpp"
#include "syzlab/mirror.hpp"
#include "syzlab/semiflat.hpp"
#include "syzlab/slag.hpp"

using namespace syz;
using namespace syz::cli;

namespace {

// Flags shared by every command that builds a semi-flat model.
struct ModelFlags {
    int k = 1;
    double eps = 1.0;
    std::string b0 = "0";
    double alpha = 1.0;
    double kappa1 = 0.0;  // kappa(z) = 1 + kappa1 z

    void add(CLI::App* cmd) {
        cmd->add_option("--k", k, "degree of the I_k fibre")->capture_default_str();
        cmd->add_option("--eps", eps, "fibre area parameter")->capture_default_str();
        cmd->add_option("--b0", b0, "shift b0, decimal or p/q")->capture_default_str();
        cmd->add_option("--alpha", alpha, "rescaling alpha")->capture_default_str();
        cmd->add_option("--kappa1", kappa1, "linear coefficient of kappa(z) = 1 + c z")->capture_default_str();
    }

    ModelParams params() const {
        ModelParams p;
        p.k = k;
        p.eps = eps;
        p.alpha = alpha;
        p.set_b0(Rational::parse(b0));
        if (kappa1 != 0.0) p.kappa.terms.push_back({1, cplx(kappa1, 0.0)});
        p.validate();
        return p;
    }

    json echo() const { return {{"k", k}, {"eps", eps}, {"b0", b0}, {"alpha", alpha}, {"kappa1", kappa1}}; }
};

struct GlueFlags {
    ModelFlags model;
    double r = 0.1;
    double s = 0.005;
    double gamma = 0.05;
    double rho_out = 0.9;
    double v0c = 0.0;
    double vomc = 0.0;
    int quad_nodes = 64;

    void add(CLI::App* cmd) {
        cmd->add_option("--k", model.k, "degree of the I_k fibre")->capture_default_str();
        cmd->add_option("--eps", model.eps, "fibre area parameter")->capture_default_str();
        cmd->add_option("--b0", model.b0, "shift b0, decimal or p/q")->capture_default_str();
        cmd->add_option("--r", r, "inner radius of the transition annulus")->capture_default_str();
        cmd->add_option("--s", s, "width parameter of the transition annulus")->capture_default_str();
        cmd->add_option("--gamma", gamma, "coefficient of i dz ^ dz-bar in omega_0")->capture_default_str();
        cmd->add_option("--rho-out", rho_out, "outer edge of the modeled annulus")->capture_default_str();
        cmd->add_option("--v0c", v0c, "integral of omega_0^2 outside the modeled region")->capture_default_str();
        cmd->add_option("--vomc", vomc, "integral of Omega ^ conj(Omega) outside the modeled region")
            ->capture_default_str();
        cmd->add_option("--quad-nodes", quad_nodes, "Gauss-Legendre nodes per radial piece")->capture_default_str();
    }

    GlueConfig config() const {
        GlueConfig cfg;
        cfg.params = model.params();
        cfg.r = r;
        cfg.s = s;
        cfg.gamma = gamma;
        cfg.rho_out = rho_out;
        cfg.v0c = v0c;
        cfg.vomc = vomc;
        cfg.quad_nodes = quad_nodes;
        return calibrate(cfg);
    }

    json echo() const {
        json j = model.echo();
        j.erase("alpha");
        j.erase("kappa1");
        j["r"] = r;
        j["s"] = s;
        j["gamma"] = gamma;
        j["rho_out"] = rho_out;
        j["v0c"] = v0c;
        j["vomc"] = vomc;
        j["quad_nodes"] = quad_nodes;
        return j;
    }
};

std::vector<double> default_ells() { return {5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 40.0}; }

json classification_json(const SfClassification& c) {
    json j{{"kind", sf_class_name(c.kind)}, {"heuristic", c.heuristic}};
    if (c.kind == SfClass::QuasiRegular) {
        j["m1"] = c.m1;
        j["m2"] = c.m2;
    }
    return j;
}

json hermitian_json(const CMat2& h) {
    return {{"h_xx", h(0, 0).real()}, {"h_zz", h(1, 1).real()}, {"h_xz", cplx_json(h(0, 1))}};
}

json matrix_json(const Mat4& m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------------------
// semiflat

void semiflat_eval(Report& rep, const ModelFlags& mf, const std::string& x, const std::string& z, int branch) {
    const ModelParams p = mf.params();
    const FiberPoint pt{parse_complex(x).value, parse_complex(z).value, branch};
    pt.validate();
    rep.inputs = mf.echo();
    rep.inputs["x"] = x;
    rep.inputs["z"] = z;
    rep.inputs["branch"] = branch;
    const MaResidual res = ma_residual(p, pt);
    rep.results["hermitian"] = hermitian_json(sf_hermitian(p, pt));
    rep.results["form"] = matrix_json(sf_form(p, pt).M);
    rep.results["omega_squared_minus_reference"] = res.absolute;
    rep.results["reference"] = res.reference;
    rep.check_le("ma_residual_relative", std::abs(res.relative()), 1e-10);
}

void semiflat_residual(Report& rep, const ModelFlags& mf, int grid) {
    if (grid < 2) throw ValidationError("--grid must be at least 2");
    const ModelParams p = mf.params();
    rep.inputs = mf.echo();
    rep.inputs["grid"] = grid;
    const std::size_t n = static_cast<std::size_t>(grid);
    std::vector<double> rel(n * n);
    parallel_for(rel.size(), [&](std::size_t idx) {
        const double i = static_cast<double>(idx / n);
        const double j = static_cast<double>(idx % n);
        // l = -log|z| log-spaced over [0.2, 30]; towards |z| = 1 the determinant
        // is a difference of terms of size W^2 and loses digits.
        const double ell = 0.2 * std::pow(150.0, (i + 0.5) / grid);
        const cplx z = std::polar(std::exp(-ell), kTwoPi * (j + 0.5) / grid);
        const FiberPoint pt{cplx(0.37 * j / grid, 0.61 * i / grid), z, 0};
        rel[idx] = std::abs(ma_residual(p, pt).relative());
    });
    double worst = 0.0;
    for (double v : rel) worst = std::max(worst, v);
    rep.results["points"] = rel.size();
    rep.results["max_relative_residual"] = worst;
    rep.check_le("ma_residual_relative", worst, 1e-10);
}

void semiflat_pair(Report& rep, const ModelFlags& mf, int m1, int m2, double level, int n) {
    const ModelParams p = mf.params();
    rep.inputs = mf.echo();
    rep.inputs["m1"] = m1;
    rep.inputs["m2"] = m2;
    rep.inputs["level"] = level;
    rep.inputs["n"] = n;
    json rows = json::array();
    for (const CycleSpec& c : {CycleSpec::fiber(level), CycleSpec::quasi_bad(m1, m2, level)}) {
        const std::string name = c.kind == CycleKind::Fiber ? "F"
                                                            : "C(" + std::to_string(m1) + "," + std::to_string(m2) + ")";
        const double quad = pair_cycle(p, c, n);
        const double closed = pair_closed_form(p, c);
        rows.push_back({{"cycle", name}, {"quadrature", quad}, {"closed_form", closed}});
        if (std::abs(closed) <= 1e-12 * p.eps) {
            rep.check_le("lagrangian_" + name, std::abs(quad), 1e-10);
        } else {
            rep.check_le("pairing_" + name, rel_err(quad, closed), 1e-8);
        }
    }
    rep.results["pairings"] = rows;
    if (const auto mm = rational_near_infinity(p)) {
        rep.results["rational_near_infinity"] = {mm->first, mm->second};
    }
}

SectionData parse_section(const std::vector<std::string>& terms, double a, double b) {
    SectionData s;
    for (const std::string& t : terms) {
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw ValidationError("section term must look like n:coefficient, got " + t);
        int power = 0;
        try {
            power = std::stoi(t.substr(0, colon));
        } catch (const std::exception&) {
            throw ValidationError("bad power in section term " + t);
        }
        s.h.terms.push_back({power, parse_complex(t.substr(colon + 1)).value});
    }
    s.a = a;
    s.b = b;
    return s;
}

DecayVariant expected_variant(const SectionData& s) {
    if (s.h.has_pole()) return DecayVariant::NotUniform;
    if (s.b != 0.0) return DecayVariant::BoundedDifference;
    if (s.h.coeff(0).imag() != 0.0 || s.a != 0.0) return DecayVariant::PowerDecay;
    return DecayVariant::ExpDecay;
}

void semiflat_classify(Report& rep, const ModelFlags& mf, const std::vector<std::string>& terms, double a, double b,
                       std::vector<double> ells) {
    const ModelParams p = mf.params();
    if (ells.empty()) {
        for (int i = 0; i < 12; ++i) ells.push_back(5.0 * std::pow(8.0, i / 11.0));
    }
    const SectionData s = parse_section(terms, a, b);
    rep.inputs = mf.echo();
    rep.inputs["h"] = terms;
    rep.inputs["a"] = a;
    rep.inputs["b"] = b;
    rep.inputs["ells"] = ells;
    const DecayClass dc = classify_translation(p, s, ells);
    rep.results["variant"] = decay_variant_name(dc.variant);
    rep.results["expected_variant"] = decay_variant_name(expected_variant(s));
    rep.results["scale"] = dc.scale;
    rep.results["fit"] = fit_json(dc.fit);
    rep.curve = dc.samples;
    rep.check_true("variant_matches_section", dc.variant == expected_variant(s));
    if (dc.variant == DecayVariant::PowerDecay) rep.check_in("power_exponent", dc.fit.exponent, -1.5, -1.2);
    if (dc.variant == DecayVariant::ExpDecay) rep.check_ge("stretched_exp_r_squared", dc.fit.r_squared, 0.99);
}

void semiflat_curvature(Report& rep, const ModelFlags& mf, std::vector<double> ells) {
    const ModelParams p = mf.params();
    if (ells.empty()) ells = default_ells();
    rep.inputs = mf.echo();
    rep.inputs["ells"] = ells;
    for (double ell : ells) {
        if (!(ell > 0.0)) throw ValidationError("curvature samples need l > 0");
        rep.curve.push_back({radial_distance(p, ell), curvature_norm(p, FiberPoint::from_y({0.0, 0.0}, {ell, 0.0}))});
    }
    const DecayFit f = fit_decay(rep.curve, DecayModel::Power);
    rep.results["fit"] = fit_json(f);
    rep.check_in("curvature_exponent", f.exponent, -2.15, -1.85);
}

// ---------------------------------------------------------------------------
// slag

struct FiberFlags {
    int m1 = 1;
    int m2 = 0;
    double ell = 10.0;
    double t = 0.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--m1", m1, "cycle coefficient m1")->capture_default_str();
        cmd->add_option("--m2", m2, "cycle coefficient m2")->capture_default_str();
        cmd->add_option("--ell", ell, "base circle at l = -log|z|")->capture_default_str();
        cmd->add_option("--t", t, "offset Im x = t")->capture_default_str();
    }

    void echo(json& j) const {
        j["m1"] = m1;
        j["m2"] = m2;
        j["ell"] = ell;
        j["t"] = t;
    }
};

void slag_check(Report& rep, const ModelFlags& mf, const FiberFlags& ff, int n) {
    const ModelFiber f = model_fiber(mf.params(), ff.m1, ff.m2, ff.ell, ff.t);
    rep.inputs = mf.echo();
    ff.echo(rep.inputs);
    rep.inputs["n"] = n;
    const SpecialDefect d = check_special(f, n);
    rep.results["omega_defect"] = d.omega;
    rep.results["phase_defect"] = d.phase;
    rep.check_le("lagrangian", d.omega, 1e-10);
    if (f.params.kappa_is_one()) rep.check_le("special_phase", d.phase, 1e-10);
}

void slag_geometry(Report& rep, const ModelFlags& mf, const FiberFlags& ff, int rayleigh_n, double delta_frac) {
    const ModelFiber f = model_fiber(mf.params(), ff.m1, ff.m2, ff.ell, ff.t);
    rep.inputs = mf.echo();
    ff.echo(rep.inputs);
    rep.inputs["rayleigh_n"] = rayleigh_n;
    rep.inputs["delta_frac"] = delta_frac;
    const FiberGeometry g = fiber_geometry(f);
    const double rayleigh = lambda1_rayleigh(f, rayleigh_n);
    const double delta = delta_frac * g.scale;
    rep.results["A"] = g.A;
    rep.results["B"] = g.B;
    rep.results["twist"] = g.twist;
    rep.results["volume"] = g.volume;
    rep.results["diameter"] = g.diameter;
    rep.results["lambda1"] = g.lambda1;
    rep.results["lambda1_rayleigh"] = rayleigh;
    rep.results["kappa_nc"] = g.kappa_nc;
    rep.results["scale"] = g.scale;
    const double expected_volume = kTwoPi * std::sqrt(2.0) * ff.m1 * f.params.alpha;
    rep.check_le("volume_closed_form", rel_err(g.volume, expected_volume), 1e-12);
    rep.check_le("lambda1_rayleigh", rel_err(rayleigh, g.lambda1), 0.02);
    rep.check_true("noncollapsed_at_delta", noncollapse_check(f, delta));
}

void slag_pi_decay(Report& rep, const ModelFlags& mf, const FiberFlags& ff, std::vector<double> ells) {
    const ModelParams p = mf.params();
    if (ells.empty()) ells = default_ells();
    rep.inputs = mf.echo();
    rep.inputs["m1"] = ff.m1;
    rep.inputs["m2"] = ff.m2;
    rep.inputs["t"] = ff.t;
    rep.inputs["ells"] = ells;
    double worst_h = 0.0;
    for (double ell : ells) {
        const SecondFundamentalForm s = second_fundamental_form(model_fiber(p, ff.m1, ff.m2, ell, ff.t), 0.2, 1.1);
        worst_h = std::max(worst_h, s.mean_curvature / std::max(1.0, s.norm));
        rep.curve.push_back({radial_distance(p, ell), s.norm});
    }
    const DecayFit f = fit_decay(rep.curve, DecayModel::Power, 0.0);
    rep.results["fit"] = fit_json(f);
    rep.results["max_mean_curvature"] = worst_h;
    rep.check_in("pi_exponent", f.exponent, -1.15, -0.85);
    if (p.kappa_is_one()) rep.check_le("minimal", worst_h, 1e-8);
}

// ---------------------------------------------------------------------------
// hkrot, mirror, dims

void hkrot(Report& rep, int k, const std::string& tau_text, int verify_grid, double ell, double y2) {
    const CalabiModel m = CalabiModel::from_input(k, parse_complex(tau_text));
    if (verify_grid < 1) throw ValidationError("--verify-grid must be positive");
    rep.inputs = {{"k", k}, {"tau", tau_text}, {"verify_grid", verify_grid}, {"ell", ell}, {"y2", y2}};
    const Rotation r = rotate(m);
    rep.results["eps"] = r.params.eps;
    rep.results["alpha"] = r.params.alpha;
    rep.results["b0"] = r.params.b0;
    if (r.params.b0_exact) rep.results["b0_exact"] = r.params.b0_exact->str();
    rep.results["classification"] = classification_json(r.cls);
    const double rot = verify_rotation_grid(m, 3, verify_grid);
    const LatticeRelations lr = lattice_relations(m, ell, y2);
    const double lat = std::max(std::abs(lr.psi_loop - lr.expected_psi), std::abs(lr.fiber_loop - lr.expected_fiber));
    const double gh = gibbons_hawking_check(m, CalabiPoint{ell, 0.4, 0.3, y2});
    rep.results["rotation_residual"] = rot;
    rep.results["lattice_psi_loop"] = cplx_json(lr.psi_loop);
    rep.results["lattice_fiber_loop"] = cplx_json(lr.fiber_loop);
    rep.check_le("rotation_residual", rot, 1e-8);
    rep.check_le("lattice_relations", lat, 1e-10);
    rep.check_le("gibbons_hawking", gh, 1e-12);
}

void mirror(Report& rep, const std::string& tau_text, int m, int k, int n) {
    const ComplexInput tau = parse_complex(tau_text);
    rep.inputs = {{"tau", tau_text}, {"m", m}, {"k", k}, {"n", n}};
    const DualityReport d = duality_report(tau, m, k, n);
    const MirrorData& md = d.data;
    rep.results["alpha_q"] = md.alpha_q;
    rep.results["v_check"] = md.v_check;
    rep.results["v_mirror"] = md.v_mirror;
    rep.results["product"] = md.product();
    if (md.exact) {
        rep.results["exact"] = {{"alpha_q", md.exact->alpha_q.str()},
                                {"v_check", md.exact->v_check.str()},
                                {"v_mirror", md.exact->v_mirror.str()},
                                {"product", md.exact->product.str()}};
    }
    rep.results["classification"] = classification_json(md.sf_class);
    rep.results["rotated"] = {{"eps", d.rotated.eps}, {"alpha", d.rotated.alpha}, {"b0", d.rotated.b0}};
    rep.results["kahler_moduli_dim"] = md.kahler_moduli_dim;
    rep.results["b_field_dim"] = md.b_field.size();
    json rows = json::array();
    for (const PairingRow& row : d.pairings) {
        rows.push_back({{"cycle", row.cycle}, {"quadrature", row.quadrature}, {"closed_form", row.closed_form}});
    }
    rep.results["pairings"] = rows;
    if (d.lagrangian_cycle) {
        rep.results["lagrangian_cycle"] = {d.lagrangian_cycle->m1, d.lagrangian_cycle->m2};
    }

    if (md.exact) {
        rep.check_true("volume_product_exact", md.exact->product == Rational(1));
    }
    rep.check_le("volume_product", std::abs(md.product() - 1.0), 1e-12);
    const ModuliDims dims = moduli_dims(k);
    rep.check_true("kahler_moduli_dim", md.kahler_moduli_dim == dims.m_k);
    rep.check_true("b_field_dim", static_cast<int>(md.b_field.size()) == dims.h2);
    for (const PairingRow& row : d.pairings) {
        if (std::abs(row.closed_form) <= 1e-12 * d.rotated.eps) {
            rep.check_le("lagrangian_" + row.cycle, std::abs(row.quadrature), 1e-10);
        } else {
            rep.check_le("pairing_" + row.cycle, rel_err(row.quadrature, row.closed_form), 1e-8);
        }
    }
}

void dims(Report& rep, int k) {
    rep.inputs = {{"k", k}};
    const ModuliDims d = moduli_dims(k);
    rep.results["dim_V_m"] = d.v_m;
    rep.results["dim_H2"] = d.h2;
    rep.results["dim_M_K"] = d.m_k;
    rep.check_true("dim_V_m", d.v_m == 10 - k);
    rep.check_true("dim_H2", d.h2 == 11 - k);
    rep.check_true("dim_M_K", d.m_k == 10 - k);
}

// ---------------------------------------------------------------------------
// glue

void glue_potential(Report& rep, const GlueFlags& gf, double rho) {
    const GlueConfig cfg = gf.config();
    rep.inputs = gf.echo();
    rep.inputs["rho"] = rho;
    const cplx z(rho, 0.0);
    const HarmonicMatch v = harmonic_match_u(cfg.params, cfg.r, cfg.s);
    const double u_in = potential_u(cfg.params, cplx(cfg.r, 0.0));
    const double u_out = potential_u(cfg.params, cplx(cfg.r + 3.0 * cfg.s, 0.0));
    const double cut = cutoff_bound(cfg.r, cfg.s);
    rep.results["u"] = potential_u(cfg.params, z);
    rep.results["u_zzbar"] = potential_u_zzbar(cfg.params, z);
    rep.results["harmonic_A"] = v.A;
    rep.results["harmonic_B"] = v.B;
    rep.results["harmonic_match_ratio"] = harmonic_match_ratio(cfg.params, cfg.r, cfg.s);
    rep.results["cutoff_bound"] = cut;
    rep.results["c0"] = cfg.c0;
    rep.results["c0_rs"] = cfg.c0_rs;
    const double match = std::max(std::abs(v(-std::log(cfg.r)) - u_in) / std::abs(u_in),
                                  std::abs(v(-std::log(cfg.r + 3.0 * cfg.s)) - u_out) / std::abs(u_out));
    rep.check_le("harmonic_boundary_match", match, 1e-12);
    rep.check_le("cutoff_times_r", cut * cfg.r, 1.0);
    rep.check_le("cutoff_times_s_over_r", cut * cfg.s / cfg.r, 1.0);
}

void glue_positivity(Report& rep, const GlueFlags& gf, double alpha, double t, double t_factor, int n_radial) {
    const GlueConfig cfg = gf.config();
    const double thr = positivity_threshold(cfg, alpha);
    const double tt = t > 0.0 ? t : t_factor * thr;
    rep.inputs = gf.echo();
    rep.inputs["alpha"] = alpha;
    rep.inputs["t"] = t;
    rep.inputs["t_factor"] = t_factor;
    rep.inputs["n_radial"] = n_radial;
    const PositivityResult pr = positivity_scan(cfg, alpha, tt, n_radial);
    rep.results["t"] = tt;
    rep.results["threshold"] = pr.threshold;
    rep.results["margin"] = pr.margin;
    rep.results["c0"] = cfg.c0;
    rep.results["c0_rs"] = cfg.c0_rs;
    rep.check_ge("positivity_margin", pr.margin, 0.0);
}

void glue_solve_alpha(Report& rep, const GlueFlags& gf, double tprime) {
    const GlueConfig cfg = gf.config();
    rep.inputs = gf.echo();
    rep.inputs["tprime"] = tprime;
    const AlphaSolution sol = solve_alpha(cfg, tprime);
    GlueConfig fine = cfg;
    fine.quad_nodes = 2 * cfg.quad_nodes;
    const AlphaSolution sol2 = solve_alpha(fine, tprime);
    const double drift = std::abs(sol2.alpha - sol.alpha) / sol.alpha;
    rep.results["alpha"] = sol.alpha;
    rep.results["model_alpha"] = glue_to_model_alpha(sol.alpha);
    rep.results["t"] = sol.t;
    rep.results["bracket"] = {sol.bracket_lo, sol.bracket_hi};
    rep.results["i_at_bracket"] = {sol.i_lo, sol.i_hi};
    rep.results["slope_below"] = sol.slope_below;
    rep.results["slope_above"] = sol.slope_above;
    rep.results["alpha_refined"] = sol2.alpha;
    rep.check_true("sign_bracket", sol.i_lo > 0.0 && sol.i_hi < 0.0);
    rep.check_true("unique_root", sol.unique);
    rep.check_le("refinement_stability", drift, 1e-6);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of semi-flat, special Lagrangian and gluing constructions near I_k fibres"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string csv_path;
    bool no_timestamp = false;
    int threads = 0;
    app.add_option("--csv", csv_path, "write the decay curve as CSV (columns r,value)");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from the report");
    app.add_option("--threads", threads, "worker threads (default: SYZLAB_THREADS or hardware)");

    Report rep;
    std::function<void()> action;

    // semiflat
    CLI::App* sf = app.add_subcommand("semiflat", "semi-flat metric checks");
    sf->require_subcommand(1);
    ModelFlags sf_model;
    std::string sf_x = "0";
    std::string sf_z = "0.5";
    int sf_branch = 0;
    CLI::App* sf_eval = sf->add_subcommand("eval", "evaluate the form and the Monge-Ampere residual at a point");
    sf_model.add(sf_eval);
    sf_eval->add_option("--x", sf_x, "fibre coordinate x as a+bi")->capture_default_str();
    sf_eval->add_option("--z", sf_z, "base coordinate z as a+bi")->capture_default_str();
    sf_eval->add_option("--branch", sf_branch, "branch of log z")->capture_default_str();
    sf_eval->callback([&] { action = [&] { semiflat_eval(rep, sf_model, sf_x, sf_z, sf_branch); }; });

    int sf_grid = 32;
    CLI::App* sf_res = sf->add_subcommand("residual", "Monge-Ampere residual over a grid");
    sf_model.add(sf_res);
    sf_res->add_option("--grid", sf_grid, "grid size per direction")->capture_default_str();
    sf_res->callback([&] { action = [&] { semiflat_residual(rep, sf_model, sf_grid); }; });

    int pair_m1 = 1;
    int pair_m2 = 0;
    double pair_level = 0.5;
    int pair_n = 64;
    CLI::App* sf_pair = sf->add_subcommand("pair", "pair the semi-flat class with F and C(m1,m2)");
    sf_model.add(sf_pair);
    sf_pair->add_option("--m1", pair_m1, "cycle coefficient m1")->capture_default_str();
    sf_pair->add_option("--m2", pair_m2, "cycle coefficient m2")->capture_default_str();
    sf_pair->add_option("--level", pair_level, "radius |z| of the base circle")->capture_default_str();
    sf_pair->add_option("--n", pair_n, "quadrature grid size")->capture_default_str();
    sf_pair->callback([&] { action = [&] { semiflat_pair(rep, sf_model, pair_m1, pair_m2, pair_level, pair_n); }; });

    std::vector<std::string> sec_h;
    double sec_a = 0.0;
    double sec_b = 0.0;
    std::vector<double> ells;
    CLI::App* sf_cls = sf->add_subcommand("classify-translation", "decay class of a translation pullback");
    sf_model.add(sf_cls);
    sf_cls->add_option("--h-term", sec_h, "Laurent term n:coefficient of h, repeatable")->delimiter(',');
    sf_cls->add_option("--a", sec_a, "coefficient of log z")->capture_default_str();
    sf_cls->add_option("--b", sec_b, "coefficient of (log z)^2")->capture_default_str();
    sf_cls->add_option("--ells", ells, "sample values of l, comma separated")->delimiter(',');
    sf_cls->callback([&] { action = [&] { semiflat_classify(rep, sf_model, sec_h, sec_a, sec_b, ells); }; });

    CLI::App* sf_curv = sf->add_subcommand("curvature", "curvature decay along the base");
    sf_model.add(sf_curv);
    sf_curv->add_option("--ells", ells, "sample values of l, comma separated")->delimiter(',');
    sf_curv->callback([&] { action = [&] { semiflat_curvature(rep, sf_model, ells); }; });

    // slag
    CLI::App* sl = app.add_subcommand("slag", "model special Lagrangian fibres");
    sl->require_subcommand(1);
    ModelFlags sl_model;
    FiberFlags fib;
    int sl_n = 16;
    CLI::App* sl_check = sl->add_subcommand("check", "Lagrangian and phase defects of a model fibre");
    sl_model.add(sl_check);
    fib.add(sl_check);
    sl_check->add_option("--n", sl_n, "grid size on the cycle")->capture_default_str();
    sl_check->callback([&] { action = [&] { slag_check(rep, sl_model, fib, sl_n); }; });

    int rayleigh_n = 64;
    double delta_frac = 0.5;
    CLI::App* sl_geom = sl->add_subcommand("geometry", "induced flat metric, volume, lambda_1, non-collapsing");
    sl_model.add(sl_geom);
    fib.add(sl_geom);
    sl_geom->add_option("--rayleigh-n", rayleigh_n, "grid size of the Rayleigh solve")->capture_default_str();
    sl_geom->add_option("--delta-frac", delta_frac, "ball radius as a fraction of the scale")->capture_default_str();
    sl_geom->callback([&] { action = [&] { slag_geometry(rep, sl_model, fib, rayleigh_n, delta_frac); }; });

    CLI::App* sl_pi = sl->add_subcommand("pi-decay", "decay of the second fundamental form");
    sl_model.add(sl_pi);
    sl_pi->add_option("--m1", fib.m1, "cycle coefficient m1")->capture_default_str();
    sl_pi->add_option("--m2", fib.m2, "cycle coefficient m2")->capture_default_str();
    sl_pi->add_option("--t", fib.t, "offset Im x = t")->capture_default_str();
    sl_pi->add_option("--ells", ells, "sample values of l, comma separated")->delimiter(',');
    sl_pi->callback([&] { action = [&] { slag_pi_decay(rep, sl_model, fib, ells); }; });

    // hkrot
    int hk_k = 1;
    std::string hk_tau = "0+1i";
    int hk_grid = 5;
    double hk_ell = 2.0;
    double hk_y2 = 0.3;
    CLI::App* hk = app.add_subcommand("hkrot", "hyperKaehler rotation of the Calabi model");
    hk->add_option("--k", hk_k, "degree of the line bundle")->capture_default_str();
    hk->add_option("--tau", hk_tau, "modulus tau as a+bi")->capture_default_str();
    hk->add_option("--verify-grid", hk_grid, "points per torus direction in the rotation check")->capture_default_str();
    hk->add_option("--ell", hk_ell, "l for the lattice relations")->capture_default_str();
    hk->add_option("--y2", hk_y2, "y2 for the lattice relations")->capture_default_str();
    hk->callback([&] { action = [&] { hkrot(rep, hk_k, hk_tau, hk_grid, hk_ell, hk_y2); }; });

    // glue
    CLI::App* gl = app.add_subcommand("glue", "gluing across the transition annulus");
    gl->require_subcommand(1);
    GlueFlags glue;
    double glue_rho = 0.05;
    CLI::App* gl_pot = gl->add_subcommand("potential", "radial potential, harmonic match and cutoff constants");
    glue.add(gl_pot);
    gl_pot->add_option("--rho", glue_rho, "radius |z| at which u is reported")->capture_default_str();
    gl_pot->callback([&] { action = [&] { glue_potential(rep, glue, glue_rho); }; });

    double glue_alpha = 2.0;
    double glue_t = 0.0;
    double glue_t_factor = 1.01;
    int glue_n_radial = 200;
    CLI::App* gl_pos = gl->add_subcommand("positivity", "positivity of the glued form");
    glue.add(gl_pos);
    gl_pos->add_option("--alpha", glue_alpha, "gluing alpha")->capture_default_str();
    gl_pos->add_option("--t", glue_t, "gluing t (default: t-factor times the threshold)");
    gl_pos->add_option("--t-factor", glue_t_factor, "multiple of the threshold when --t is absent")
        ->capture_default_str();
    gl_pos->add_option("--n-radial", glue_n_radial, "radial samples")->capture_default_str();
    gl_pos->callback(
        [&] { action = [&] { glue_positivity(rep, glue, glue_alpha, glue_t, glue_t_factor, glue_n_radial); }; });

    double tprime = 2.0;
    CLI::App* gl_solve = gl->add_subcommand("solve-alpha", "root of the mass integral in alpha");
    glue.add(gl_solve);
    gl_solve->add_option("--tprime", tprime, "t' in t = c0_rs t' + c0 |alpha - 1| sup u_zzbar")->capture_default_str();
    gl_solve->callback([&] { action = [&] { glue_solve_alpha(rep, glue, tprime); }; });

    // mirror, dims
    std::string mi_tau = "0+1i";
    int mi_m = 1;
    int mi_k = 1;
    int mi_n = 32;
    CLI::App* mi = app.add_subcommand("mirror", "mirror map and fibre-volume duality");
    mi->add_option("--tau", mi_tau, "modulus tau as a+bi")->capture_default_str();
    mi->add_option("--m", mi_m, "pairing m")->capture_default_str();
    mi->add_option("--k", mi_k, "degree k")->capture_default_str();
    mi->add_option("--n", mi_n, "quadrature grid size for the pairing table")->capture_default_str();
    mi->callback([&] { action = [&] { mirror(rep, mi_tau, mi_m, mi_k, mi_n); }; });

    int dims_k = 1;
    CLI::App* dm = app.add_subcommand("dims", "moduli dimensions");
    dm->add_option("--k", dims_k, "degree k")->capture_default_str();
    dm->callback([&] { action = [&] { dims(rep, dims_k); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (threads < 0) throw ValidationError("--threads must be non-negative");
        if (threads > 0) set_thread_count(threads);
        for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
            sub = sub->get_subcommands().front();
            rep.command += (rep.command.empty() ? "" : " ") + sub->get_name();
        }
        action();
        if (!csv_path.empty()) {
            if (rep.curve.empty()) throw ValidationError("--csv is only available for commands with a decay curve");
            write_csv(csv_path, rep.curve);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    std::cout << rep.to_json(!no_timestamp).dump(2) << "\n";
    return rep.all_pass() ? 0 : 3;
}
