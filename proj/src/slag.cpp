#include "syzlab/slag.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

using Vec2 = Eigen::Vector2d;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

MetricField metric_field(const ModelParams& p) {
    return [p](const Vec4& q) {
        return riemannian_metric(p, FiberPoint::from_y({q(2), q(3)}, {q(0), q(1)}));
    };
}

FiberPoint point_of(const Vec4& q) { return FiberPoint::from_y({q(2), q(3)}, {q(0), q(1)}); }

// Christoffel symbols Gamma^a_bc at q from fourth-order differences of g.
std::array<Mat4, 4> christoffel(const MetricField& g, const Vec4& q, const Vec4& steps) {
    std::array<Mat4, 4> dg;
    for (int c = 0; c < 4; ++c) {
        dg[c] = central_diff4(
            [&](double t) {
                Vec4 r = q;
                r(c) += t;
                return Mat4(g(r));
            },
            0.0, steps(c));
    }
    const Mat4 gi = g(q).inverse();
    std::array<Mat4, 4> gam;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                double s = 0.0;
                for (int d = 0; d < 4; ++d) {
                    s += gi(a, d) * 0.5 * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                }
                gam[a](b, c) = s;
            }
        }
    }
    return gam;
}

Vec4 contract(const std::array<Mat4, 4>& gam, const Vec4& u, const Vec4& v) {
    Vec4 out;
    for (int a = 0; a < 4; ++a) out(a) = u.dot(gam[a] * v);
    return out;
}

// Signed area of disk(0, r) intersected with triangle (0, a, b).
double disk_triangle_area(const Vec2& a, const Vec2& b, double r) {
    const Vec2 d = b - a;
    const double qa = d.squaredNorm();
    const double qb = 2.0 * a.dot(d);
    const double qc = a.squaredNorm() - r * r;
    std::vector<double> ts{0.0};
    const double disc = qb * qb - 4.0 * qa * qc;
    if (qa > 0.0 && disc > 0.0) {
        const double sq = std::sqrt(disc);
        for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    ts.push_back(1.0);
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const Vec2 p = a + ts[i] * d;
        const Vec2 q = a + ts[i + 1] * d;
        const Vec2 mid = 0.5 * (p + q);
        if (mid.squaredNorm() <= r * r) {
            area += 0.5 * cross2(p, q);
        } else {
            area += 0.5 * r * r * std::atan2(cross2(p, q), p.dot(q));
        }
    }
    return area;
}

// Voronoi cell of the lattice around the origin, counter-clockwise.
std::vector<Vec2> voronoi_cell(const FlatLattice& red) {
    const double big = 4.0 * (red.b1.norm() + red.b2.norm());
    std::vector<Vec2> poly{{-big, -big}, {big, -big}, {big, big}, {-big, big}};
    const Vec2 rel[] = {red.b1, -red.b1, red.b2, -red.b2, red.b1 - red.b2, red.b2 - red.b1,
                        red.b1 + red.b2, -red.b1 - red.b2};
    for (const Vec2& v : rel) {
        const double c = 0.5 * v.squaredNorm();
        std::vector<Vec2> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2& p = poly[i];
            const Vec2& q = poly[(i + 1) % poly.size()];
            const double fp = p.dot(v) - c;
            const double fq = q.dot(v) - c;
            if (fp <= 0.0) out.push_back(p);
            if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
                out.push_back(p + (fp / (fp - fq)) * (q - p));
            }
        }
        poly = out;
    }
    return poly;
}

}  // namespace

void ModelFiber::validate() const {
    cycle.validate();
    params.validate();
    if (cycle.kind != CycleKind::QuasiBad) {
        throw ValidationError("model fibre must be a quasi-bad cycle");
    }
    if (!std::isfinite(t)) throw ValidationError("fibre offset t must be finite");
}

Vec4 ModelFiber::embed_y(double t1, double t2) const {
    const double slope = static_cast<double>(cycle.m2) / cycle.m1 * (params.k * ell() / kTwoPi) / kTwoPi;
    return {ell(), -t2, t1, t + slope * t2};
}

std::pair<Vec4, Vec4> ModelFiber::tangents_y() const {
    const double slope = static_cast<double>(cycle.m2) / cycle.m1 * (params.k * ell() / kTwoPi) / kTwoPi;
    return {Vec4(0.0, 0.0, 1.0, 0.0), Vec4(0.0, -1.0, 0.0, slope)};
}

ModelFiber model_fiber(const ModelParams& p, int m1, int m2, double ell, double t) {
    if (!(ell > 0.0)) throw ValidationError("model fibre needs l > 0");
    ModelFiber f{CycleSpec::quasi_bad(m1, m2, std::exp(-ell)), t, p};
    f.validate();
    return f;
}

double FlatLattice::covolume() const { return std::abs(cross2(b1, b2)); }

FlatLattice FlatLattice::reduced() const {
    Vec2 u = b1;
    Vec2 v = b2;
    if (!(std::abs(cross2(u, v)) > 0.0)) throw ValidationError("degenerate lattice");
    for (int it = 0; it < 1000; ++it) {
        if (u.squaredNorm() > v.squaredNorm()) std::swap(u, v);
        const double mu = std::round(u.dot(v) / u.squaredNorm());
        if (mu == 0.0) break;
        v -= mu * u;
    }
    if (u.dot(v) < 0.0) v = -v;
    return {u, v};
}

double FlatLattice::lambda1() const {
    Eigen::Matrix2d m;
    m.col(0) = b1;
    m.col(1) = b2;
    const Eigen::Matrix2d dual = m.inverse().transpose();
    FlatLattice d{dual.col(0), dual.col(1)};
    return 4.0 * kPi * kPi * d.reduced().b1.squaredNorm();
}

double FlatLattice::systole() const { return reduced().b1.norm(); }

double FlatLattice::diameter() const {
    const FlatLattice r = reduced();
    const double area = 0.5 * r.covolume();
    return r.b1.norm() * r.b2.norm() * (r.b1 - r.b2).norm() / (4.0 * area);
}

double FlatLattice::ball_area(double delta) const {
    if (!(delta >= 0.0)) throw ValidationError("ball radius must be non-negative");
    const std::vector<Vec2> cell = voronoi_cell(reduced());
    double area = 0.0;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        area += disk_triangle_area(cell[i], cell[(i + 1) % cell.size()], delta);
    }
    return std::abs(area);
}

Eigen::Matrix2d induced_metric(const ModelFiber& f, double t1, double t2) {
    f.validate();
    const Mat4 g = riemannian_metric(f.params, point_of(f.embed_y(t1, t2)));
    auto [d1, d2] = f.tangents_y();
    Eigen::Matrix2d h;
    h(0, 0) = d1.dot(g * d1);
    h(0, 1) = d1.dot(g * d2);
    h(1, 0) = h(0, 1);
    h(1, 1) = d2.dot(g * d2);
    return h;
}

SpecialDefect check_special(const ModelFiber& f, int n) {
    f.validate();
    if (n < 1) throw ValidationError("check_special needs a positive grid size");
    auto [d1, d2] = f.tangents_y();
    const double period = kTwoPi * f.cycle.m1;
    std::vector<SpecialDefect> vals(static_cast<std::size_t>(n) * n);
    parallel_for(vals.size(), [&](std::size_t idx) {
        const double t1 = static_cast<double>(idx / n) / n;
        const double t2 = period * static_cast<double>(idx % n) / n;
        const FiberPoint pt = point_of(f.embed_y(t1, t2));
        const Mat4 m = sf_form_y(f.params, pt).M;
        const CMat4 om = holomorphic_volume(f.params, pt, Chart::YChart);
        const Eigen::Matrix2d h = induced_metric(f, t1, t2);
        const double area = std::sqrt(h.determinant());
        const cplx ov = (d1.cast<cplx>().transpose() * om * d2.cast<cplx>())(0, 0);
        const cplx rotated = cplx(0.0, -1.0) * ov;
        vals[idx] = {std::abs(d1.dot(m * d2)) / area, std::abs(rotated.imag()) / area};
    });
    SpecialDefect out;
    for (const auto& v : vals) {
        out.omega = std::max(out.omega, v.omega);
        out.phase = std::max(out.phase, v.phase);
    }
    return out;
}

FiberGeometry fiber_geometry(const ModelFiber& f, int samples) {
    f.validate();
    if (samples < 4) throw ValidationError("fiber_geometry needs at least 4 samples");
    const double period = kTwoPi * f.cycle.m1;
    if (check_special(f, 4).omega > 1e-8) {
        throw PreconditionError("cycle is not Lagrangian for this b0 (need 2 b0 / k = -m2 / m1)");
    }
    const Eigen::Matrix2d h0 = induced_metric(f, 0.0, 0.0);
    const double b = h0(0, 0);
    const double det0 = h0.determinant();
    for (int j = 0; j < samples; ++j) {
        for (double t1 : {0.0, 0.37}) {
            const Eigen::Matrix2d h = induced_metric(f, t1, period * j / samples);
            if (std::abs(h(0, 0) - b) > 1e-9 * b || std::abs(h.determinant() - det0) > 1e-9 * det0) {
                throw PreconditionError(
                    "induced metric is not a flat model metric (b0 must match the cycle and kappa = 1)");
            }
        }
    }
    // Remove the shear: s1 = t1 + int_0^t2 g12 / g11.
    GaussRule rule = gauss_legendre(16, 0.0, period);
    double twist = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        twist += rule.w[i] * induced_metric(f, 0.0, rule.x[i])(0, 1) / b;
    }
    FiberGeometry g;
    g.B = b;
    g.A = det0 / b;
    g.twist = twist;
    g.lattice = {Vec2(std::sqrt(g.B), 0.0), Vec2(std::sqrt(g.B) * twist, std::sqrt(g.A) * period)};
    g.volume = g.lattice.covolume();
    g.diameter = g.lattice.diameter();
    g.lambda1 = g.lattice.lambda1();
    g.kappa_nc = std::sqrt(2.0);
    g.scale = std::sqrt(g.B);
    return g;
}

SecondFundamentalForm second_fundamental_form(const ModelFiber& f, double t1, double t2,
                                              SffOptions opt) {
    f.validate();
    const Vec4 q = f.embed_y(t1, t2);
    const MetricField gf = metric_field(f.params);
    const Mat4 g = gf(q);
    const Vec4 steps(opt.rel_step_ell * q(0), opt.step_other, opt.step_other, opt.step_other);
    const auto gam = christoffel(gf, q, steps);
    auto [v1, v2] = f.tangents_y();
    const Vec4 v[2] = {v1, v2};
    Eigen::Matrix2d h;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) h(a, b) = v[a].dot(g * v[b]);
    }
    const double det = h.determinant();
    if (!(det > 1e-300) || !std::isfinite(det)) {
        throw NumericalFailure("second_fundamental_form: degenerate tangent frame");
    }
    const Eigen::Matrix2d hi = h.inverse();
    // The embedding is affine in (t1, t2), so nabla_a d_b = Gamma(d_a, d_b).
    auto normal = [&](const Vec4& x) {
        Vec4 out = x;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) out -= hi(a, b) * v[a].dot(g * x) * v[b];
        }
        return out;
    };
    Vec4 pi[2][2];
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) pi[a][b] = normal(contract(gam, v[a], v[b]));
    }
    double n2 = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    n2 += hi(a, c) * hi(b, d) * pi[a][b].dot(g * pi[c][d]);
                }
            }
        }
    }
    Vec4 mean = Vec4::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) mean += hi(a, b) * pi[a][b];
    }
    SecondFundamentalForm out;
    out.norm = std::sqrt(std::max(0.0, n2));
    out.mean_curvature = std::sqrt(std::max(0.0, mean.dot(g * mean)));
    out.pi = {pi[0][0], pi[0][1], pi[1][1]};
    out.induced = h;
    return out;
}

std::pair<double, double> gauss_check(const ModelFiber& f, double t1, double t2) {
    const SecondFundamentalForm s = second_fundamental_form(f, t1, t2);
    const Vec4 q = f.embed_y(t1, t2);
    const MetricField gf = metric_field(f.params);
    const Mat4 g = gf(q);
    const Vec4 steps(0.01 * q(0), 0.01, 0.01, 0.01);
    const auto r = riemann_lowered(gf, q, steps);
    auto [v1, v2] = f.tangents_y();
    // Orthonormal tangent frame e = v E.
    const double n1 = std::sqrt(s.induced(0, 0));
    const Eigen::Vector2d c1(1.0 / n1, 0.0);
    const double proj = s.induced(0, 1) / s.induced(0, 0);
    const double n2 = std::sqrt(s.induced(1, 1) - proj * s.induced(0, 1));
    const Eigen::Vector2d c2(-proj / n2, 1.0 / n2);
    const Vec4 e1 = c1(0) * v1 + c1(1) * v2;
    const Vec4 e2 = c2(0) * v1 + c2(1) * v2;
    double k_amb = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    k_amb += r[a * 64 + b * 16 + c * 4 + d] * e1(a) * e2(b) * e1(c) * e2(d);
                }
            }
        }
    }
    auto pi_of = [&](const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
        return Vec4(x(0) * y(0) * s.pi[0] + (x(0) * y(1) + x(1) * y(0)) * s.pi[1] +
                    x(1) * y(1) * s.pi[2]);
    };
    const Vec4 p11 = pi_of(c1, c1);
    const Vec4 p12 = pi_of(c1, c2);
    const Vec4 p22 = pi_of(c2, c2);
    const double rhs = p11.dot(g * p22) - p12.dot(g * p12);
    return {k_amb, rhs};
}

bool noncollapse_on_lattice(const FlatLattice& lat, double delta, double kappa) {
    if (!(delta > 0.0)) throw ValidationError("non-collapsing radius must be positive");
    return lat.ball_area(delta) >= kappa * delta * delta * (1.0 - 1e-12);
}

bool noncollapse_check(const ModelFiber& f, double delta) {
    const FiberGeometry g = fiber_geometry(f);
    if (!(delta > 0.0) || delta > g.scale * (1.0 + 1e-12)) {
        throw ValidationError("non-collapsing radius must lie in (0, " + std::to_string(g.scale) + "]");
    }
    return noncollapse_on_lattice(g.lattice, delta, g.kappa_nc);
}

double lambda1_rayleigh(const ModelFiber& f, int n) {
    f.validate();
    if (n < 8) throw ValidationError("lambda1_rayleigh needs n >= 8");
    const double period = kTwoPi * f.cycle.m1;
    const double h1 = 1.0 / n;
    const double h2 = period / n;
    const int size = n * n;
    auto id = [n](int i, int j) { return ((i + n) % n) * n + ((j + n) % n); };

    std::vector<Eigen::Matrix2d> cell_ginv(size);
    std::vector<double> cell_vol(size);
    std::vector<double> node_vol(size);
    parallel_for(static_cast<std::size_t>(size), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / n;
        const int j = static_cast<int>(idx) % n;
        const Eigen::Matrix2d hc = induced_metric(f, (i + 0.5) * h1, (j + 0.5) * h2);
        cell_ginv[idx] = hc.inverse();
        cell_vol[idx] = std::sqrt(hc.determinant()) * h1 * h2;
        node_vol[idx] = std::sqrt(induced_metric(f, i * h1, j * h2).determinant()) * h1 * h2;
    });

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(size) * 16);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int c = i * n + j;
            const int corner[4] = {id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)};
            Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
            // Average of the four one-sided gradient stencils of the cell.
            for (int jj = 0; jj < 2; ++jj) {
                for (int ii = 0; ii < 2; ++ii) {
                    Eigen::Matrix<double, 4, 2> d = Eigen::Matrix<double, 4, 2>::Zero();
                    d(2 * jj, 0) -= 1.0 / h1;
                    d(2 * jj + 1, 0) += 1.0 / h1;
                    d(ii, 1) -= 1.0 / h2;
                    d(ii + 2, 1) += 1.0 / h2;
                    local += 0.25 * d * cell_ginv[c] * d.transpose();
                }
            }
            local *= cell_vol[c];
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) trip.emplace_back(corner[a], corner[b], local(a, b));
            }
        }
    }
    Eigen::SparseMatrix<double> k(size, size);
    k.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd mass(size);
    for (int i = 0; i < size; ++i) mass(i) = node_vol[i];

    const double shift = 1e-6 * k.diagonal().sum() / mass.sum();
    Eigen::SparseMatrix<double> s = k;
    for (int i = 0; i < size; ++i) s.coeffRef(i, i) += shift * mass(i);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(s);
    if (solver.info() != Eigen::Success) throw NumericalFailure("lambda1_rayleigh: factorization failed");

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd u(size);
    for (int i = 0; i < size; ++i) u(i) = uni(rng);
    const double total_mass = mass.sum();
    auto deflate = [&](Eigen::VectorXd& x) {
        x.array() -= mass.dot(x) / total_mass;
        x /= std::sqrt(x.dot(mass.cwiseProduct(x)));
    };
    deflate(u);
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
        Eigen::VectorXd w = solver.solve(mass.cwiseProduct(u));
        deflate(w);
        u = w;
        const double next = u.dot(k * u) / u.dot(mass.cwiseProduct(u));
        if (it > 5 && std::abs(next - lam) <= 1e-13 * std::abs(next)) {
            lam = next;
            break;
        }
        lam = next;
    }
    if (!std::isfinite(lam) || !(lam > 0.0)) throw NumericalFailure("lambda1_rayleigh: no positive eigenvalue");
    return lam;
}

}  // namespace syz
