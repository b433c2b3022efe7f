#include "syzlab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

std::atomic<int> g_threads{0};

int env_threads() {
    const char* v = std::getenv("SYZLAB_THREADS");
    if (v == nullptr) return 0;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end == v || n <= 0) return 0;
    return static_cast<int>(std::min<long>(n, 256));
}

template <class T>
T pairwise(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

void set_thread_count(int n) { g_threads.store(std::max(0, n)); }

int thread_count() {
    int n = g_threads.load();
    if (n > 0) return n;
    n = env_threads();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::size_t workers = static_cast<std::size_t>(thread_count());
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = w * block;
        std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

double pairwise_sum(std::span<const double> v) { return pairwise(v); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise(v); }

void Grid2::validate() const {
    if (n1 < 4 || n2 < 4) {
        throw ValidationError("grid needs at least 4 nodes per direction, got " +
                              std::to_string(n1) + "x" + std::to_string(n2));
    }
    if (!(d1.hi > d1.lo) || !(d2.hi > d2.lo)) {
        throw ValidationError("grid intervals must have positive length");
    }
}

double Grid2::node1(int i) const {
    double h = (d1.hi - d1.lo) / n1;
    return d1.periodic ? d1.lo + h * i : d1.lo + h * (i + 0.5);
}

double Grid2::node2(int j) const {
    double h = (d2.hi - d2.lo) / n2;
    return d2.periodic ? d2.lo + h * j : d2.lo + h * (j + 0.5);
}

double Grid2::cell_area() const {
    return (d1.hi - d1.lo) / n1 * (d2.hi - d2.lo) / n2;
}

cplx quad_periodic(const std::function<cplx(double, double)>& f, const Grid2& grid) {
    grid.validate();
    if (!grid.d1.periodic || !grid.d2.periodic) {
        throw ValidationError("quad_periodic requires both directions periodic");
    }
    std::size_t n = static_cast<std::size_t>(grid.n1) * grid.n2;
    std::vector<cplx> vals(n);
    parallel_for(n, [&](std::size_t idx) {
        int i = static_cast<int>(idx / grid.n2);
        int j = static_cast<int>(idx % grid.n2);
        vals[idx] = f(grid.node1(i), grid.node2(j));
    });
    for (const cplx& v : vals) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalFailure("quad_periodic: non-finite integrand sample");
        }
    }
    return pairwise_sum(std::span<const cplx>(vals)) * grid.cell_area();
}

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ValidationError("gauss_legendre needs n >= 1");
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.x[i] = mid - half * z;
        rule.x[n - 1 - i] = mid + half * z;
        rule.w[i] = half * w;
        rule.w[n - 1 - i] = half * w;
    }
    return rule;
}

DecayFit fit_decay(std::span<const DecaySample> samples, DecayModel model,
                   double discard_fraction) {
    if (samples.size() < 3) {
        throw ValidationError("fit_decay needs at least 3 samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.r > 0.0) || !(s.value > 0.0) || !std::isfinite(s.value) ||
            !std::isfinite(s.r)) {
            throw ValidationError("fit_decay needs positive finite radii and values");
        }
        if (i > 0 && !(s.r > samples[i - 1].r)) {
            throw ValidationError("fit_decay needs strictly increasing radii");
        }
    }
    std::size_t n = samples.size();
    std::size_t drop = static_cast<std::size_t>(std::floor(discard_fraction * n));
    drop = std::min(drop, n - 3);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = drop; i < n; ++i) {
        double r = samples[i].r;
        xs.push_back(model == DecayModel::Power ? std::log(r) : std::cbrt(r * r));
        ys.push_back(std::log(samples[i].value));
    }
    double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    DecayFit fit;
    fit.n_samples = static_cast<int>(xs.size());
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

double find_root_linear(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (a > b) std::swap(a, b);
    double fa = f(a);
    double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw NumericalFailure("find_root_linear: non-finite value at bracket end");
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        throw ValidationError("find_root_linear: no sign change on the bracket");
    }
    const double eps = std::numeric_limits<double>::epsilon();

    double x = (a * fb - b * fa) / (fb - fa);
    double fx = f(x);
    if (std::abs(fx) <= 8.0 * eps * std::max(std::abs(fa), std::abs(fb))) return x;

    double lo = a, hi = b, flo = fa, fhi = fb;
    int last = 0;
    for (int it = 0; it < 500; ++it) {
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
            if (last == -1) fhi *= 0.5;
            last = -1;
        } else {
            hi = x;
            fhi = fx;
            if (last == 1) flo *= 0.5;
            last = 1;
        }
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)) + 1e-300) {
            return 0.5 * (lo + hi);
        }
        x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        fx = f(x);
        if (!std::isfinite(fx)) {
            throw NumericalFailure("find_root_linear: non-finite value inside bracket");
        }
    }
    throw NumericalFailure("find_root_linear: no convergence");
}

double sym_min_eig(const Mat4& m, double sym_tol) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) {
        throw ValidationError("sym_min_eig: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool herm_pos(const CMat2& h, double herm_tol) {
    double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale) {
        throw ValidationError("herm_pos: matrix is not Hermitian");
    }
    double tr = h(0, 0).real() + h(1, 1).real();
    double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
    return tr > 0.0 && det > 0.0;
}

double diff4(const std::function<double(double)>& f, double x, double h) {
    return central_diff4(f, x, h);
}

}  // namespace syz
