#include "polystab/constructions.hpp"

#include "polystab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace polystab {
namespace {

constexpr double kGolden = 0.6180339887498949;

double golden_max(const std::function<double(double)>& f, double a, double b, int iters) {
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kGolden * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kGolden * (b - a); f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

// scan a log grid plus golden polish around the best node; returns (r*, f(r*))
std::pair<double, double> log_grid_max(const std::function<double(double)>& f, double r_lo,
                                       double r_hi, int n) {
    const double s_lo = std::log(r_lo), s_hi = std::log(r_hi);
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(s_lo + (s_hi - s_lo) * i / (n - 1));
        const double v = f(r);
        if (v > best) { best = v; best_i = i; }
    }
    const double a = std::exp(s_lo + (s_hi - s_lo) * std::max(best_i - 1, 0) / (n - 1));
    const double b = std::exp(s_lo + (s_hi - s_lo) * std::min(best_i + 1, n - 1) / (n - 1));
    double r_star = std::exp(s_lo + (s_hi - s_lo) * best_i / (n - 1));
    if (b > a) {
        const double cand = golden_max(f, a, b, 80);
        if (f(cand) > best) { r_star = cand; best = f(cand); }
    }
    return {r_star, best};
}

} // namespace

OddTailRecipe odd_tail_recipe(const Dimension& dim, const Eigen::VectorXd& head) {
    if (!dim.odd()) throw ParityError("odd_tail_recipe requires odd m");
    dim.require_supercritical("odd_tail_recipe");
    if (head.size() != dim.m - 1)
        throw ConfigError("head must carry a_0..a_{m-2}");

    const int m = dim.m;
    const double cm1 = laplace_power_coeff(m - 1, dim.N).to_double();
    const double log_lambda = std::log(hardy_lambda(dim).to_double());
    std::vector<double> inv_c(m - 1);
    for (int k = 0; k <= m - 2; ++k) inv_c[k] = 1.0 / laplace_power_coeff(k, dim.N).to_double();

    // evaluated through exp((2k+2-2m) ln r): every polynomial exponent is
    // <= -2, so the whole expression decays at infinity and dives at zero
    auto h = [&](double r) {
        const double s = std::log(r);
        double acc = 0.0;
        for (int k = 0; k <= m - 2; ++k)
            acc += head[k] * inv_c[k] * std::exp((2.0 * k + 2.0 - 2.0 * m) * s);
        acc += (2.0 * m * s - log_lambda) * std::exp((2.0 - 2.0 * m) * s);
        return cm1 * acc;
    };

    const auto [r_star, H0] = log_grid_max(h, 1e-6, 1e6, 10000);
    if (!(std::isfinite(H0)))
        throw NumericalError("envelope-gap supremum is not finite");
    if (r_star <= 1.0001e-6 || r_star >= 0.9999e6)
        throw NumericalError("envelope-gap supremum landed on the scan boundary");

    OddTailRecipe out;
    out.head = head;
    out.sup_value = H0;
    out.sup_radius = r_star;
    out.chosen_a_last = -H0;
    return out;
}

EvenTailRecipe even_tail_recipe(const Dimension& dim, const Eigen::VectorXd& head,
                                const RadialProfile& borderline, double beta0) {
    if (dim.odd()) throw ParityError("even_tail_recipe requires even m");
    dim.require_supercritical("even_tail_recipe");
    if (borderline.status == ProfileStatus::BlowUp)
        throw NumericalError("even recipe requires a global borderline profile");
    if (borderline.dim.m != dim.m || borderline.dim.N != dim.N)
        throw ConfigError("borderline profile dimension mismatch");
    if (head.size() != dim.m - 1 ||
        (borderline.a.head(dim.m - 1) - head).cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("head does not match the borderline profile");

    const int m = dim.m;
    const double cm1 = laplace_power_coeff(m - 1, dim.N).to_double();
    const double log_mu = std::log(rellich_mu(dim).to_double());

    auto g = [&](double r) {
        const double s = std::log(r);
        return cm1 * std::exp((2.0 - 2.0 * m) * s) *
                   (borderline.u(r) - log_mu + 2.0 * m * s) -
               beta0;
    };

    const double r_end = borderline.r_end();
    const auto [r_star, sup] = log_grid_max(g, std::max(1e-6, borderline.r_taylor), r_end, 10000);
    if (!std::isfinite(sup)) throw NumericalError("even-case supremum is not finite");

    EvenTailRecipe out;
    out.head = head;
    out.sup_value = sup;
    out.sup_radius = r_star;
    out.tail_value = g(0.95 * r_end);
    out.beta0_used = beta0;
    out.chosen_a_last = -sup;
    return out;
}

AlternatingConstruction alternating_construction(const Dimension& dim, IntegratorConfig base) {
    if (!dim.odd() || dim.m < 3)
        throw ParityError("alternating construction requires odd m >= 3");
    dim.require_supercritical("alternating_construction");

    const int m = dim.m;
    const double N = dim.N;
    double h_plus_1 = 1.0;
    for (int k = 1; k <= m - 3; ++k) h_plus_1 += 1.0 / laplace_power_coeff(k, dim.N).to_double();
    h_plus_1 += 1.0 / laplace_power_coeff(m - 1, dim.N).to_double();
    const double gamma0 = std::exp(h_plus_1);
    const double c_m2 = laplace_power_coeff(m - 2, dim.N).to_double();
    const double c_m = laplace_power_coeff(m, dim.N).to_double();

    double worst_sup = std::numeric_limits<double>::quiet_NaN();
    for (double beta = 1.0; beta <= std::ldexp(1.0, 40); beta *= 2.0) {
        const double xi0 = -h_plus_1 - beta / c_m2 - gamma0 / c_m;
        const double eps1 = std::min(1.0, std::exp(xi0) / (4.0 * N * N));
        const double eps = eps1;

        Problem p;
        p.dim = dim;
        p.a.resize(m);
        for (int k = 0; k <= m - 3; ++k) p.a[k] = (k % 2 == 0 ? eps : -eps);
        p.a[m - 2] = -beta;
        p.a[m - 1] = eps;

        IntegratorConfig cfg = base;
        cfg.r_max = std::max(base.r_max, IntegratorConfig::defaults_for(p).r_max);

        const RadialProfile prof = integrate(p, cfg);
        if (prof.status != ProfileStatus::Global) continue;
        const Certificate cert = pointwise_certificate(prof);
        if (!std::isfinite(worst_sup) || cert.sup_value < worst_sup)
            worst_sup = cert.sup_value;
        if (cert.passed()) {
            AlternatingConstruction out;
            out.eps = eps;
            out.beta = beta;
            out.xi0 = xi0;
            out.gamma0 = gamma0;
            out.eps1 = eps1;
            out.h_beta = -beta + std::exp(xi0) / (2.0 * N);
            out.problem = p;
            out.profile = prof;
            out.certificate = cert;
            return out;
        }
    }
    throw NumericalError("alternating construction found no certified beta <= 2^40; best sup "
                         "of e^u r^{2m} was " + std::to_string(worst_sup));
}

IteratedBoundsReport iterated_bounds_report(const RadialProfile& profile, double tol) {
    const int m = profile.dim.m;
    if (m % 2 == 0) throw ParityError("iterated bounds require odd m");
    for (int k = 1; k < m; ++k)
        if (profile.a[k] > 0.0)
            throw ConfigError("iterated bounds require a_k <= 0 for 1 <= k <= m-1");

    const double N = profile.dim.N;
    IteratedBoundsReport rep;
    rep.all_hold = true;

    auto scan = [&](int k_label, const std::function<double(std::size_t)>& lhs,
                    const std::function<double(std::size_t)>& rhs) {
        BoundRow row;
        row.k = k_label;
        row.worst_margin = std::numeric_limits<double>::infinity();
        row.holds = true;
        for (std::size_t i = 1; i < profile.grid.size(); ++i) {
            const double L = lhs(i), R = rhs(i);
            const double margin = L - R;
            if (margin < row.worst_margin) {
                row.worst_margin = margin;
                row.worst_r = profile.grid[i];
            }
            if (margin < -tol * (1.0 + std::abs(R))) row.holds = false;
        }
        rep.all_hold = rep.all_hold && row.holds;
        return row;
    };

    for (int k = 1; k <= m - 1; ++k) {
        const int j = m - k;  // bound on -Delta^j u
        const double pk = iterated_bound_poly(k, profile.dim.N).to_double();
        rep.laplacian_bounds.push_back(scan(
            k,
            [&, j](std::size_t i) {
                const double w_j = (j % 2 == 0 ? 1.0 : -1.0) * profile.v(j, i);
                return -w_j;
            },
            [&, k, pk](std::size_t i) {
                const double r = profile.grid[i];
                return std::pow(r, 2.0 * k) * std::exp(profile.v(0, i)) / pk;
            }));
    }

    const double pm = iterated_bound_poly(m, profile.dim.N).to_double();
    rep.final_bound = scan(
        m, [&](std::size_t i) { return pm / std::pow(profile.grid[i], 2.0 * m); },
        [&](std::size_t i) { return std::exp(profile.v(0, i)); });

    const double pm1 = iterated_bound_poly(m - 1, profile.dim.N).to_double();
    rep.gradient_bound = scan(
        0, [&](std::size_t i) { return -profile.dv(0, i); },
        [&](std::size_t i) {
            const double r = profile.grid[i];
            return std::pow(r, 2.0 * m - 1.0) * std::exp(profile.v(0, i)) /
                   ((N + 2.0 * m - 2.0) * pm1);
        });

    return rep;
}

ComparisonReport comparison_check(const Problem& pa, const Problem& pb,
                                  const IntegratorConfig& cfg, double tol) {
    pa.validate();
    pb.validate();
    if (pa.dim.m != pb.dim.m || pa.dim.N != pb.dim.N)
        throw ConfigError("comparison requires matching (m, N)");
    if (((pa.a - pb.a).array() < 0.0).any())
        throw ConfigError("comparison requires a_k(A) >= a_k(B) for all k");
    const RadialProfile A = integrate(pa, cfg);
    const RadialProfile B = integrate(pb, cfg);
    return compare_profiles(A, B, tol);
}

} // namespace polystab
