#include "polystab/ivp.hpp"

#include "polystab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace polystab {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
// Continuous-extension weights.
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

// y = (v_0, v_0', ..., v_{m-1}, v_{m-1}'):
//   v_k' given, v_k'' = -(N-1)/r v_k' - v_{k+1},  v_m := e^{v_0}.
void rhs(const Dimension& dim, double r, const Eigen::VectorXd& y, Eigen::VectorXd& f) {
    const int m = dim.m;
    const double cr = (dim.N - 1) / r;
    for (int k = 0; k < m; ++k) {
        const double next = (k + 1 < m) ? y[2 * k + 2] : std::exp(std::min(y[0], 700.0));
        f[2 * k] = y[2 * k + 1];
        f[2 * k + 1] = -cr * y[2 * k + 1] - next;
    }
}

Eigen::VectorXd series_chain(const Problem& p) {
    const int m = p.dim.m;
    Eigen::VectorXd w(m + 2);
    for (int k = 0; k < m; ++k) w[k] = (k % 2 == 0 ? 1.0 : -1.0) * p.a[k];
    w[m] = std::exp(p.a[0]);
    w[m + 1] = w[m] * (m >= 2 ? w[1] : w[m]);
    return w;
}

void series_state(const Dimension& dim, const Eigen::VectorXd& w, double r,
                  Eigen::VectorXd& y) {
    const int m = dim.m;
    const double N = dim.N;
    const double q2 = r * r / (2.0 * N);
    const double q4 = r * r * r * r / (8.0 * N * (N + 2.0));
    for (int k = 0; k < m; ++k) {
        y[2 * k] = w[k] - w[k + 1] * q2 + w[k + 2] * q4;
        y[2 * k + 1] = -w[k + 1] * r / N + w[k + 2] * r * r * r / (2.0 * N * (N + 2.0));
    }
}

void series_state_derivative(const Dimension& dim, const Eigen::VectorXd& w, double r,
                             Eigen::VectorXd& dy) {
    const int m = dim.m;
    const double N = dim.N;
    for (int k = 0; k < m; ++k) {
        dy[2 * k] = -w[k + 1] * r / N + w[k + 2] * r * r * r / (2.0 * N * (N + 2.0));
        dy[2 * k + 1] = -w[k + 1] / N + 3.0 * w[k + 2] * r * r / (2.0 * N * (N + 2.0));
    }
}

std::vector<double> dyadic_nodes(double lo, double hi) {
    std::vector<double> out;
    int j = static_cast<int>(std::ceil(std::log2(lo * (1.0 + 1e-12))));
    for (; std::ldexp(1.0, j) < hi * (1.0 - 1e-12); ++j) {
        const double node = std::ldexp(1.0, j);
        if (node > lo * (1.0 + 1e-12)) out.push_back(node);
    }
    return out;
}

} // namespace

const char* to_string(ProfileStatus s) {
    switch (s) {
        case ProfileStatus::Global: return "global";
        case ProfileStatus::BlowUp: return "blow-up";
        case ProfileStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

void Problem::validate() const {
    dim.validate();
    if (a.size() != dim.m)
        throw ConfigError("Problem requires exactly m initial values, got " +
                          std::to_string(a.size()) + " for m=" + std::to_string(dim.m));
    if (!a.allFinite()) throw ConfigError("Problem initial data must be finite");
}

IntegratorConfig IntegratorConfig::defaults_for(const Problem& p) {
    IntegratorConfig cfg;
    const double amax = p.a.size() ? p.a.cwiseAbs().maxCoeff() : 0.0;
    cfg.r_max = 50.0 * std::sqrt(1.0 + amax);
    return cfg;
}

double IntegratorConfig::taylor_radius() const {
    return r_taylor > 0.0 ? r_taylor : 1e-4 * std::min(1.0, r_max);
}

void IntegratorConfig::validate(const Problem& p) const {
    if (!(r_max > 0.0)) throw ConfigError("r_max must be positive");
    if (taylor_radius() >= r_max) throw ConfigError("r_taylor must be below r_max");
    if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0 && abs_tol < 1.0))
        throw ConfigError("tolerances must lie in (0, 1)");
    if (!(u_cap > std::max(p.a.size() ? p.a[0] : 0.0, 0.0)))
        throw ConfigError("u_cap must exceed max(a_0, 0)");
    if (max_steps < 16) throw ConfigError("max_steps too small");
}

LaunchState taylor_launch(const Problem& p, double r0) {
    p.validate();
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw ConfigError("taylor_launch requires a positive finite radius");
    LaunchState st;
    st.r = r0;
    st.w = series_chain(p);
    st.y.resize(2 * p.dim.m);
    series_state(p.dim, st.w, r0, st.y);
    return st;
}

Eigen::VectorXd RadialProfile::eval_state(double r) const {
    if (r < 0.0 || r > grid.back() * (1.0 + 1e-12))
        throw RangeError("evaluation radius " + std::to_string(r) + " outside [0, " +
                         std::to_string(grid.back()) + "]");
    const int m = dim.m;
    Eigen::VectorXd y(2 * m);
    if (r <= r_taylor) {
        series_state(dim, series_w, r, y);
        return y;
    }
    // locate segment: largest r0 <= r
    std::size_t lo = 0, hi = segments.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments[mid].r0 <= r) lo = mid; else hi = mid;
    }
    const DenseSegment& s = segments[lo];
    const double th = std::clamp((r - s.r0) / s.h, 0.0, 1.0);
    const double om = 1.0 - th;
    for (int i = 0; i < 2 * m; ++i) {
        const auto& c = s.rcont;
        y[i] = c(i, 0) + th * (c(i, 1) + om * (c(i, 2) + th * (c(i, 3) + om * c(i, 4))));
    }
    return y;
}

Eigen::VectorXd RadialProfile::eval_state_derivative(double r) const {
    if (r < 0.0 || r > grid.back() * (1.0 + 1e-12))
        throw RangeError("evaluation radius outside profile");
    const int m = dim.m;
    Eigen::VectorXd dy(2 * m);
    if (r <= r_taylor) {
        series_state_derivative(dim, series_w, r, dy);
        return dy;
    }
    std::size_t lo = 0, hi = segments.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (segments[mid].r0 <= r) lo = mid; else hi = mid;
    }
    const DenseSegment& s = segments[lo];
    const double th = std::clamp((r - s.r0) / s.h, 0.0, 1.0);
    for (int i = 0; i < 2 * m; ++i) {
        const auto& c = s.rcont;
        // d/dth of c0 + th c1 + th(1-th) c2 + th^2(1-th) c3 + th^2(1-th)^2 c4
        dy[i] = c(i, 1) + (1.0 - 2.0 * th) * c(i, 2) + th * (2.0 - 3.0 * th) * c(i, 3) +
                th * (2.0 - 6.0 * th + 4.0 * th * th) * c(i, 4);
        dy[i] /= s.h;
    }
    return dy;
}

Eigen::VectorXd RadialProfile::eval(double r) const {
    const Eigen::VectorXd y = eval_state(r);
    Eigen::VectorXd out(dim.m);
    for (int k = 0; k < dim.m; ++k) out[k] = y[2 * k];
    return out;
}

double RadialProfile::u(double r) const { return eval_state(r)[0]; }

RadialProfile integrate(const Problem& p, const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate(p);
    const int m = p.dim.m;
    const int n = 2 * m;

    RadialProfile prof;
    prof.dim = p.dim;
    prof.a = p.a;

    // Series launch; halve the launch radius until the order-4 tail estimate
    // clears the step tolerance.
    double r0 = cfg.taylor_radius();
    LaunchState st = taylor_launch(p, r0);
    for (int it = 0; it < 60; ++it) {
        double worst = 0.0;
        const double q4 = r0 * r0 * r0 * r0 / (8.0 * p.dim.N * (p.dim.N + 2.0));
        for (int k = 0; k < m; ++k) {
            const double tail = std::abs(st.w[k + 2]) * q4 * (r0 * r0 / (2.0 * p.dim.N));
            worst = std::max(worst, tail / (cfg.abs_tol + cfg.rel_tol * std::abs(st.y[2 * k])));
        }
        if (worst <= 0.1 || r0 <= 1e-8 * cfg.r_max) break;
        r0 *= 0.5;
        st = taylor_launch(p, r0);
    }
    prof.r_taylor = r0;
    prof.series_w = st.w;

    std::vector<double> nodes_r;
    std::vector<Eigen::VectorXd> nodes_y;
    nodes_r.push_back(0.0);
    {
        Eigen::VectorXd y0(n);
        for (int k = 0; k < m; ++k) { y0[2 * k] = st.w[k]; y0[2 * k + 1] = 0.0; }
        nodes_y.push_back(y0);
    }
    nodes_r.push_back(r0);
    nodes_y.push_back(st.y);

    const std::vector<double> mandatory = dyadic_nodes(r0, cfg.r_max);
    std::size_t next_mand = 0;

    double r = r0;
    Eigen::VectorXd y = st.y;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y1(n), err(n);
    rhs(p.dim, r, y, k1);

    // initial step from the scale of the launch state
    double h = 0.01 * r0;
    {
        const double fy = k1.cwiseAbs().maxCoeff();
        if (fy > 0.0) h = std::min(0.1 * (1.0 + y.cwiseAbs().maxCoeff()) / fy, 0.1 * r0);
        h = std::max(h, 1e-10 * r0);
    }

    prof.status = ProfileStatus::Inconclusive;
    long steps = 0;
    bool done = false;

    auto target_node = [&]() {
        while (next_mand < mandatory.size() && mandatory[next_mand] <= r * (1.0 + 1e-14))
            ++next_mand;
        return next_mand < mandatory.size() ? mandatory[next_mand] : cfg.r_max;
    };

    while (!done && steps < cfg.max_steps) {
        ++steps;
        const double goal = target_node();
        bool hit = false;
        if (r + h >= goal * (1.0 - 1e-14)) { h = goal - r; hit = true; }
        if (!hit && h < 1e-12 * r) {  // step underflow: treat as divergence at r
            prof.status = ProfileStatus::BlowUp;
            prof.blowup_radius = r;
            prof.blowup_halfwidth = std::max(h, 1e-12 * r);
            break;
        }

        yt = y + h * (A21 * k1);
        rhs(p.dim, r + C2 * h, yt, k2);
        yt = y + h * (A31 * k1 + A32 * k2);
        rhs(p.dim, r + C3 * h, yt, k3);
        yt = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        rhs(p.dim, r + C4 * h, yt, k4);
        yt = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        rhs(p.dim, r + C5 * h, yt, k5);
        yt = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        rhs(p.dim, r + h, yt, k6);
        y1 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        rhs(p.dim, r + h, y1, k7);
        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        double enorm = 0.0;
        bool bad = !y1.allFinite();
        if (!bad) {
            for (int i = 0; i < n; ++i) {
                const double sk =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                const double q = err[i] / sk;
                enorm += q * q;
            }
            enorm = std::sqrt(enorm / n);
        }

        if (bad || enorm > 1.0) {
            const double fac = bad ? 0.2 : std::max(0.2, 0.9 * std::pow(enorm, -0.2));
            h *= fac;
            continue;
        }

        // accepted
        DenseSegment seg;
        seg.r0 = r;
        seg.h = h;
        seg.rcont.resize(n, 5);
        for (int i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            seg.rcont(i, 0) = y[i];
            seg.rcont(i, 1) = ydiff;
            seg.rcont(i, 2) = bspl;
            seg.rcont(i, 3) = ydiff - h * k7[i] - bspl;
            seg.rcont(i, 4) = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] +
                                   D6 * k6[i] + D7 * k7[i]);
        }
        prof.segments.push_back(std::move(seg));

        const double r_new = hit ? goal : r + h;
        r = r_new;
        y = y1;
        k1 = k7;  // FSAL
        nodes_r.push_back(r);
        nodes_y.push_back(y);

        // blow-up test: u past the cap, rising and accelerating
        const double u = y[0], du = y[1];
        const double v1 = (m > 1) ? y[2] : std::exp(std::min(u, 700.0));
        const double ddu = -(p.dim.N - 1) / r * du - v1;
        if (u > cfg.u_cap && du > 0.0 && ddu > 0.0) {
            // crossing radius inside the last segment
            const DenseSegment& s = prof.segments.back();
            double lo = 0.0, hi_ = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi_);
                const double om = 1.0 - mid;
                const auto& c = s.rcont;
                const double um = c(0, 0) + mid * (c(0, 1) + om * (c(0, 2) +
                                  mid * (c(0, 3) + om * c(0, 4))));
                (um > cfg.u_cap ? hi_ : lo) = mid;
            }
            const double r_cross = s.r0 + 0.5 * (lo + hi_) * s.h;
            const double slope = std::max(du, 1e-8);
            prof.status = ProfileStatus::BlowUp;
            prof.blowup_radius = r_cross + 2.0 * m / slope;  // log-singularity extrapolation
            prof.blowup_halfwidth = 2.0 * m / slope + (r - r_cross);
            break;
        }

        if (r >= cfg.r_max * (1.0 - 1e-14)) {
            prof.status = (y[0] <= cfg.u_cap) ? ProfileStatus::Global
                                              : ProfileStatus::Inconclusive;
            done = true;
            break;
        }

        const double grow = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(enorm, 1e-10), -0.2)));
        h = std::min(h * grow, cfg.r_max - r);
    }

    prof.grid = std::move(nodes_r);
    const std::size_t nn = prof.grid.size();
    prof.v.resize(m, nn);
    prof.dv.resize(m, nn);
    for (std::size_t i = 0; i < nn; ++i) {
        for (int k = 0; k < m; ++k) {
            prof.v(k, i) = nodes_y[i][2 * k];
            prof.dv(k, i) = nodes_y[i][2 * k + 1];
        }
    }
    return prof;
}

double matching_polynomial(const Problem& p, double r) {
    double acc = 0.0;
    for (int k = 0; k < p.dim.m; ++k)
        acc += p.a[k] * std::pow(r, 2 * k) / laplace_power_coeff(k, p.dim.N).to_double();
    return acc;
}

ComparisonReport compare_profiles(const RadialProfile& pa, const RadialProfile& pb, double tol) {
    if (pa.dim.m != pb.dim.m || pa.dim.N != pb.dim.N)
        throw ConfigError("compare_profiles requires matching (m, N)");
    ComparisonReport rep;
    rep.all_hold = true;
    rep.min_scaled_margin = std::numeric_limits<double>::infinity();

    // shared radii: exact common grid values (origin, launch, dyadic nodes)
    std::size_t ia = 0, ib = 0;
    while (ia < pa.grid.size() && ib < pb.grid.size()) {
        const double ra = pa.grid[ia], rb_ = pb.grid[ib];
        if (ra < rb_) { ++ia; continue; }
        if (rb_ < ra) { ++ib; continue; }
        for (int k = 0; k < pa.dim.m; ++k) {
            const double sg = (k % 2 == 0) ? 1.0 : -1.0;  // Delta^k u = (-1)^k v_k
            const double A = sg * pa.v(k, ia), B = sg * pb.v(k, ib);
            const double scaled = (A - B) / (1.0 + std::abs(A) + std::abs(B));
            if (scaled < rep.min_scaled_margin) {
                rep.min_scaled_margin = scaled;
                rep.worst_k = k;
                rep.worst_r = ra;
            }
            if (scaled < -tol) rep.all_hold = false;
        }
        ++rep.nodes_checked;
        ++ia;
        ++ib;
    }
    return rep;
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    os << "r";
    for (int k = 0; k < p.dim.m; ++k) os << ",v" << k;
    for (int k = 0; k < p.dim.m; ++k) os << ",dv" << k;
    os << "\n";
    char buf[64];
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p.grid[i]);
        os << buf;
        for (int k = 0; k < p.dim.m; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p.v(k, i));
            os << ',' << buf;
        }
        for (int k = 0; k < p.dim.m; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p.dv(k, i));
            os << ',' << buf;
        }
        os << "\n";
    }
}

} // namespace polystab
