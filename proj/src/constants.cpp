#include "polystab/constants.hpp"

#include "polystab/errors.hpp"

#include <cmath>
#include <map>
#include <vector>
#include <ostream>
#include <string>

namespace polystab {

void Dimension::validate() const {
    if (m < 1 || N < 1)
        throw ConfigError("Dimension requires m >= 1 and N >= 1, got m=" + std::to_string(m) +
                          ", N=" + std::to_string(N));
}

void Dimension::require_supercritical(const char* who) const {
    validate();
    if (!supercritical())
        throw DimensionError(std::string(who) + " requires N > 2m, got m=" + std::to_string(m) +
                             ", N=" + std::to_string(N));
}

Rational hardy_lambda(const Dimension& dim) {
    if (!dim.odd())
        throw ParityError("hardy_lambda requires odd m, got m=" + std::to_string(dim.m));
    dim.require_supercritical("hardy_lambda");
    const int N = dim.N;
    BigInt num = BigInt(N - 2) * (N - 2);
    for (int i = 1; i <= (dim.m - 1) / 2; ++i) {
        num *= BigInt(N - 4 * i - 2) * (N - 4 * i - 2);
        num *= BigInt(N + 4 * i - 2) * (N + 4 * i - 2);
    }
    return Rational(num, BigInt(1) << (2 * dim.m));  // 16^{m/2} = 2^{2m}
}

Rational rellich_mu(const Dimension& dim) {
    if (dim.odd())
        throw ParityError("rellich_mu requires even m, got m=" + std::to_string(dim.m));
    dim.require_supercritical("rellich_mu");
    const int N = dim.N;
    BigInt num = 1;
    for (int i = 0; i <= (dim.m - 2) / 2; ++i) {
        num *= BigInt(N + 4 * i) * (N + 4 * i);
        num *= BigInt(N - 4 * i - 4) * (N - 4 * i - 4);
    }
    return Rational(num, BigInt(1) << (2 * dim.m));
}

Rational stability_constant(const Dimension& dim) {
    return dim.odd() ? hardy_lambda(dim) : rellich_mu(dim);
}

Rational laplace_power_coeff(int k, int N) {
    if (k < 0) throw ConfigError("laplace_power_coeff requires k >= 0");
    BigInt v = 1;
    for (int i = 1; i <= k; ++i) v *= BigInt(2 * i) * (N - 2 + 2 * i);
    return Rational(v);
}

Rational system_coupling_constant(const Dimension& dim) {
    if (dim.m < 2)
        throw ConfigError("system_coupling_constant requires m >= 2");
    dim.require_supercritical("system_coupling_constant");
    BigInt inv = 1;
    for (int i = 1; i <= dim.m - 1; ++i) inv *= BigInt(2 * i) * (dim.N - 2 * i - 2);
    return Rational(BigInt(1), inv);
}

Rational iterated_bound_poly(int k, int N) {
    if (k < 1) throw ConfigError("iterated_bound_poly requires k >= 1");
    BigInt v = BigInt(1) << k;
    for (int i = 2; i <= k; ++i) v *= i;
    for (int l = 0; l <= k - 1; ++l) v *= (N + 2 * l);
    return Rational(v);
}

double w_power(int j, const Dimension& dim, double r) {
    if (r < 0.0) throw ConfigError("w_power requires r >= 0");
    return std::pow(1.0 + r * r, j - 0.5 * dim.N);
}

namespace {

// K_m with (-Delta)^m [-2m ln(1+|x|^2)] = K_m (1+|x|^2)^{-2m} in R^{2m},
// found by iterating -Delta exactly on the basis phi_i = (1+r^2)^{-i}:
//   -Delta phi_i = 2i(N-2i-2) phi_{i+1} + 2i(2i+2) phi_{i+2},
//   -Delta ln(1+r^2) = -(2N-4) phi_1 - 4 phi_2.
// Every lower-order coefficient cancels along the way; K_1 = 8, K_2 = 384.
BigInt spherical_constant(int m) {
    const int N = 2 * m;
    std::vector<BigInt> coeff(2 * m + 3, BigInt(0));
    coeff[1] = BigInt(2 * m) * (2 * N - 4);
    coeff[2] = BigInt(2 * m) * 4;
    for (int step = 1; step < m; ++step) {
        std::vector<BigInt> next(coeff.size(), BigInt(0));
        for (int i = 1; i + 2 < static_cast<int>(coeff.size()); ++i) {
            if (coeff[i] == 0) continue;
            next[i + 1] += coeff[i] * (2 * i) * (N - 2 * i - 2);
            next[i + 2] += coeff[i] * (2 * i) * (2 * i + 2);
        }
        coeff = std::move(next);
    }
    for (int i = 0; i < static_cast<int>(coeff.size()); ++i)
        if (i != 2 * m && coeff[i] != 0)
            throw NumericalError("spherical constant recurrence failed to telescope");
    return coeff[2 * m];
}

} // namespace

double spherical_solution(int m, double lam, double r) {
    if (!(lam > 0.0)) throw ConfigError("spherical_solution requires lam > 0");
    if (m < 1) throw ConfigError("spherical_solution requires m >= 1");
    // ln(K_m 4^m lam^{2m}) - 2m ln(4 + lam^2 r^2); the m = 1 member is the
    // classical ln(32 lam^2 / (4 + lam^2 r^2)^2).
    static std::map<int, double> cache;
    auto it = cache.find(m);
    if (it == cache.end())
        it = cache.emplace(m, Rational(spherical_constant(m) << (2 * m)).to_double()).first;
    return std::log(it->second) + 2.0 * m * std::log(lam) -
           2.0 * m * std::log(4.0 + lam * lam * r * r);
}

ThresholdScan find_threshold_dimension(int m, int window, int scan_limit) {
    if (m < 3 || m % 2 == 0)
        throw ParityError("find_threshold_dimension requires odd m >= 3");
    ThresholdScan out;
    out.m = m;

    auto holds_at = [&](int N) {
        return Rational(iterated_bound_poly(m, N)) <= hardy_lambda({m, N});
    };

    // Locate the last failing dimension; by degrees the inequality holds for
    // all large N, so a forward scan terminates.
    int last_fail = 2 * m;  // sentinel: "fails" below the admissible range
    int N = 2 * m + 1;
    for (; N <= scan_limit; ++N) {
        if (!holds_at(N)) last_fail = N;
        else if (N - last_fail > window) break;
    }
    if (N > scan_limit)
        throw NumericalError("threshold-dimension scan exhausted scan_limit");

    out.N0 = last_fail + 1;
    out.window_end = out.N0 + window;

    out.table.reserve(out.window_end - 2 * m);
    for (int Np = 2 * m + 1; Np <= out.window_end; ++Np) {
        ThresholdRow row;
        row.N = Np;
        row.p = iterated_bound_poly(m, Np);
        row.lambda = hardy_lambda({m, Np});
        row.holds = row.p <= row.lambda;
        out.table.push_back(row);
    }

    out.ratio_increasing = true;
    for (int Np = out.N0; Np < out.window_end; ++Np) {
        const Rational r0 = hardy_lambda({m, Np}) / iterated_bound_poly(m, Np);
        const Rational r1 = hardy_lambda({m, Np + 1}) / iterated_bound_poly(m, Np + 1);
        if (!(r1 > r0)) { out.ratio_increasing = false; break; }
    }
    return out;
}

void write_constant_table_csv(std::ostream& os, int m_max, int N_max) {
    os << "m,N,gamma_exact,gamma_float\n";
    char buf[64];
    for (int m = 1; m <= m_max; ++m) {
        for (int N = 2 * m + 1; N <= N_max; ++N) {
            const Rational g = stability_constant({m, N});
            std::snprintf(buf, sizeof buf, "%.17g", g.to_double());
            os << m << ',' << N << ',' << g.str() << ',' << buf << '\n';
        }
    }
}

} // namespace polystab
