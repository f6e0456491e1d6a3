#ifndef POLYSTAB_CONSTANTS_HPP
#define POLYSTAB_CONSTANTS_HPP

#include "polystab/rational.hpp"

#include <iosfwd>
#include <vector>

namespace polystab {

/// Problem dimensions: m is the half-order of (-Delta)^m, N the space dimension.
struct Dimension {
    int m = 1;
    int N = 3;

    bool odd() const { return m % 2 == 1; }
    bool supercritical() const { return N > 2 * m; }

    /// Throws DimensionError unless N > 2m.
    void require_supercritical(const char* who) const;
    /// Throws ConfigError unless m >= 1 and N >= 1.
    void validate() const;
};

/// Hardy constant for odd m, N > 2m:
///   (N-2)^2/16^{m/2} * prod_{i=1}^{(m-1)/2} (N-4i-2)^2 (N+4i-2)^2.
Rational hardy_lambda(const Dimension& dim);

/// Rellich-type constant for even m, N > 2m:
///   16^{-m/2} * prod_{i=0}^{(m-2)/2} (N+4i)^2 (N-4i-4)^2.
Rational rellich_mu(const Dimension& dim);

/// Parity dispatch: hardy_lambda for odd m, rellich_mu for even m.
Rational stability_constant(const Dimension& dim);

/// c_k = Delta^k(r^{2k}) = prod_{i=1}^{k} 2i(N-2+2i); c_0 = 1.
Rational laplace_power_coeff(int k, int N);

/// d_m with 1/d_m = prod_{i=1}^{m-1} 2i(N-2i-2); requires m >= 2 and N > 2m.
Rational system_coupling_constant(const Dimension& dim);

/// P_k(N) = 2^k k! prod_{l=0}^{k-1} (N+2l); requires k >= 1.
Rational iterated_bound_poly(int k, int N);

/// W_j(r) = (1+r^2)^{j-N/2}.
double w_power(int j, const Dimension& dim, double r);

/// The explicit conformal-dimension family ln(32 lam^2 / (4 + lam^2 r^2)^2).
/// Solves the equation exactly when N = 2m; m is accepted for call-site clarity.
double spherical_solution(int m, double lam, double r);

/// One row of the threshold-dimension scan.
struct ThresholdRow {
    int N = 0;
    Rational p;       // P_m(N)
    Rational lambda;  // Hardy constant at (N, m)
    bool holds = false;  // P_m(N) <= lambda
};

struct ThresholdScan {
    int m = 0;
    int N0 = 0;
    int window_end = 0;               // last N verified
    bool ratio_increasing = false;    // lambda/P strictly increasing across window
    std::vector<ThresholdRow> table;  // rows for N = 2m+1 .. window_end
};

/// Smallest N > 2m with P_m(N') <= lambda_{N',m} for every scanned N' >= N.
/// The window [N0, N0+window] is verified exactly and the ratio lambda/P is
/// checked to be increasing across it, turning the degree argument into a
/// finite certificate. Odd m >= 3 only.
ThresholdScan find_threshold_dimension(int m, int window = 200, int scan_limit = 4096);

/// CSV table of stability constants: columns (m, N, gamma_exact, gamma_float).
/// Exact rationals are rendered as "p/q".
void write_constant_table_csv(std::ostream& os, int m_max, int N_max);

} // namespace polystab

#endif
