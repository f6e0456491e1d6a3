#ifndef POLYSTAB_MONOTONE_HPP
#define POLYSTAB_MONOTONE_HPP

#include "polystab/ivp.hpp"
#include "polystab/stability.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace polystab {

/// Polynomial forcing profile -P(x) - C. Radial specs drive the full solver;
/// multivariate specs (in d <= 3 variables) are admitted for the constants
/// C_P and C_P' only.
struct PolynomialSpec {
    enum class Kind { Radial, Multivariate };

    struct Term {
        std::array<int, 3> expo{0, 0, 0};
        double coeff = 0.0;
    };

    Kind kind = Kind::Radial;
    Eigen::VectorXd radial_coeffs;  // b_0..b_j of r^{2k}
    std::vector<Term> terms;
    int var_dim = 0;

    static PolynomialSpec radial(const Eigen::VectorXd& coeffs);
    static PolynomialSpec multivariate(std::vector<Term> terms, int var_dim);

    int degree() const;
    double eval_radial(double r) const;
    double eval_point(const Eigen::Vector3d& x) const;

    /// Enforces deg(P) <= 2m-2 and the growth predicate: radial specs need a
    /// positive leading nonconstant coefficient; multivariate specs need the
    /// minimum of P over sampled spheres to outgrow ln R.
    void validate(const Dimension& dim) const;
};

/// C_P = max f with
///   f(x) = -P(x) + (N+2)/2 ln(1+|x|^2) + ln d_m - ln(N(N-2)) + (1+|x|^2)^{m-N/2};
/// any C >= C_P makes the algebraic profile family a super-solution.
/// Radial specs use a dense log scan plus golden polish; multivariate specs
/// use multi-start downhill simplex from 64 seeded points plus the origin.
double compute_CP(const PolynomialSpec& P, const Dimension& dim, std::uint64_t seed = 0);

struct AdmissibleConstants {
    double cp = 0.0;
    double cp_prime = 0.0;
    double cp_tilde = 0.0;  // max(cp, cp_prime)
};

/// C_P' = max over x != 0 of g(x) = 1 - ln gamma_{N,m} - P(x) + 2m ln|x|;
/// both limits are -infinity. Also returns C_P and their maximum.
AdmissibleConstants compute_CP_prime(const PolynomialSpec& P, const Dimension& dim,
                                     std::uint64_t seed = 0);

/// Quadratically graded radial grid on [0, R]; R <= 0 picks the smallest
/// radius with W_m(R) <= 1e-8.
std::vector<double> graded_grid(const Dimension& dim, int n, double R = 0.0);

/// The algebraic super-solution (Z, V_1..V_{m-1}) = (W_m, ..., W_1) sampled on
/// a grid, with the chain inequalities and the closed-form identity for
/// -Delta V_{m-1} verified by high-order finite differences at sampled radii.
struct SuperSolution {
    std::vector<double> grid;
    Eigen::MatrixXd rows;          // m x n; row 0 = Z, row k = V_k
    double worst_chain_margin = 0.0;
    double last_eq_rel_err = 0.0;  // -Delta V_{m-1} vs N(N-2) W_{-1}
};

SuperSolution super_solution(const Dimension& dim, const std::vector<double>& grid);

struct IterateOptions {
    double tol = 1e-8;
    int max_iters = 5000;
    bool enforce_monotone = true;  // throw on a monotonicity violation
};

/// Monotone-iteration state for the cooperative system on a truncated grid.
/// residual is the worst node-wise defect of the discrete equations in
/// solution units (defect divided by the row diagonal of -Delta_h).
struct SystemIterate {
    Dimension dim;
    PolynomialSpec P;
    double C = 0.0;
    std::vector<double> grid;
    Eigen::VectorXd z;
    Eigen::MatrixXd v;  // (m-1) x n, rows v_1..v_{m-1}; empty when m == 1
    int iter_count = 0;
    std::vector<double> sup_change_history;
    double residual = 0.0;
    bool monotone_ok = false;

    /// u = -P - C + z at a grid node.
    double u_node(std::size_t i) const;
    /// u with cubic interpolation of z between nodes.
    double u_at(double r) const;
    /// Delta^k u(0) recovered from the converged origin values.
    Eigen::VectorXd extract_initial_data() const;
};

/// Solve the cooperative system by sweeping the m radial Poisson problems
/// with sources frozen at the newest iterate, starting from the algebraic
/// super-solution with its trace as Dirichlet data at R. Iterates decrease
/// node-wise and stay within [0, super-solution].
SystemIterate monotone_iterate(const PolynomialSpec& P, double C, const Dimension& dim,
                               const std::vector<double>& grid, const IterateOptions& opts = {});

/// Pointwise certificate for the assembled u = -P - C + z. When c_tilde is
/// supplied and C >= c_tilde, a failing certificate is a hard error: it can
/// only mean the constants or the discretization are wrong.
Certificate certify_constructed(const SystemIterate& it,
                                std::optional<double> c_tilde = std::nullopt);

/// CSV with header r,z,v1..v{m-1},u.
void write_iterate_csv(std::ostream& os, const SystemIterate& it);

} // namespace polystab

#endif
