#ifndef POLYSTAB_IVP_HPP
#define POLYSTAB_IVP_HPP

#include "polystab/constants.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace polystab {

/// Radial initial-value problem: a_k = Delta^k u(0) for 0 <= k <= m-1,
/// with all odd derivatives vanishing at the origin.
struct Problem {
    Dimension dim;
    Eigen::VectorXd a;

    void validate() const;
};

struct IntegratorConfig {
    double r_max = 50.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double u_cap = 50.0;     // blow-up threshold on v_0 = u
    double r_taylor = 0.0;   // series-launch radius; <= 0 selects 1e-4 * min(1, r_max)
    long max_steps = 2000000;

    /// r_max = 50 (1 + |a|_inf)^{1/2}, everything else at defaults.
    static IntegratorConfig defaults_for(const Problem& p);

    double taylor_radius() const;
    void validate(const Problem& p) const;
};

enum class ProfileStatus { Global, BlowUp, Inconclusive };

const char* to_string(ProfileStatus s);

/// One accepted integrator step with its continuous extension.
struct DenseSegment {
    double r0 = 0.0;
    double h = 0.0;
    Eigen::MatrixXd rcont;  // (2m) x 5 interpolation coefficients
};

/// Grid-sampled iterated Laplacians v_k = (-Delta)^k u with dense output.
struct RadialProfile {
    Dimension dim;
    Eigen::VectorXd a;          // initial data, for audit and export
    std::vector<double> grid;   // strictly increasing, grid[0] == 0
    Eigen::MatrixXd v;          // m x n values v_k(r_i)
    Eigen::MatrixXd dv;         // m x n derivatives v_k'(r_i)
    ProfileStatus status = ProfileStatus::Inconclusive;
    double blowup_radius = 0.0;     // estimate, BlowUp only
    double blowup_halfwidth = 0.0;  // heuristic error bar, BlowUp only
    double r_taylor = 0.0;
    Eigen::VectorXd series_w;   // chain values w_0..w_{m+1} backing the series segment
    std::vector<DenseSegment> segments;

    double r_end() const { return grid.back(); }
    bool global() const { return status == ProfileStatus::Global; }

    /// Full interpolated state (v_0, v_0', ..., v_{m-1}, v_{m-1}') at r.
    Eigen::VectorXd eval_state(double r) const;
    /// d/dr of the interpolated state, for residual checks.
    Eigen::VectorXd eval_state_derivative(double r) const;
    /// The m iterated-Laplacian values v_k(r).
    Eigen::VectorXd eval(double r) const;
    /// u(r) = v_0(r).
    double u(double r) const;
};

/// State produced by the even power-series launch at r0.
struct LaunchState {
    double r = 0.0;
    Eigen::VectorXd y;          // 2m entries (v_k, v_k')
    Eigen::VectorXd w;          // chain values w_0..w_{m+1}
};

/// Evaluate the order-4 even series for (v_k, v_k') at r0. The chain is
/// closed with w_m = e^{a_0} and w_{m+1} = e^{a_0} w_1. Throws ConfigError
/// if r0 is not a usable launch radius.
LaunchState taylor_launch(const Problem& p, double r0);

/// Integrate the first-order system in (v_k, v_k') from a series launch to
/// r_max with an adaptive embedded Runge-Kutta pair and stored dense output.
/// Grid nodes include every power of two inside the integration range, so
/// independent runs share reproducible output radii.
RadialProfile integrate(const Problem& p, const IntegratorConfig& cfg);

/// Degree-2(m-1) polynomial with the same initial data as p:
///   Psi(r) = sum_k a_k r^{2k} / c_k, annihilated by Delta^m.
double matching_polynomial(const Problem& p, double r);

struct ComparisonReport {
    bool all_hold = false;
    double min_scaled_margin = 0.0;  // min over nodes of margin / (1 + |A| + |B|)
    int worst_k = -1;
    double worst_r = 0.0;
    std::size_t nodes_checked = 0;
};

/// Check Delta^k u_a >= Delta^k u_b at every shared grid radius of the two
/// profiles, up to a relative tolerance. Radii past the shorter profile are
/// ignored, so a blow-up on one side restricts the comparison to the common
/// interval.
ComparisonReport compare_profiles(const RadialProfile& pa, const RadialProfile& pb,
                                  double tol = 1e-8);

/// CSV with header r,v0..v{m-1},dv0..dv{m-1}.
void write_profile_csv(std::ostream& os, const RadialProfile& p);

} // namespace polystab

#endif
