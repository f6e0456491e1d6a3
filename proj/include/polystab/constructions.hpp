#ifndef POLYSTAB_CONSTRUCTIONS_HPP
#define POLYSTAB_CONSTRUCTIONS_HPP

#include "polystab/ivp.hpp"
#include "polystab/stability.hpp"

#include <vector>

namespace polystab {

/// Recipe for odd m: the supremum H0 of the envelope-gap function
///   h(r) = c_{m-1} r^{2-2m} [a_0 + sum_{k<=m-2} a_k r^{2k}/c_k + 2m ln r - ln lambda]
/// over (0, inf); any a_{m-1} <= -H0 pushes the matching polynomial under the
/// Hardy envelope, so the certificate passes.
struct OddTailRecipe {
    Eigen::VectorXd head;
    double sup_value = 0.0;    // H0
    double sup_radius = 0.0;
    double chosen_a_last = 0.0;  // -H0
};

OddTailRecipe odd_tail_recipe(const Dimension& dim, const Eigen::VectorXd& head);

/// Even-m analogue built on a computed borderline profile:
///   g(r) = c_{m-1} r^{2-2m} [u_b(r) - ln(mu / r^{2m})] - beta0,
/// maximised over (0, r_end]; a_{m-1} <= -sup g certifies. beta0 is taken
/// from the blow-up side of the bracket. The reported tail value of g should
/// approach -beta0 when the truncation radius is generous.
struct EvenTailRecipe {
    Eigen::VectorXd head;
    double sup_value = 0.0;
    double sup_radius = 0.0;
    double tail_value = 0.0;
    double beta0_used = 0.0;
    double chosen_a_last = 0.0;  // -sup_value
};

EvenTailRecipe even_tail_recipe(const Dimension& dim, const Eigen::VectorXd& head,
                                const RadialProfile& borderline, double beta0);

/// Stable solution with alternating-sign initial data: a_k = (-1)^k eps for
/// k <= m-3, a_{m-2} = -beta, a_{m-1} = eps, with eps fixed at the largest
/// admissible value eps1 = min(1, e^{xi0}/(4N^2)) and beta doubled from 1
/// until the profile clears the Hardy envelope on the whole grid.
struct AlternatingConstruction {
    double eps = 0.0;
    double beta = 0.0;
    double xi0 = 0.0;
    double gamma0 = 0.0;  // e^{H_+(1)}
    double eps1 = 0.0;
    double h_beta = 0.0;  // -beta + e^{xi0}/(2N), bound on Delta^{m-2} u
    Problem problem;
    RadialProfile profile;
    Certificate certificate;
};

AlternatingConstruction alternating_construction(const Dimension& dim, IntegratorConfig base);

struct BoundRow {
    int k = 0;
    double worst_margin = 0.0;
    double worst_r = 0.0;
    bool holds = false;
};

/// Node-wise verification of the iterated decay bounds for odd m with
/// nonpositive a_1..a_{m-1}:
///   -Delta^{m-k} u >= r^{2k} e^u / P_k(N)  for k = 1..m-1,
///   e^u <= P_m(N) / r^{2m},
///   -u' >= r^{2m-1} e^u / ((N+2m-2) P_{m-1}(N)).
struct IteratedBoundsReport {
    std::vector<BoundRow> laplacian_bounds;
    BoundRow final_bound;
    BoundRow gradient_bound;
    bool all_hold = false;
};

IteratedBoundsReport iterated_bounds_report(const RadialProfile& profile, double tol = 1e-7);

/// Integrate both problems (a_k(A) >= a_k(B) required) and check the ordering
/// Delta^k u_A >= Delta^k u_B on the shared grid of the common interval.
ComparisonReport comparison_check(const Problem& pa, const Problem& pb,
                                  const IntegratorConfig& cfg, double tol = 1e-8);

} // namespace polystab

#endif
