#ifndef POLYSTAB_SHOOTING_HPP
#define POLYSTAB_SHOOTING_HPP

#include "polystab/ivp.hpp"
#include "polystab/stability.hpp"

#include <optional>
#include <vector>

namespace polystab {

/// Audit record for one classification run.
struct Evidence {
    ProfileStatus status = ProfileStatus::Inconclusive;
    double r_max_used = 0.0;
    double u_cap_used = 0.0;
    double radius = 0.0;  // blow-up radius estimate when status == BlowUp
};

struct Classification {
    bool blow_up = false;
    double radius = 0.0;  // blow-up radius, or the r_max certified global-to
    Evidence evidence;
};

/// integrate() with escalation: an inconclusive run retries once with a
/// doubled cap and once more with a doubled radius before giving up.
/// "Global" always means global up to the recorded r_max.
Classification classify(const Problem& p, IntegratorConfig cfg);

/// Bracket for the borderline initial value separating global from blow-up.
struct Bracket {
    double lo = 0.0;  // global side
    double hi = 0.0;  // blow-up side
    Evidence lo_evidence;
    Evidence hi_evidence;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

/// Bracket a_{m-1} = beta0 for even m: expand [-1, 1] geometrically until the
/// endpoints classify oppositely, then bisect to width <= tol. The working
/// r_max doubles whenever a blow-up radius on the hi side passes r_max/2, so
/// near-borderline solutions keep resolving.
Bracket find_borderline(const Dimension& dim, const Eigen::VectorXd& head, double tol,
                        IntegratorConfig base);

struct ThresholdSample {
    double beta = 0.0;
    bool pass = false;
};

/// Certificate threshold: bisection on "the pointwise certificate passes",
/// which is monotone in a_{m-1}. This is a sufficient-condition proxy and may
/// sit strictly below the true stability threshold; it is reported as the
/// certificate threshold, never as the stability boundary itself.
struct CertificateThreshold {
    Bracket bracket;            // lo passes, hi fails (or degenerate, see below)
    bool at_borderline = false; // passed at every admissible sample below beta0
    std::vector<ThresholdSample> samples;
};

/// For even m a borderline bracket is required and the search stays below its
/// global side; for odd m the search runs over all reals.
CertificateThreshold find_certificate_threshold(const Dimension& dim,
                                                const Eigen::VectorXd& head, double tol,
                                                IntegratorConfig base,
                                                const std::optional<Bracket>& borderline);

} // namespace polystab

#endif
