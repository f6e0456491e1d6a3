#ifndef POLYSTAB_STABILITY_HPP
#define POLYSTAB_STABILITY_HPP

#include "polystab/ivp.hpp"
#include "polystab/rational.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace polystab {

enum class CertVerdict { Pass, Fail, InconclusiveTail };

const char* to_string(CertVerdict v);

/// Result of the pointwise test sup_r e^{u(r)} r^{2m} <= gamma_{N,m}.
/// A supremum attained in the final 5% of the radius range signals
/// truncation rather than a true interior maximum and forces the verdict
/// to inconclusive-tail.
struct Certificate {
    Rational gamma;
    double sup_value = 0.0;
    double sup_radius = 0.0;
    double margin = 0.0;  // gamma - sup_value
    bool tail_note = false;
    CertVerdict verdict = CertVerdict::Fail;

    bool passed() const { return verdict == CertVerdict::Pass; }
};

/// Certificate over an arbitrary sampled radial function: grid scan of
/// u(r) + 2m ln r over the nodes plus golden-section refinement between the
/// bracketing nodes.
Certificate pointwise_certificate_on(const Dimension& dim,
                                     const std::function<double(double)>& u,
                                     const std::vector<double>& nodes, double r_end);

/// Certificate for an integrated profile. Requires a Global profile and N > 2m.
Certificate pointwise_certificate(const RadialProfile& profile);

struct Annulus {
    double r_a = 0.0;
    double r_b = 0.0;
};

/// Discrete stability quadratic form on a uniform sub-grid of an annulus.
/// A is the parity-appropriate higher-order Dirichlet form with weight
/// r^{N-1} (gradient-of-iterated-Laplacian for odd m, iterated Laplacian
/// for even m); B and M are the diagonal potential and plain mass matrices.
/// Test functions vanish on m node layers at each end of the annulus.
struct FormOperators {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;            // e^{u(r_i)} r_i^{N-1} w_i on free nodes
    Eigen::VectorXd M;            // r_i^{N-1} w_i on free nodes
    std::vector<double> radii;    // free node radii
    double h = 0.0;
    int n_total = 0;
};

FormOperators assemble_form_on(const Dimension& dim, const std::function<double(double)>& u,
                               const Annulus& support, int n);
FormOperators assemble_form(const RadialProfile& profile, const Annulus& support, int n);

struct EigResult {
    double rayleigh = 0.0;
    Eigen::VectorXd phi;
    bool dense_fallback = false;
};

/// Minimal lambda with A phi = lambda B phi (A symmetric, B positive diagonal),
/// by shifted inverse iteration with a deterministic start vector; falls back
/// to a dense solve on breakdown for sizes up to 2048.
EigResult min_eig(const Eigen::MatrixXd& A, const Eigen::VectorXd& B_diag);

struct FormWitness {
    Annulus support;
    std::vector<double> radii;  // free node radii carrying phi
    Eigen::VectorXd phi;
    double q_value = 0.0;   // phi^T (A - B) phi
    double rayleigh = 0.0;  // min eig of (A - B, M)
    enum class Kind { Trial, Eigen } kind = Kind::Eigen;
    int n = 0;
};

/// Negative-direction search with the polynomial bump ((r-r_a)(r_b-r))^m.
FormWitness trial_witness(const RadialProfile& profile, const Annulus& support, int n);

/// Eigen-based witness on one annulus.
FormWitness eigen_witness(const RadialProfile& profile, const Annulus& support, int n);

/// Re-assemble at twice the resolution and evaluate the same witness
/// function (linearly interpolated) in the refined form.
double witness_q_refined(const RadialProfile& profile, const FormWitness& w);

struct ScanPolicy {
    std::vector<Annulus> annuli;  // empty selects the default fractions of r_end
    int n = 256;
    double tol_eig_rel = 1e-8;    // relative to max diag(A) / max diag(M)

    static ScanPolicy defaults_for(const RadialProfile& profile);
};

enum class VerdictKind { CertifiedStable, InstabilityWitness, Inconclusive };

const char* to_string(VerdictKind v);

/// certified-stable when the pointwise certificate passes; instability-witness
/// when some annulus yields a sufficiently negative minimal eigenvalue of
/// (A - B, M); inconclusive otherwise. The certificate can never prove
/// instability and the annulus test can never prove stability; the verdict
/// records which piece of evidence was found.
struct StabilityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    Certificate certificate;
    std::optional<FormWitness> witness;
};

StabilityVerdict stability_verdict(const RadialProfile& profile, const ScanPolicy& policy);

} // namespace polystab

#endif
