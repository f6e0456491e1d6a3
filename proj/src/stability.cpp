#include "polystab/stability.hpp"

#include "polystab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace polystab {
namespace {

constexpr double kTailBand = 0.05;       // final fraction of the radius range
constexpr double kGolden = 0.6180339887498949;

// log objective u(r) + 2m ln r; the supremum of e^u r^{2m} is exp of its sup
double log_objective(const std::function<double(double)>& u, int m, double r) {
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return u(r) + 2.0 * m * std::log(r);
}

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

} // namespace

const char* to_string(CertVerdict v) {
    switch (v) {
        case CertVerdict::Pass: return "pass";
        case CertVerdict::Fail: return "fail";
        case CertVerdict::InconclusiveTail: return "inconclusive-tail";
    }
    return "?";
}

const char* to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::CertifiedStable: return "certified-stable";
        case VerdictKind::InstabilityWitness: return "instability-witness";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

Certificate pointwise_certificate_on(const Dimension& dim,
                                     const std::function<double(double)>& u,
                                     const std::vector<double>& nodes, double r_end) {
    Certificate cert;
    cert.gamma = stability_constant(dim);  // throws below the supercritical range

    const int m = dim.m;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] <= 0.0) continue;
        const double val = log_objective(u, m, nodes[i]);
        if (val > best) { best = val; best_i = i; }
    }
    if (!std::isfinite(best)) {
        // u is effectively -infinity everywhere on the grid
        cert.sup_value = 0.0;
        cert.sup_radius = nodes.size() > 1 ? nodes[1] : 0.0;
        cert.margin = cert.gamma.to_double();
        cert.verdict = CertVerdict::Pass;
        return cert;
    }

    const double lo = best_i > 0 ? std::max(nodes[best_i - 1], 0.0) : nodes[best_i];
    const double hi = best_i + 1 < nodes.size() ? nodes[best_i + 1] : nodes[best_i];
    double r_star = nodes[best_i];
    if (hi > lo) {
        auto f = [&](double r) { return log_objective(u, m, r); };
        const double cand = golden_max(f, std::max(lo, 1e-300), hi, 80);
        if (f(cand) > best) { r_star = cand; best = f(cand); }
    }

    cert.sup_radius = r_star;
    cert.sup_value = best > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(best);
    cert.margin = cert.gamma.to_double() - cert.sup_value;
    cert.tail_note = r_star >= (1.0 - kTailBand) * r_end;
    if (cert.tail_note)
        cert.verdict = CertVerdict::InconclusiveTail;
    else
        cert.verdict = cert.sup_value <= cert.gamma.to_double() ? CertVerdict::Pass
                                                                : CertVerdict::Fail;
    return cert;
}

Certificate pointwise_certificate(const RadialProfile& profile) {
    if (profile.status == ProfileStatus::BlowUp)
        throw NumericalError("pointwise certificate undefined for blow-up profiles");
    if (profile.status == ProfileStatus::Inconclusive)
        throw NumericalError("pointwise certificate requires a global profile");
    return pointwise_certificate_on(
        profile.dim, [&](double r) { return profile.u(r); }, profile.grid, profile.r_end());
}

FormOperators assemble_form_on(const Dimension& dim, const std::function<double(double)>& u,
                               const Annulus& support, int n) {
    dim.validate();
    if (n < 64) throw ConfigError("assemble_form requires n >= 64");
    if (!(support.r_a < support.r_b)) throw ConfigError("empty annulus");
    if (dim.N > 1 && !(support.r_a > 0.0))
        throw ConfigError("annulus must avoid the origin for N > 1");
    const int m = dim.m;
    if (n < 4 * m + 8) throw ConfigError("annulus grid too coarse for m layers");

    const double h = (support.r_b - support.r_a) / (n - 1);
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = support.r_a + i * h;

    // radial Laplacian on the uniform grid; first/last row stay zero, which
    // matches compactly supported test functions with m vanishing layers
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n - 1; ++i) {
        const double cr = dim.N > 1 ? (dim.N - 1) / r[i] : 0.0;
        L(i, i - 1) = 1.0 / (h * h) - cr / (2.0 * h);
        L(i, i) = -2.0 / (h * h);
        L(i, i + 1) = 1.0 / (h * h) + cr / (2.0 * h);
    }

    Eigen::VectorXd wt(n);  // trapezoid weights times r^{N-1}
    for (int i = 0; i < n; ++i)
        wt[i] = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * h * std::pow(r[i], dim.N - 1);

    Eigen::MatrixXd A_full;
    if (m % 2 == 0) {
        Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
        for (int j = 0; j < m / 2; ++j) K = L * K;
        A_full = K.transpose() * wt.asDiagonal() * K;
    } else {
        Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
        for (int j = 0; j < (m - 1) / 2; ++j) K = L * K;
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n - 1, n);
        Eigen::VectorXd wg(n - 1);
        for (int i = 0; i < n - 1; ++i) {
            G(i, i) = -1.0 / h;
            G(i, i + 1) = 1.0 / h;
            wg[i] = h * std::pow(0.5 * (r[i] + r[i + 1]), dim.N - 1);
        }
        Eigen::MatrixXd KG = G * K;
        A_full = KG.transpose() * wg.asDiagonal() * KG;
    }

    FormOperators out;
    const int lo = m, hi = n - 1 - m;
    const int nf = hi - lo + 1;
    out.A = A_full.block(lo, lo, nf, nf);
    out.B.resize(nf);
    out.M.resize(nf);
    out.radii.resize(nf);
    for (int i = 0; i < nf; ++i) {
        const double ri = r[lo + i];
        out.radii[i] = ri;
        out.M[i] = wt[lo + i];
        out.B[i] = std::exp(std::min(u(ri), 700.0)) * wt[lo + i];
    }
    out.h = h;
    out.n_total = n;
    return out;
}

FormOperators assemble_form(const RadialProfile& profile, const Annulus& support, int n) {
    if (support.r_b > profile.r_end() * (1.0 + 1e-12))
        throw RangeError("annulus extends past the profile");
    return assemble_form_on(profile.dim, [&](double r) { return profile.u(r); }, support, n);
}

EigResult min_eig(const Eigen::MatrixXd& A, const Eigen::VectorXd& B_diag) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B_diag.size() != n) throw ConfigError("min_eig shape mismatch");
    if (B_diag.minCoeff() <= 0.0) throw ConfigError("min_eig requires positive B");

    const Eigen::VectorXd s = B_diag.cwiseSqrt();
    Eigen::MatrixXd C = s.cwiseInverse().asDiagonal() * A * s.cwiseInverse().asDiagonal();
    C = 0.5 * (C + C.transpose().eval());  // kill asymmetric round-off

    auto dense_solve = [&]() -> EigResult {
        if (n > 2048) throw NumericalError("min_eig: inverse iteration broke down, n > 2048");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        if (es.info() != Eigen::Success)
            throw NumericalError("min_eig: dense eigensolver failed");
        EigResult out;
        out.rayleigh = es.eigenvalues()[0];
        out.phi = s.cwiseInverse().asDiagonal() * es.eigenvectors().col(0);
        out.phi /= out.phi.cwiseAbs().maxCoeff();
        out.dense_fallback = true;
        return out;
    };

    // Gershgorin lower bound keeps the shift strictly below the spectrum.
    double gl = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) off += std::abs(C(i, j));
        gl = std::min(gl, C(i, i) - off);
    }
    const double scale = C.cwiseAbs().maxCoeff();
    double sigma = gl - 1e-8 * scale - 1e-300;

    std::mt19937_64 rng(20240915u);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] += unif(rng);
    x.normalize();

    double rho = x.dot(C * x);
    for (int phase = 0; phase < 3; ++phase) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(C - sigma * Eigen::MatrixXd::Identity(n, n));
        if (ldlt.info() != Eigen::Success) return dense_solve();
        bool converged = false;
        for (int it = 0; it < 60; ++it) {
            Eigen::VectorXd y = ldlt.solve(x);
            const double ny = y.norm();
            if (!std::isfinite(ny) || ny == 0.0) return dense_solve();
            x = y / ny;
            rho = x.dot(C * x);
            const double resid = (C * x - rho * x).norm();
            if (resid <= 1e-12 * std::max(scale, std::abs(rho))) { converged = true; break; }
        }
        if (converged) {
            EigResult out;
            out.rayleigh = rho;
            out.phi = s.cwiseInverse().asDiagonal() * x;
            out.phi /= out.phi.cwiseAbs().maxCoeff();
            return out;
        }
        // refine the shift toward the current Rayleigh quotient and retry
        sigma = rho - 1e-4 * std::max(scale, std::abs(rho));
    }
    return dense_solve();
}

FormWitness trial_witness(const RadialProfile& profile, const Annulus& support, int n) {
    const FormOperators ops = assemble_form(profile, support, n);
    const int m = profile.dim.m;
    Eigen::VectorXd phi(ops.radii.size());
    const double w = support.r_b - support.r_a;
    for (std::size_t i = 0; i < ops.radii.size(); ++i) {
        const double t = (ops.radii[i] - support.r_a) * (support.r_b - ops.radii[i]) / (w * w);
        phi[i] = std::pow(std::max(t, 0.0), m);
    }
    phi /= phi.cwiseAbs().maxCoeff();
    FormWitness out;
    out.support = support;
    out.radii = ops.radii;
    out.phi = phi;
    out.q_value = phi.dot(ops.A * phi) - phi.dot(ops.B.cwiseProduct(phi));
    out.rayleigh = out.q_value / phi.dot(ops.M.cwiseProduct(phi));
    out.kind = FormWitness::Kind::Trial;
    out.n = n;
    return out;
}

FormWitness eigen_witness(const RadialProfile& profile, const Annulus& support, int n) {
    const FormOperators ops = assemble_form(profile, support, n);
    Eigen::MatrixXd AmB = ops.A;
    AmB.diagonal() -= ops.B;
    const EigResult eig = min_eig(AmB, ops.M);
    FormWitness out;
    out.support = support;
    out.radii = ops.radii;
    out.phi = eig.phi;
    out.q_value = eig.phi.dot(AmB * eig.phi);
    out.rayleigh = eig.rayleigh;
    out.kind = FormWitness::Kind::Eigen;
    out.n = n;
    return out;
}

double witness_q_refined(const RadialProfile& profile, const FormWitness& w) {
    const int n2 = 2 * w.n;
    const FormOperators ops = assemble_form(profile, w.support, n2);
    // same function, linearly interpolated onto the refined free nodes
    Eigen::VectorXd phi2(ops.radii.size());
    for (std::size_t i = 0; i < ops.radii.size(); ++i) {
        const double r = ops.radii[i];
        if (r <= w.radii.front() || r >= w.radii.back()) {
            phi2[i] = 0.0;
            continue;
        }
        const auto it = std::upper_bound(w.radii.begin(), w.radii.end(), r);
        const std::size_t j = static_cast<std::size_t>(it - w.radii.begin()) - 1;
        const double t = (r - w.radii[j]) / (w.radii[j + 1] - w.radii[j]);
        phi2[i] = (1.0 - t) * w.phi[j] + t * w.phi[j + 1];
    }
    return phi2.dot(ops.A * phi2) - phi2.dot(ops.B.cwiseProduct(phi2));
}

ScanPolicy ScanPolicy::defaults_for(const RadialProfile& profile) {
    ScanPolicy p;
    const double R = profile.r_end();
    p.annuli = {{0.02 * R, 0.30 * R}, {0.05 * R, 0.50 * R}, {0.10 * R, 0.70 * R},
                {0.20 * R, 0.90 * R}, {0.40 * R, 0.95 * R}, {0.02 * R, 0.95 * R}};
    return p;
}

StabilityVerdict stability_verdict(const RadialProfile& profile, const ScanPolicy& policy) {
    if (!profile.global())
        throw NumericalError("stability verdict requires a global profile");
    StabilityVerdict out;
    out.certificate = pointwise_certificate(profile);
    if (out.certificate.passed()) {
        out.kind = VerdictKind::CertifiedStable;
        return out;
    }

    const std::vector<Annulus>& annuli =
        policy.annuli.empty() ? ScanPolicy::defaults_for(profile).annuli : policy.annuli;
    std::optional<FormWitness> best;
    for (const Annulus& ann : annuli) {
        const FormOperators ops = assemble_form(profile, ann, policy.n);
        Eigen::MatrixXd AmB = ops.A;
        AmB.diagonal() -= ops.B;
        const EigResult eig = min_eig(AmB, ops.M);
        const double tol_eig =
            policy.tol_eig_rel * ops.A.diagonal().maxCoeff() / ops.M.maxCoeff();
        const double q = eig.phi.dot(AmB * eig.phi);
        if (eig.rayleigh < -tol_eig && q < 0.0) {
            FormWitness w;
            w.support = ann;
            w.radii = ops.radii;
            w.phi = eig.phi;
            w.q_value = q;
            w.rayleigh = eig.rayleigh;
            w.kind = FormWitness::Kind::Eigen;
            w.n = policy.n;
            if (!best || w.rayleigh < best->rayleigh) best = std::move(w);
        }
    }
    if (best) {
        out.kind = VerdictKind::InstabilityWitness;
        out.witness = std::move(best);
    } else {
        out.kind = VerdictKind::Inconclusive;
    }
    return out;
}

} // namespace polystab
