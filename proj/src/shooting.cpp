#include "polystab/shooting.hpp"

#include "polystab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace polystab {
namespace {

Problem with_last(const Dimension& dim, const Eigen::VectorXd& head, double beta) {
    if (head.size() != dim.m - 1)
        throw ConfigError("head must carry a_0..a_{m-2} (" + std::to_string(dim.m - 1) +
                          " values), got " + std::to_string(head.size()));
    Problem p;
    p.dim = dim;
    p.a.resize(dim.m);
    p.a.head(dim.m - 1) = head;
    p.a[dim.m - 1] = beta;
    return p;
}

constexpr int kMaxExpansions = 200;

} // namespace

Classification classify(const Problem& p, IntegratorConfig cfg) {
    if (cfg.r_max <= 0.0) cfg = IntegratorConfig::defaults_for(p);
    cfg.u_cap = std::max(cfg.u_cap, std::max(p.a.size() ? p.a[0] : 0.0, 0.0) + 10.0);

    for (int attempt = 0; attempt < 3; ++attempt) {
        const RadialProfile prof = integrate(p, cfg);
        if (prof.status != ProfileStatus::Inconclusive) {
            Classification out;
            out.blow_up = prof.status == ProfileStatus::BlowUp;
            out.radius = out.blow_up ? prof.blowup_radius : cfg.r_max;
            out.evidence = {prof.status, cfg.r_max, cfg.u_cap,
                            out.blow_up ? prof.blowup_radius : 0.0};
            return out;
        }
        if (attempt == 0) {
            cfg.u_cap *= 2.0;
        } else {
            cfg.r_max *= 2.0;
        }
        cfg.max_steps *= 2;
    }
    throw ClassificationError("classification stayed inconclusive after escalation");
}

Bracket find_borderline(const Dimension& dim, const Eigen::VectorXd& head, double tol,
                        IntegratorConfig base) {
    if (dim.odd())
        throw ParityError("no global/blow-up dichotomy for odd m: every radial "
                          "solution is global");
    dim.validate();
    if (!(tol > 0.0)) throw ConfigError("bracket tolerance must be positive");

    IntegratorConfig cfg = base;
    auto run = [&](double beta) { return classify(with_last(dim, head, beta), cfg); };

    double lo = -1.0, hi = 1.0;
    Classification cl = run(lo), ch = run(hi);
    int expansions = 0;
    while (cl.blow_up) {
        if (++expansions > kMaxExpansions)
            throw ClassificationError("borderline expansion found no global endpoint");
        hi = lo;
        ch = cl;
        lo *= 4.0;
        cl = run(lo);
    }
    while (!ch.blow_up) {
        if (++expansions > kMaxExpansions)
            throw ClassificationError("borderline expansion found no blow-up endpoint");
        lo = hi;
        cl = ch;
        hi = (hi > 0.0) ? hi * 4.0 : hi / 4.0;
        if (hi <= lo) hi = lo + 4.0 * std::max(1.0, std::abs(lo));
        ch = run(hi);
    }

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // double resolution floor
        const Classification cm = run(mid);
        if (cm.blow_up) {
            hi = mid;
            ch = cm;
            // tighten the truncation when blow-up escapes toward the horizon
            if (cm.radius > 0.5 * cfg.r_max) cfg.r_max *= 2.0;
        } else {
            lo = mid;
            cl = cm;
        }
    }

    Bracket out;
    out.lo = lo;
    out.hi = hi;
    out.lo_evidence = cl.evidence;
    out.hi_evidence = ch.evidence;
    return out;
}

CertificateThreshold find_certificate_threshold(const Dimension& dim,
                                                const Eigen::VectorXd& head, double tol,
                                                IntegratorConfig base,
                                                const std::optional<Bracket>& borderline) {
    dim.require_supercritical("find_certificate_threshold");
    if (!(tol > 0.0)) throw ConfigError("threshold tolerance must be positive");
    if (!dim.odd() && !borderline)
        throw ConfigError("certificate threshold for even m requires a borderline bracket");

    CertificateThreshold out;

    auto passes = [&](double beta) {
        Problem p = with_last(dim, head, beta);
        IntegratorConfig cfg = base;
        cfg.r_max = std::max(base.r_max, IntegratorConfig::defaults_for(p).r_max);
        bool pass = false;
        for (int attempt = 0; attempt < 3; ++attempt) {
            const RadialProfile prof = integrate(p, cfg);
            if (prof.status != ProfileStatus::Global) { pass = false; break; }
            const Certificate cert = pointwise_certificate(prof);
            if (cert.verdict != CertVerdict::InconclusiveTail) {
                pass = cert.passed();
                break;
            }
            cfg.r_max *= 2.0;  // a tail supremum signals truncation; look further out
        }
        out.samples.push_back({beta, pass});
        return pass;
    };

    double lo, hi;
    if (!dim.odd()) {
        const double beta0_lo = borderline->lo;
        hi = beta0_lo - tol;
        if (passes(hi)) {
            // certified up to the borderline itself at this resolution
            out.bracket.lo = beta0_lo - tol;
            out.bracket.hi = beta0_lo;
            out.at_borderline = true;
            return out;
        }
        double gap = std::max(1.0, 0.5 * std::abs(hi));
        lo = hi - gap;
        int expansions = 0;
        while (!passes(lo)) {
            if (++expansions > kMaxExpansions)
                throw ClassificationError("certificate threshold expansion failed");
            gap *= 4.0;
            lo = hi - gap;
        }
    } else {
        lo = -1.0;
        hi = 1.0;
        int expansions = 0;
        while (!passes(lo)) {
            if (++expansions > kMaxExpansions)
                throw ClassificationError("certificate threshold expansion failed");
            hi = lo;
            lo *= 4.0;
        }
        while (passes(hi)) {
            if (++expansions > kMaxExpansions)
                throw ClassificationError("certificate threshold expansion failed");
            lo = hi;
            hi = (hi > 0.0) ? hi * 4.0 : hi / 4.0;
            if (hi <= lo) hi = lo + 4.0 * std::max(1.0, std::abs(lo));
        }
    }

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (passes(mid) ? lo : hi) = mid;
    }

    // the sampled pass/fail pattern must be sorted in beta
    std::vector<ThresholdSample> sorted = out.samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const ThresholdSample& a, const ThresholdSample& b) { return a.beta < b.beta; });
    bool seen_fail = false;
    for (const ThresholdSample& s : sorted) {
        if (!s.pass) seen_fail = true;
        else if (seen_fail) {
            std::ostringstream msg;
            msg << "certificate predicate non-monotone across samples:";
            for (const ThresholdSample& t : sorted)
                msg << " (" << t.beta << "," << (t.pass ? "pass" : "fail") << ")";
            throw ClassificationError(msg.str());
        }
    }

    out.bracket.lo = lo;
    out.bracket.hi = hi;
    return out;
}

} // namespace polystab
