#include "polystab/io.hpp"

#include "polystab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace polystab {
namespace io {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& body) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << body;
}

void write_json_file(const std::filesystem::path& p, const Json& doc) {
    write_text_file(p, doc.dump(2) + "\n");
}

bool validate_schema(const Json& schema, const Json& doc, std::string* err) {
    auto fail = [&](const std::string& msg) {
        if (err) *err = msg;
        return false;
    };
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        const bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                        (t == "string" && doc.is_string()) ||
                        (t == "number" && doc.is_number()) ||
                        (t == "integer" && doc.is_number_integer()) ||
                        (t == "boolean" && doc.is_boolean()) || (t == "null" && doc.is_null());
        if (!ok) return fail("expected type " + t + ", got " + std::string(doc.type_name()));
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& v : schema["enum"])
            if (v == doc) { found = true; break; }
        if (!found) return fail("value not in enum: " + doc.dump());
    }
    if (schema.contains("required")) {
        for (const auto& k : schema["required"])
            if (!doc.contains(k.get<std::string>()))
                return fail("missing required key " + k.get<std::string>());
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (!doc.contains(key)) continue;
            std::string inner;
            if (!validate_schema(sub, doc.at(key), &inner))
                return fail(key + ": " + inner);
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (const auto& el : doc) {
            std::string inner;
            if (!validate_schema(schema["items"], el, &inner)) return fail("items: " + inner);
        }
    }
    return true;
}

} // namespace io

Json to_json(const Evidence& ev) {
    Json j;
    j["status"] = to_string(ev.status);
    j["r_max_used"] = ev.r_max_used;
    j["u_cap_used"] = ev.u_cap_used;
    if (ev.status == ProfileStatus::BlowUp) j["blowup_radius"] = ev.radius;
    return j;
}

Json to_json(const Certificate& c) {
    Json j;
    j["gamma_exact"] = c.gamma.str();
    j["gamma"] = c.gamma.to_double();
    j["sup_value"] = c.sup_value;
    j["sup_radius"] = c.sup_radius;
    j["margin"] = c.margin;
    j["tail_note"] = c.tail_note;
    j["verdict"] = to_string(c.verdict);
    return j;
}

Json to_json(const Bracket& b) {
    Json j;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["width"] = b.width();
    j["lo_evidence"] = to_json(b.lo_evidence);
    j["hi_evidence"] = to_json(b.hi_evidence);
    return j;
}

Json to_json(const CertificateThreshold& t) {
    Json j;
    j["lo"] = t.bracket.lo;
    j["hi"] = t.bracket.hi;
    j["width"] = t.bracket.width();
    j["at_borderline"] = t.at_borderline;
    Json samples = Json::array();
    for (const auto& s : t.samples) samples.push_back({{"beta", s.beta}, {"pass", s.pass}});
    j["samples"] = samples;
    return j;
}

Json to_json(const FormWitness& w) {
    Json j;
    j["r_a"] = w.support.r_a;
    j["r_b"] = w.support.r_b;
    j["kind"] = w.kind == FormWitness::Kind::Eigen ? "eigen" : "trial";
    j["n"] = w.n;
    j["q_value"] = w.q_value;
    j["rayleigh"] = w.rayleigh;
    return j;
}

Json to_json(const StabilityVerdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["certificate"] = to_json(v.certificate);
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

Json to_json(const OddTailRecipe& r) {
    Json j;
    j["head"] = std::vector<double>(r.head.data(), r.head.data() + r.head.size());
    j["sup_value"] = r.sup_value;
    j["sup_radius"] = r.sup_radius;
    j["chosen_a_last"] = r.chosen_a_last;
    return j;
}

Json to_json(const EvenTailRecipe& r) {
    Json j;
    j["head"] = std::vector<double>(r.head.data(), r.head.data() + r.head.size());
    j["sup_value"] = r.sup_value;
    j["sup_radius"] = r.sup_radius;
    j["tail_value"] = r.tail_value;
    j["beta0_used"] = r.beta0_used;
    j["chosen_a_last"] = r.chosen_a_last;
    return j;
}

Json to_json(const ThresholdScan& s) {
    Json j;
    j["m"] = s.m;
    j["N0"] = s.N0;
    j["window_end"] = s.window_end;
    j["ratio_increasing"] = s.ratio_increasing;
    Json rows = Json::array();
    for (const auto& row : s.table) {
        rows.push_back({{"N", row.N},
                        {"p_exact", row.p.str()},
                        {"lambda_exact", row.lambda.str()},
                        {"p", row.p.to_double()},
                        {"lambda", row.lambda.to_double()},
                        {"holds", row.holds}});
    }
    j["table"] = rows;
    return j;
}

Json to_json(const IteratedBoundsReport& r) {
    Json j;
    auto row = [](const BoundRow& b) {
        return Json{{"k", b.k},
                    {"worst_margin", b.worst_margin},
                    {"worst_r", b.worst_r},
                    {"holds", b.holds}};
    };
    Json rows = Json::array();
    for (const auto& b : r.laplacian_bounds) rows.push_back(row(b));
    j["laplacian_bounds"] = rows;
    j["final_bound"] = row(r.final_bound);
    j["gradient_bound"] = row(r.gradient_bound);
    j["all_hold"] = r.all_hold;
    return j;
}

Json to_json(const ComparisonReport& r) {
    Json j;
    j["all_hold"] = r.all_hold;
    j["min_scaled_margin"] = r.min_scaled_margin;
    j["worst_k"] = r.worst_k;
    j["worst_r"] = r.worst_r;
    j["nodes_checked"] = r.nodes_checked;
    return j;
}

Json profile_metadata(const RadialProfile& p, const IntegratorConfig& cfg) {
    Json j;
    j["m"] = p.dim.m;
    j["N"] = p.dim.N;
    j["a"] = std::vector<double>(p.a.data(), p.a.data() + p.a.size());
    j["config"] = {{"r_max", cfg.r_max},
                   {"rel_tol", cfg.rel_tol},
                   {"abs_tol", cfg.abs_tol},
                   {"u_cap", cfg.u_cap},
                   {"r_taylor", cfg.taylor_radius()},
                   {"max_steps", cfg.max_steps}};
    j["status"] = to_string(p.status);
    if (p.status == ProfileStatus::BlowUp) {
        j["blowup_radius"] = p.blowup_radius;
        j["blowup_halfwidth"] = p.blowup_halfwidth;
    }
    j["nodes"] = p.grid.size();
    j["r_end"] = p.r_end();
    return j;
}

Json iterate_metadata(const SystemIterate& it, const AdmissibleConstants& consts) {
    Json j;
    j["m"] = it.dim.m;
    j["N"] = it.dim.N;
    j["C"] = it.C;
    j["cp"] = consts.cp;
    j["cp_prime"] = consts.cp_prime;
    j["cp_tilde"] = consts.cp_tilde;
    j["R"] = it.grid.back();
    j["nodes"] = it.grid.size();
    j["iterations"] = it.iter_count;
    j["residual"] = it.residual;
    j["monotone_ok"] = it.monotone_ok;
    j["sup_change"] = it.sup_change_history;
    j["initial_data"] = [&] {
        const Eigen::VectorXd a = it.extract_initial_data();
        return std::vector<double>(a.data(), a.data() + a.size());
    }();
    return j;
}

void write_witness_csv(std::ostream& os, const FormWitness& w) {
    os << "r,phi\n";
    for (std::size_t i = 0; i < w.radii.size(); ++i)
        os << io::fmt(w.radii[i]) << ',' << io::fmt(w.phi[i]) << '\n';
}

} // namespace polystab
