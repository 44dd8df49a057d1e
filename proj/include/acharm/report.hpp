#pragma once

// Verification runs and machine-readable reports. Machine formats (json,
// csv) are byte-deterministic for a fixed RunSpec: floats print with 17
// significant digits and wall-clock time appears only in the text format.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "acharm/catalog.hpp"
#include "acharm/config.hpp"
#include "acharm/identities.hpp"
#include "acharm/submersion.hpp"
#include "acharm/warp_suite.hpp"

namespace acharm {

struct RunSpec {
    std::string target;  // catalog key or config path
    Params params;
    std::vector<std::string> checks;  // empty = all applicable
    int points = 20;
    std::uint64_t seed = 42;
    FDConfig fd;
    double tol_scale = 1.0;
    double perturb_eps = 0.0;
    std::uint64_t perturb_seed = 42;
};

struct RunSummary {
    std::string target;
    std::string kind;  // almost_contact | hermitian | submersion
    int points = 0;
    std::uint64_t seed = 42;
    FDConfig fd;
    double tol_scale = 1.0;
    bool has_flags = false;
    StructureClassification flags;
    bool has_harmonic = false;
    HarmonicityReport harmonic;
    bool has_kappa_mu = false;
    KappaMuFit kappa_mu;
    bool all_pass = true;
    double runtime_seconds = 0.0;  // text output only
};

struct ResidualReport {
    RunSummary summary;
    std::vector<CheckRow> checks;
};

namespace detail {

inline bool is_config_target(const std::string& target) {
    if (target.size() > 5 && target.substr(target.size() - 5) == ".json") return true;
    std::error_code ec;
    return std::filesystem::exists(target, ec);
}

inline void filter_rows(std::vector<CheckRow>& rows, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    std::vector<CheckRow> kept;
    for (auto& r : rows)
        for (const auto& id : ids)
            if (r.id == id) {
                kept.push_back(r);
                break;
            }
    rows = std::move(kept);
}

inline std::vector<std::string> known_check_ids() {
    std::vector<std::string> ids;
    for (const auto& c : identity_registry()) ids.push_back(c.id);
    for (const char* id : {"3.1", "rsub", "L3.1", "3.2", "L3.2", "sub_h0", "L3.4", "T3.1_rel",
                           "T3.1_rel_4n", "T3.1_verdicts"})
        ids.emplace_back(id);
    for (const char* id : {"W.tau_xi", "W.T_phi", "3.7", "3.3", "3.4", "3.5", "L3.3.1", "L3.3.2",
                           "3.9", "P3.2", "3.10a", "3.10b", "3.11", "L3.5a", "L3.5b",
                           "W.T_phi_rel", "W.lap_rel"})
        ids.emplace_back(id);
    for (const char* id : {"H.axioms", "H.eq2", "H.deltaJ"}) ids.emplace_back(id);
    return ids;
}

inline void require_known_checks(const std::vector<std::string>& requested) {
    const auto known = known_check_ids();
    for (const auto& id : requested)
        if (std::find(known.begin(), known.end(), id) == known.end())
            throw UnknownEntry("unknown check id '" + id + "'");
}

}  // namespace detail

inline ResidualReport run_verification(const RunSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::require_known_checks(spec.checks);

    ResidualReport rep;
    rep.summary.target = spec.target;
    rep.summary.points = spec.points;
    rep.summary.seed = spec.seed;
    rep.summary.fd = spec.fd;
    rep.summary.tol_scale = spec.tol_scale;

    const bool config_target = detail::is_config_target(spec.target);
    const CatalogEntry* entry = nullptr;
    if (!config_target) entry = &find_entry(spec.target);

    if (entry && entry->kind == "hermitian") {
        if (spec.perturb_eps != 0.0)
            throw ParamOutOfRange("--perturb applies to almost contact targets only");
        const AlmostHermitianStructure h = catalog_hermitian(spec.target, spec.params);
        rep.summary.kind = "hermitian";
        const auto pts = sample_points(h.chart, spec.points, spec.seed, spec.fd);
        Accumulator axioms, eq2, dj;
        const auto res = validate_hermitian(h, pts, std::numeric_limits<double>::infinity());
        for (const auto& [k, v] : res) {
            (void)k;
            axioms.add(v);
        }
        for (const auto& p : pts) {
            const Mat g = metric_at(h.chart, p);
            const Mat gi = spd_inverse(g);
            eq2.add(endo_norm_g(g, gi, hermitian_harmonic_residual(h, p, spec.fd)));
            dj.add(norm_g(g, hermitian_delta_J(h, p, spec.fd)));
        }
        rep.checks.push_back(make_row("H.axioms", "structure axioms", "J^2 = -I and J isometric",
                                      TolClass::algebraic, axioms, spec.fd, spec.tol_scale));
        rep.checks.push_back(make_row("H.eq2", "(1.2) analogue",
                                      "[nabla*nabla J, J] = 0 (harmonic almost complex structure)",
                                      TolClass::d2, eq2, spec.fd, spec.tol_scale));
        rep.checks.push_back(make_row("H.deltaJ", "cosymplectic test", "delta J (co-differential trace)",
                                      TolClass::d1, dj, spec.fd, spec.tol_scale,
                                      /*informational=*/true));
        detail::filter_rows(rep.checks, spec.checks);
    } else if (entry && entry->kind == "submersion") {
        if (spec.perturb_eps != 0.0)
            throw ParamOutOfRange("--perturb applies to almost contact targets only");
        const SubmersionSetup setup = catalog_submersion(spec.target, spec.params);
        rep.summary.kind = "submersion";
        const auto pts = sample_points(setup.total.chart, spec.points, spec.seed, spec.fd);
        rep.checks = submersion_suite(setup, pts, spec.fd, spec.seed, spec.tol_scale);
        detail::filter_rows(rep.checks, spec.checks);
        rep.summary.has_flags = true;
        rep.summary.flags = classify(setup.total, pts, spec.fd);
        rep.summary.has_harmonic = true;
        rep.summary.harmonic =
            harmonic_report(setup.total, pts, spec.fd, rep.summary.flags.is_contact_metric);
    } else {
        AlmostContactStructure s = [&] {
            FDConfig fd_local = spec.fd;
            if (config_target) {
                AlmostContactStructure cs = load_structure_file(spec.target, &fd_local);
                return cs;
            }
            return catalog_structure(spec.target, spec.params);
        }();
        if (spec.perturb_eps != 0.0) s = perturb(s, spec.perturb_eps, spec.perturb_seed);
        rep.summary.kind = "almost_contact";
        rep.summary.target = s.name;
        const auto pts = sample_points(s.chart, spec.points, spec.seed, spec.fd);
        const StructureClassification cls = classify(s, pts, spec.fd);
        rep.summary.has_flags = true;
        rep.summary.flags = cls;
        rep.checks = run_identities(s, cls, pts, spec.fd, spec.seed, spec.tol_scale, spec.checks);
        if (entry && (entry->key == "kenmotsu" || entry->key == "warped_base_line" ||
                      entry->key == "warped_line_fiber") &&
            spec.perturb_eps == 0.0) {
            auto wrows = warp_theorem_suite(catalog_warp_spec(entry->key, spec.params), pts,
                                            spec.fd, spec.seed, spec.tol_scale);
            detail::filter_rows(wrows, spec.checks);
            rep.checks.insert(rep.checks.end(), wrows.begin(), wrows.end());
        }
        rep.summary.has_harmonic = true;
        rep.summary.harmonic = harmonic_report(s, pts, spec.fd, cls.is_contact_metric);
        if (cls.is_contact_metric) {
            rep.summary.has_kappa_mu = true;
            rep.summary.kappa_mu = kappa_mu_fit(s, pts, spec.fd, spec.seed);
        }
    }

    rep.summary.all_pass = all_gating_pass(rep.checks);
    rep.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------
// emitters

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline const char* json_bool(bool b) { return b ? "true" : "false"; }

}  // namespace detail

inline void emit_json(const ResidualReport& rep, std::ostream& os) {
    using detail::fmt17;
    using detail::json_bool;
    using detail::json_escape;
    const RunSummary& s = rep.summary;
    os << "{\n";
    os << "  \"target\": \"" << json_escape(s.target) << "\",\n";
    os << "  \"kind\": \"" << s.kind << "\",\n";
    os << "  \"points\": " << s.points << ",\n";
    os << "  \"seed\": " << s.seed << ",\n";
    os << "  \"fd\": {\"step\": " << fmt17(s.fd.step) << ", \"order\": " << s.fd.order
       << ", \"tol_algebraic\": " << fmt17(s.fd.tol_algebraic)
       << ", \"tol_d1\": " << fmt17(s.fd.tol_d1) << ", \"tol_d2\": " << fmt17(s.fd.tol_d2)
       << "},\n";
    os << "  \"tol_scale\": " << fmt17(s.tol_scale) << ",\n";
    if (s.has_flags) {
        os << "  \"flags\": {\"contact_metric\": " << json_bool(s.flags.is_contact_metric)
           << ", \"K_contact\": " << json_bool(s.flags.is_K_contact)
           << ", \"H_contact\": " << json_bool(s.flags.is_H_contact) << ", \"residuals\": {";
        bool first = true;
        for (const auto& [k, v] : s.flags.residuals) {
            if (!first) os << ", ";
            first = false;
            os << "\"" << json_escape(k) << "\": " << fmt17(v);
        }
        os << "}},\n";
    }
    if (s.has_harmonic) {
        const HarmonicityReport& h = s.harmonic;
        os << "  \"harmonic\": {\"eq1\": " << json_bool(h.eq1) << ", \"eq2\": " << json_bool(h.eq2)
           << ", \"harmonic\": " << json_bool(h.harmonic())
           << ", \"first_eq_residual\": " << fmt17(h.first_eq_residual)
           << ", \"second_eq_residual\": " << fmt17(h.second_eq_residual);
        if (h.contact_metric_route_evaluated) {
            os << ", \"alt_first_eq_residual\": " << fmt17(h.alt_first_eq_residual)
               << ", \"rho_star_symmetry_defect\": " << fmt17(h.rho_star_symmetry_defect)
               << ", \"theorem_route_agrees\": " << json_bool(h.theorem_route_agrees);
        }
        os << "},\n";
    }
    if (s.has_kappa_mu) {
        const KappaMuFit& f = s.kappa_mu;
        os << "  \"kappa_mu\": {\"kappa\": " << fmt17(f.kappa) << ", \"mu\": " << fmt17(f.mu)
           << ", \"mu_identifiable\": " << json_bool(f.mu_identifiable)
           << ", \"residual\": " << fmt17(f.residual) << ", \"samples\": " << f.samples << "},\n";
    }
    os << "  \"checks\": [\n";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const CheckRow& r = rep.checks[i];
        os << "    {\"id\": \"" << json_escape(r.id) << "\", \"ref\": \"" << json_escape(r.ref)
           << "\", \"description\": \"" << json_escape(r.description) << "\", \"class\": \""
           << tol_class_name(r.tol_class) << "\", \"applicable\": " << json_bool(r.applicable)
           << ", \"informational\": " << json_bool(r.informational) << ", \"samples\": " << r.samples
           << ", \"max_residual\": " << fmt17(r.max_residual)
           << ", \"mean_residual\": " << fmt17(r.mean_residual)
           << ", \"tolerance\": " << fmt17(r.tolerance) << ", \"pass\": " << json_bool(r.pass)
           << "}" << (i + 1 < rep.checks.size() ? "," : "") << "\n";
    }
    os << "  ],\n";
    os << "  \"pass\": " << json_bool(s.all_pass) << "\n";
    os << "}\n";
}

inline void emit_csv(const ResidualReport& rep, std::ostream& os) {
    using detail::fmt17;
    os << "id,applicable,samples,max_residual,mean_residual,tolerance,pass\n";
    for (const CheckRow& r : rep.checks) {
        os << r.id << "," << (r.applicable ? "true" : "false") << "," << r.samples << ","
           << fmt17(r.max_residual) << "," << fmt17(r.mean_residual) << "," << fmt17(r.tolerance)
           << "," << (r.pass ? "true" : "false") << "\n";
    }
}

inline void emit_text(const ResidualReport& rep, std::ostream& os) {
    const RunSummary& s = rep.summary;
    char line[256];
    os << "target: " << s.target << "  (" << s.kind << ")\n";
    std::snprintf(line, sizeof line, "points: %d  seed: %llu  step: %g  order: %d  tol_scale: %g\n",
                  s.points, static_cast<unsigned long long>(s.seed), s.fd.step, s.fd.order,
                  s.tol_scale);
    os << line;
    if (s.has_flags) {
        std::snprintf(line, sizeof line, "flags: contact_metric=%s K_contact=%s H_contact=%s\n",
                      s.flags.is_contact_metric ? "yes" : "no", s.flags.is_K_contact ? "yes" : "no",
                      s.flags.is_H_contact ? "yes" : "no");
        os << line;
    }
    if (s.has_harmonic) {
        std::snprintf(line, sizeof line,
                      "harmonic: %s  (eq1 %.3e, eq2 %.3e)\n", s.harmonic.harmonic() ? "yes" : "no",
                      s.harmonic.first_eq_residual, s.harmonic.second_eq_residual);
        os << line;
    }
    if (s.has_kappa_mu) {
        if (s.kappa_mu.mu_identifiable)
            std::snprintf(line, sizeof line, "kappa-mu fit: kappa=%.9g mu=%.9g residual=%.3e\n",
                          s.kappa_mu.kappa, s.kappa_mu.mu, s.kappa_mu.residual);
        else
            std::snprintf(line, sizeof line,
                          "kappa-mu fit: kappa=%.9g mu unidentifiable (h ~ 0) residual=%.3e\n",
                          s.kappa_mu.kappa, s.kappa_mu.residual);
        os << line;
    }
    os << "\n";
    std::snprintf(line, sizeof line, "%-16s %-9s %8s %13s %13s %10s  %s\n", "id", "class",
                  "samples", "max", "mean", "tol", "status");
    os << line;
    for (const CheckRow& r : rep.checks) {
        const char* status = !r.applicable        ? "n/a"
                             : r.informational    ? (r.pass ? "info-pass" : "info-fail")
                             : r.pass             ? "pass"
                                                  : "FAIL";
        std::snprintf(line, sizeof line, "%-16s %-9s %8ld %13.4e %13.4e %10.1e  %s\n", r.id.c_str(),
                      tol_class_name(r.tol_class), r.samples, r.max_residual, r.mean_residual,
                      r.tolerance, status);
        os << line;
    }
    std::snprintf(line, sizeof line, "\noverall: %s   (runtime %.2fs)\n",
                  s.all_pass ? "all checks passed" : "FAILURES present", s.runtime_seconds);
    os << line;
}

inline void emit_report(const ResidualReport& rep, const std::string& format, std::ostream& os) {
    if (format == "json")
        emit_json(rep, os);
    else if (format == "csv")
        emit_csv(rep, os);
    else if (format == "text")
        emit_text(rep, os);
    else
        throw ParamOutOfRange("unknown report format '" + format + "'");
}

}  // namespace acharm
