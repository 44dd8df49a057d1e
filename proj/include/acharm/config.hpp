#pragma once

// JSON structure configs: coordinates, domain bounds, expression-valued
// metric / xi / phi entries and named parameters, compiled through the
// expression language into chart fields. eta is derived as g(xi, .).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acharm/almost_contact.hpp"
#include "acharm/expr.hpp"

namespace acharm {

struct StructureConfig {
    std::string name;
    int dim = 0;
    std::vector<std::string> coordinates;
    Vec domain_lo, domain_hi;
    std::vector<std::string> parameter_names;
    Vec parameter_values;
    std::vector<std::vector<std::string>> metric;  // dim x dim expressions
    std::vector<std::string> xi;                   // dim expressions
    std::vector<std::vector<std::string>> phi;     // dim x dim expressions
    FDConfig fd;
    bool has_fd_overrides = false;
};

namespace detail {

inline std::string require_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ConfigError(std::string("config: missing or non-string field '") + key + "'");
    return j[key].get<std::string>();
}

inline std::vector<std::vector<std::string>> expression_matrix(const nlohmann::json& j,
                                                               const char* key, int dim) {
    if (!j.contains(key) || !j[key].is_array() || static_cast<int>(j[key].size()) != dim)
        throw ConfigError(std::string("config: '") + key + "' must be a " + std::to_string(dim) +
                          "-row matrix of expression strings");
    std::vector<std::vector<std::string>> out;
    for (const auto& row : j[key]) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw ConfigError(std::string("config: '") + key + "' rows must have length " +
                              std::to_string(dim));
        std::vector<std::string> r;
        for (const auto& cell : row) {
            if (!cell.is_string())
                throw ConfigError(std::string("config: '") + key + "' entries must be strings");
            r.push_back(cell.get<std::string>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

inline StructureConfig parse_structure_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    StructureConfig cfg;
    cfg.name = j.contains("name") ? detail::require_string(j, "name") : "config_structure";
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ConfigError("config: missing integer field 'dim'");
    cfg.dim = j["dim"].get<int>();
    if (cfg.dim < 3 || cfg.dim % 2 == 0)
        throw ConfigError("config: 'dim' must be an odd integer >= 3");

    if (!j.contains("coordinates") || !j["coordinates"].is_array() ||
        static_cast<int>(j["coordinates"].size()) != cfg.dim)
        throw ConfigError("config: 'coordinates' must list dim coordinate names");
    for (const auto& c : j["coordinates"]) {
        if (!c.is_string()) throw ConfigError("config: coordinate names must be strings");
        cfg.coordinates.push_back(c.get<std::string>());
    }

    if (!j.contains("domain") || !j["domain"].is_object())
        throw ConfigError("config: 'domain' must map each coordinate to [lo, hi]");
    for (const auto& name : cfg.coordinates) {
        if (!j["domain"].contains(name))
            throw ConfigError("config: 'domain' is missing bounds for coordinate '" + name + "'");
        const auto& b = j["domain"][name];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw ConfigError("config: domain bounds for '" + name + "' must be [lo, hi]");
        const double lo = b[0].get<double>(), hi = b[1].get<double>();
        if (!(lo < hi)) throw ConfigError("config: empty domain interval for '" + name + "'");
        cfg.domain_lo.push_back(lo);
        cfg.domain_hi.push_back(hi);
    }

    if (j.contains("parameters")) {
        if (!j["parameters"].is_object())
            throw ConfigError("config: 'parameters' must be a name -> number map");
        for (const auto& [k, v] : j["parameters"].items()) {
            if (!v.is_number())
                throw ConfigError("config: parameter '" + k + "' must be a number");
            cfg.parameter_names.push_back(k);
            cfg.parameter_values.push_back(v.get<double>());
        }
    }

    cfg.metric = detail::expression_matrix(j, "metric", cfg.dim);
    cfg.phi = detail::expression_matrix(j, "phi", cfg.dim);
    if (!j.contains("xi") || !j["xi"].is_array() || static_cast<int>(j["xi"].size()) != cfg.dim)
        throw ConfigError("config: 'xi' must be a vector of dim expression strings");
    for (const auto& cell : j["xi"]) {
        if (!cell.is_string()) throw ConfigError("config: 'xi' entries must be strings");
        cfg.xi.push_back(cell.get<std::string>());
    }

    if (j.contains("fd")) {
        const auto& f = j["fd"];
        cfg.has_fd_overrides = true;
        if (f.contains("step")) cfg.fd.step = f["step"].get<double>();
        if (f.contains("order")) cfg.fd.order = f["order"].get<int>();
        if (f.contains("tolerance_algebraic")) cfg.fd.tol_algebraic = f["tolerance_algebraic"].get<double>();
        if (f.contains("tolerance_d1")) cfg.fd.tol_d1 = f["tolerance_d1"].get<double>();
        if (f.contains("tolerance_d2")) cfg.fd.tol_d2 = f["tolerance_d2"].get<double>();
        if (cfg.fd.step <= 0.0 || (cfg.fd.order != 2 && cfg.fd.order != 4))
            throw ConfigError("config: fd.step must be positive and fd.order 2 or 4");
        if (!(cfg.fd.tol_algebraic > 0.0 && cfg.fd.tol_algebraic <= cfg.fd.tol_d1 &&
              cfg.fd.tol_d1 <= cfg.fd.tol_d2))
            throw ConfigError("config: tolerances must be positive and ordered");
    }
    return cfg;
}

// Compile a config into a structure; validates the axioms at 8 seeded
// points before returning (AxiomViolation passes through).
inline AlmostContactStructure load_structure_config(const StructureConfig& cfg) {
    const int d = cfg.dim;
    std::vector<std::string> slots = cfg.coordinates;
    for (const auto& n : cfg.parameter_names) {
        for (const auto& c : cfg.coordinates)
            if (c == n)
                throw ConfigError("config: parameter '" + n + "' shadows a coordinate name");
        slots.push_back(n);
    }

    auto compile_one = [&](const std::string& text, const std::string& where) {
        try {
            return dsl::CompiledExpr::compile(*dsl::parse_expression(text), slots);
        } catch (const ParseError& e) {
            throw ConfigError("config: " + where + ": " + e.what());
        } catch (const UnboundVariable& e) {
            throw ConfigError("config: " + where + ": " + e.what());
        }
    };

    std::vector<dsl::CompiledExpr> gexpr, phiexpr, xiexpr;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            gexpr.push_back(compile_one(cfg.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                        "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            phiexpr.push_back(compile_one(cfg.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                          "phi[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    for (int i = 0; i < d; ++i)
        xiexpr.push_back(compile_one(cfg.xi[static_cast<std::size_t>(i)], "xi[" + std::to_string(i) + "]"));

    const Vec pvals = cfg.parameter_values;
    auto bind = [pvals, d](const Point& p) {
        Vec slots_vals(p.begin(), p.end());
        (void)d;
        slots_vals.insert(slots_vals.end(), pvals.begin(), pvals.end());
        return slots_vals;
    };

    AlmostContactStructure s;
    s.name = cfg.name;
    s.chart.dim = d;
    s.chart.name = cfg.name;
    const Vec lo = cfg.domain_lo, hi = cfg.domain_hi;
    s.chart.domain = [lo, hi](const Point& p) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    };
    s.chart.box.lo = lo;
    s.chart.box.hi = hi;
    s.chart.metric = [gexpr, bind, d](const Point& p) {
        const Vec vals = bind(p);
        Mat g(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                g(i, j) = gexpr[static_cast<std::size_t>(i) * d + j].eval(vals.data(), vals.size());
        return g;
    };

    // reject metrics whose expression matrix is not symmetric pointwise
    {
        SampleGen gen(fnv1a("config-symmetry:" + cfg.name));
        for (int k = 0; k < 8; ++k) {
            const Point p = gen.point_in(s.chart.box, 0.0);
            const Mat g = s.chart.metric(p);
            if (max_abs(g - transpose(g)) > 1e-12)
                throw ConfigError("config: metric expression matrix is not symmetric");
        }
    }

    s.xi = vector_field([xiexpr, bind, d](const Point& p) {
        const Vec vals = bind(p);
        Vec v(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) v[i] = xiexpr[static_cast<std::size_t>(i)].eval(vals.data(), vals.size());
        return v;
    });
    s.phi = TensorField{{1, 1}, [phiexpr, bind, d](const Point& p) {
                            const Vec vals = bind(p);
                            std::vector<double> m(static_cast<std::size_t>(d) * d);
                            for (int i = 0; i < d; ++i)
                                for (int j = 0; j < d; ++j)
                                    m[static_cast<std::size_t>(i) * d + j] =
                                        phiexpr[static_cast<std::size_t>(i) * d + j].eval(vals.data(), vals.size());
                            return m;
                        }};
    const Chart chart_copy = s.chart;  // value copy for the eta closure
    const TensorField xi_copy = s.xi;
    s.eta = one_form_field([chart_copy, xi_copy](const Point& p) {
        return mat_vec(chart_copy.metric(p), xi_copy.eval(p));
    });

    const auto probe = sample_points(s.chart, 8, fnv1a("config-validate"), cfg.fd);
    validate_structure(s, probe, cfg.fd.tol_algebraic);
    return s;
}

inline AlmostContactStructure load_structure_file(const std::string& path, FDConfig* fd_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const StructureConfig cfg = parse_structure_config(buf.str());
    if (fd_out && cfg.has_fd_overrides) *fd_out = cfg.fd;
    return load_structure_config(cfg);
}

}  // namespace acharm
