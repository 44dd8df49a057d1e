#pragma once

// Residual bookkeeping shared by the identity registry and the submersion /
// warped-product suites.

#include <string>
#include <vector>

#include "acharm/chart.hpp"

namespace acharm {

enum class TolClass { algebraic, d1, d2, verdict };

inline double tolerance_of(TolClass c, const FDConfig& fd, double tol_scale = 1.0) {
    switch (c) {
        case TolClass::algebraic:
            return fd.tol_algebraic * tol_scale;
        case TolClass::d1:
            return fd.tol_d1 * tol_scale;
        case TolClass::d2:
            return fd.tol_d2 * tol_scale;
        case TolClass::verdict:
            return 0.5;  // residual is a 0/1 agreement indicator
    }
    return 0.0;
}

inline const char* tol_class_name(TolClass c) {
    switch (c) {
        case TolClass::algebraic:
            return "algebraic";
        case TolClass::d1:
            return "d1";
        case TolClass::d2:
            return "d2";
        case TolClass::verdict:
            return "verdict";
    }
    return "?";
}

struct Accumulator {
    long n = 0;
    double mx = 0.0;
    double sum = 0.0;
    void add(double r) {
        ++n;
        if (r > mx) mx = r;
        sum += r;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
};

struct CheckRow {
    std::string id;
    std::string ref;          // registry label, e.g. "(2.4)" or "Lemma 3.2"
    std::string description;  // what the residual measures
    TolClass tol_class = TolClass::d2;
    bool applicable = true;
    bool informational = false;  // reported but never gates the run verdict
    long samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

inline CheckRow make_row(std::string id, std::string ref, std::string description, TolClass cls,
                         const Accumulator& acc, const FDConfig& fd, double tol_scale,
                         bool informational = false) {
    CheckRow row;
    row.id = std::move(id);
    row.ref = std::move(ref);
    row.description = std::move(description);
    row.tol_class = cls;
    row.informational = informational;
    row.samples = acc.n;
    row.max_residual = acc.mx;
    row.mean_residual = acc.mean();
    row.tolerance = tolerance_of(cls, fd, tol_scale);
    row.pass = acc.mx < row.tolerance;
    return row;
}

inline CheckRow not_applicable_row(std::string id, std::string ref, std::string description,
                                   TolClass cls, const FDConfig& fd, double tol_scale) {
    CheckRow row;
    row.id = std::move(id);
    row.ref = std::move(ref);
    row.description = std::move(description);
    row.tol_class = cls;
    row.applicable = false;
    row.tolerance = tolerance_of(cls, fd, tol_scale);
    row.pass = true;
    return row;
}

inline bool all_gating_pass(const std::vector<CheckRow>& rows) {
    for (const auto& r : rows)
        if (r.applicable && !r.informational && !r.pass) return false;
    return true;
}

}  // namespace acharm
