#include "lassodet/oracle_bounds.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <string>

#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"

namespace lassodet::bounds {
namespace {

void check_common(const BoundParams& b) {
    if (b.n < 1 || b.p < 1 || b.p0 < 1) throw DomainError("bound: n, p, p0 must be positive");
    if (!(b.sigma2 > 0.0)) throw DomainError("bound: sigma2 must be positive");
}

void check_coverage(double coverage) {
    if (!(coverage > 0.0 && coverage < 1.0)) {
        throw DomainError("coverage must lie in the open interval (0, 1)");
    }
}

}  // namespace

const char* to_string(BoundKind kind) {
    return kind == BoundKind::Compatibility ? "compat" : "re";
}

BoundKind parse_bound_kind(const char* text) {
    if (std::strcmp(text, "compat") == 0) return BoundKind::Compatibility;
    if (std::strcmp(text, "re") == 0) return BoundKind::RestrictedEigenvalue;
    throw DomainError(std::string("unknown bound kind '") + text + "' (expected compat or re)");
}

double bound_compat(const BoundParams& b) {
    check_common(b);
    if (b.p < 2) throw DomainError("bound_compat: p must be at least 2");
    if (!(b.psi0 > 0.0) || !(b.t > 0.0)) throw DomainError("bound_compat: psi0 and t must be positive");
    return 64.0 * b.sigma2 * static_cast<double>(b.p0) *
           (b.t * b.t + 2.0 * std::log(static_cast<double>(b.p))) /
           (static_cast<double>(b.n) * b.psi0 * b.psi0);
}

double bound_re(const BoundParams& b) {
    check_common(b);
    if (b.p < 2) throw DomainError("bound_re: p must be at least 2");
    if (!(b.kappa > 0.0) || !(b.A > 0.0)) throw DomainError("bound_re: kappa and A must be positive");
    return 16.0 * b.A * b.A * b.sigma2 * static_cast<double>(b.p0) *
           std::log(static_cast<double>(b.p)) / (static_cast<double>(b.n) * b.kappa * b.kappa);
}

double coverage_compat(double t) { return 1.0 - 2.0 * std::exp(-0.5 * t * t); }

double coverage_re(double A, std::size_t p) {
    if (p < 2) throw DomainError("coverage_re: p must be at least 2");
    return 1.0 - std::pow(static_cast<double>(p), 1.0 - A * A / 8.0);
}

double solve_t(double coverage) {
    check_coverage(coverage);
    return std::sqrt(2.0 * std::log(2.0 / (1.0 - coverage)));
}

double solve_A(double coverage, std::size_t p) {
    check_coverage(coverage);
    if (p < 2) throw DomainError("solve_A: p must be at least 2");
    return std::sqrt(8.0 * (1.0 - std::log1p(-coverage) / std::log(static_cast<double>(p))));
}

double bound_at(BoundKind kind, std::size_t n, std::size_t p, std::size_t p0, double sigma2,
                double coverage, double psi0, double kappa) {
    BoundParams b{n, p, p0, sigma2, psi0, kappa, 1.0, 1.0};
    if (kind == BoundKind::Compatibility) {
        b.t = solve_t(coverage);
        return bound_compat(b);
    }
    b.A = solve_A(coverage, p);
    return bound_re(b);
}

std::vector<CurvePoint> bound_ratio_curve(const CurveRequest& r) {
    check_coverage(r.coverage);
    if (r.p0 < 2) throw DomainError("bound curves need p0 >= 2 (log p0 must be positive)");
    BoundParams base{r.n, r.p0, r.p0, r.sigma2, r.psi0, r.kappa, solve_t(r.coverage),
                     solve_A(r.coverage, r.p0)};
    const double denom = r.kind == BoundKind::Compatibility ? bound_compat(base) : bound_re(base);

    std::vector<CurvePoint> out;
    out.reserve(r.p_list.size());
    for (std::size_t p : r.p_list) {
        if (p < r.p0) throw DomainError("bound curve: every p must be >= p0");
        BoundParams b = base;
        b.p = p;
        double value;
        if (r.kind == BoundKind::Compatibility) {
            value = bound_compat(b);
        } else {
            if (!r.fixed_A) b.A = solve_A(r.coverage, p);
            value = bound_re(b);
        }
        out.push_back({p, value, value / denom});
    }
    return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
    csv::write_row(out, {"p", "bound", "ratio"});
    for (const auto& pt : curve) {
        csv::write_row(out, {std::to_string(pt.p), csv::format_double(pt.bound),
                             csv::format_double(pt.ratio)});
    }
}

}  // namespace lassodet::bounds
