#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lassodet::bounds {

enum class BoundKind { Compatibility, RestrictedEigenvalue };

const char* to_string(BoundKind kind);
BoundKind parse_bound_kind(const char* text);  // "compat" | "re"

struct BoundParams {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t p0 = 0;
    double sigma2 = 1.0;
    double psi0 = 1.0;   // compatibility constant; 1 for orthogonal designs
    double kappa = 1.0;  // restricted-eigenvalue constant; 1 for orthogonal designs
    double t = 1.0;
    double A = 1.0;
};

/// 64 sigma^2 p0 (t^2 + 2 log p) / (n psi0^2), holding with probability
/// at least 1 - 2 exp(-t^2/2).
double bound_compat(const BoundParams& params);

/// 16 A^2 sigma^2 p0 log(p) / (n kappa^2), holding with probability at least
/// 1 - p^(1 - A^2/8). Requires p >= 2.
double bound_re(const BoundParams& params);

/// Coverage of bound_compat for a given t.
double coverage_compat(double t);
/// Coverage of bound_re for a given A and p.
double coverage_re(double A, std::size_t p);

/// t = sqrt(2 ln(2 / (1 - coverage)))
double solve_t(double coverage);
/// A = sqrt(8 (1 - ln(1 - coverage) / ln p))
double solve_A(double coverage, std::size_t p);

struct CurvePoint {
    std::size_t p = 0;
    double bound = 0.0;
    double ratio = 0.0;  // bound(p) / bound(p0)
};

struct CurveRequest {
    BoundKind kind = BoundKind::Compatibility;
    std::size_t n = 0;
    std::vector<std::size_t> p_list;
    std::size_t p0 = 0;
    double sigma2 = 1.0;
    double coverage = 0.95;
    double psi0 = 1.0;
    double kappa = 1.0;
    /// Restricted-eigenvalue bound only: solve A once at p0 and keep it fixed
    /// instead of re-solving at every p.
    bool fixed_A = false;
};

/// Ratio of the bound at each p to the bound at the true model size p0.
std::vector<CurvePoint> bound_ratio_curve(const CurveRequest& request);

/// Bound value at a single p with t or A solved for the requested coverage.
double bound_at(BoundKind kind, std::size_t n, std::size_t p, std::size_t p0, double sigma2,
                double coverage, double psi0 = 1.0, double kappa = 1.0);

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace lassodet::bounds
