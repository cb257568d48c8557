#include "spt/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "spt/errors.hpp"

namespace spt {

std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i - 1] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                        double x) {
    // LDL^T nonpositive-pivot count. Pivots are floored at -pivmin before
    // counting so exact zero hits (common on uniform-grid matrices) advance
    // the sequence instead of cycling uncounted; pivmin scales with max e^2
    // so e^2 / pivmin stays finite.
    double pivmin = 1.0;
    for (double e : off) pivmin = std::max(pivmin, e * e);
    pivmin *= std::numeric_limits<double>::min();

    std::size_t count = 0;
    double q = diag[0] - x;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q <= 0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q <= 0) ++count;
    }
    return count;
}

namespace {

// Tridiagonal LU with partial pivoting (dgttrf-style; one fill-in band).
struct PivotedLU {
    std::vector<double> dl, d, du, du2;
    std::vector<int> swapped;

    PivotedLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
        : dl(std::move(lower)), d(std::move(diag)), du(std::move(upper)),
          du2(d.size() >= 2 ? d.size() - 2 : 0, 0.0), swapped(d.size(), 0) {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::fabs(d[i]) >= std::fabs(dl[i])) {
                if (d[i] == 0.0) d[i] = std::numeric_limits<double>::min();
                const double w = dl[i] / d[i];
                dl[i] = w;
                d[i + 1] -= w * du[i];
            } else {
                const double w = d[i] / dl[i];
                swapped[i] = 1;
                std::swap(d[i], dl[i]);  // d[i] now holds the pivot row's diagonal
                const double tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - w * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -w * du[i + 1];
                }
                dl[i] = w;
            }
        }
        if (d[n - 1] == 0.0) d[n - 1] = std::numeric_limits<double>::min();
    }

    void solve_inplace(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl[i] * b[i];
        }
        b[n - 1] /= d[n - 1];
        if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

// Deterministic xorshift for inverse-iteration start vectors.
double unit_rand(std::uint64_t& s) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

}  // namespace

TridiagEigen lowest_eigenpairs(const std::vector<double>& diag, const std::vector<double>& off,
                               std::size_t k) {
    const std::size_t n = diag.size();
    if (k == 0) return {};
    if (k > n) throw ConfigError("requested more eigenpairs than matrix dimension");

    // Gershgorin bounds.
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0;
        if (i > 0) r += std::fabs(off[i - 1]);
        if (i + 1 < n) r += std::fabs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const double span = std::max(hi - lo, 1e-300);

    TridiagEigen out;
    out.values.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        double a = lo, b = hi;
        while (b - a > 1e-14 * span + 1e-13 * std::max(std::fabs(a), std::fabs(b))) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(diag, off, mid) > j) b = mid;
            else a = mid;
        }
        out.values[j] = 0.5 * (a + b);
    }

    // Inverse iteration per eigenvalue; orthogonalize inside near-degenerate
    // clusters so double-well doublets come out clean.
    out.vectors.assign(k, {});
    const double cluster_tol = 1e-8 * span + 1e-10;
    for (std::size_t j = 0; j < k; ++j) {
        const double shift = out.values[j] + 1e-13 * span;  // keep LU nonsingular
        std::vector<double> lower(n >= 1 ? n - 1 : 0), upper(n >= 1 ? n - 1 : 0), dshift(n);
        for (std::size_t i = 0; i < n; ++i) dshift[i] = diag[i] - shift;
        for (std::size_t i = 0; i + 1 < n; ++i) lower[i] = upper[i] = off[i];
        PivotedLU lu(lower, dshift, upper);

        std::uint64_t seed = 0x9e3779b97f4a7c15ull ^ (j + 1);
        std::vector<double> v(n);
        for (auto& x : v) x = unit_rand(seed);

        auto orthogonalize_and_normalize = [&] {
            for (std::size_t p = j; p-- > 0;) {
                if (std::fabs(out.values[j] - out.values[p]) > cluster_tol) break;
                double dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * out.vectors[p][i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * out.vectors[p][i];
            }
            double nrm = 0;
            for (double x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (!(nrm > 1e-300) || !std::isfinite(nrm))
                throw ConvergenceError("inverse iteration degenerated at state " +
                                       std::to_string(j));
            for (auto& x : v) x /= nrm;
        };

        auto residual = [&] {
            double res = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = (diag[i] - out.values[j]) * v[i];
                if (i > 0) r += off[i - 1] * v[i - 1];
                if (i + 1 < n) r += off[i] * v[i + 1];
                res += r * r;
            }
            return std::sqrt(res);
        };

        orthogonalize_and_normalize();
        double res = 0;
        for (int it = 0; it < 8; ++it) {
            lu.solve_inplace(v);
            orthogonalize_and_normalize();
            res = residual();
            if (it >= 2 && res < 1e-10 * span) break;
        }
        if (res > 1e-8 * span)
            throw ConvergenceError("inverse iteration failed: residual " +
                                   std::to_string(res) + " for state " + std::to_string(j));

        // Deterministic sign: largest-magnitude component positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
        if (v[imax] < 0)
            for (auto& x : v) x = -x;
        out.vectors[j] = std::move(v);
    }
    return out;
}

}  // namespace spt
