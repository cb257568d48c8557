#include "spt/master_equation.hpp"

#include <cmath>

#include "spt/errors.hpp"

namespace spt {

namespace {

// Dense Gaussian elimination with partial pivoting; small systems only.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw ConvergenceError("singular balance system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double w = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= w * a[col][c];
            b[r] -= w * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

StationaryResult master_equation_steady_state(const std::vector<std::vector<double>>& rates) {
    const std::size_t n = rates.size();
    for (const auto& row : rates) {
        if (row.size() != n) throw ConfigError("rate matrix must be square");
        for (double r : row)
            if (r < 0 || !std::isfinite(r)) throw ConfigError("rates must be finite and >= 0");
    }

    // Reachability closure over nonzero-rate edges.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rates[i][j] > 0) reach[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;

    // Communicating classes; a class is closed when nothing escapes it.
    std::vector<int> class_of(n, -1);
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (class_of[i] >= 0) continue;
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i]) {
                members.push_back(j);
                class_of[j] = static_cast<int>(classes.size());
            }
        classes.push_back(std::move(members));
    }

    StationaryResult out;
    for (const auto& members : classes) {
        bool closed = true;
        for (std::size_t i : members)
            for (std::size_t j = 0; j < n && closed; ++j)
                if (rates[i][j] > 0 && class_of[j] != class_of[i]) closed = false;
        if (!closed) continue;

        // Balance equations pi^T Q = 0 on the class, one row replaced by
        // normalization.
        const std::size_t m = members.size();
        std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
        std::vector<double> b(m, 0.0);
        for (std::size_t cj = 0; cj < m; ++cj) {
            for (std::size_t ci = 0; ci < m; ++ci) {
                const std::size_t i = members[ci], j = members[cj];
                if (i == j) {
                    double total = 0;
                    for (std::size_t kcol = 0; kcol < n; ++kcol)
                        if (kcol != i) total += rates[i][kcol];
                    a[cj][ci] = -total;
                } else {
                    a[cj][ci] = rates[i][j];
                }
            }
        }
        for (std::size_t ci = 0; ci < m; ++ci) a[m - 1][ci] = 1.0;
        b[m - 1] = 1.0;

        std::vector<double> pi = dense_solve(std::move(a), std::move(b));
        std::vector<double> full(n, 0.0);
        for (std::size_t ci = 0; ci < m; ++ci) full[members[ci]] = pi[ci];
        out.class_distributions.push_back(std::move(full));
        out.recurrent_classes.push_back(members);
    }
    out.disconnected = out.recurrent_classes.size() > 1;
    return out;
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& rates) {
    StationaryResult r = master_equation_steady_state(rates);
    if (r.disconnected)
        throw ConfigError("chain has " + std::to_string(r.recurrent_classes.size()) +
                          " closed classes; stationary distribution is not unique");
    return r.class_distributions.at(0);
}

}  // namespace spt
