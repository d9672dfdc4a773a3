#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

void floyd(std::vector<std::vector<int>>& d) {
    const std::size_t n = d.size();
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (d[a][m] >= 0 && d[m][b] >= 0 && (d[a][b] < 0 || d[a][m] + d[m][b] < d[a][b])) {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
}

long double mean_of(const std::vector<long double>& v) {
    if (v.empty()) {
        return 0.0L;
    }
    long double s = 0.0L;
    for (auto x : v) {
        s += x;
    }
    return s / static_cast<long double>(v.size());
}

}  // namespace

std::vector<std::vector<int>> node_distances(int k, const EdgeList& edges) {
    std::vector<std::vector<int>> d(k, std::vector<int>(k, -1));
    for (int i = 0; i < k; ++i) {
        d[i][i] = 0;
    }
    for (auto [a, b] : edges) {
        d[a][b] = d[b][a] = 1;
    }
    floyd(d);
    return d;
}

std::vector<std::vector<int>> edge_distances(const EdgeList& edges) {
    const int m = static_cast<int>(edges.size());
    std::vector<std::vector<int>> d(m, std::vector<int>(m, -1));
    for (int a = 0; a < m; ++a) {
        d[a][a] = 0;
        for (int b = 0; b < m; ++b) {
            if (a == b) {
                continue;
            }
            const auto [p, q] = edges[a];
            const auto [r, s] = edges[b];
            if (p == r || p == s || q == r || q == s) {
                d[a][b] = 1;
            }
        }
    }
    floyd(d);
    return d;
}

std::vector<int> node_neighbors(int k, const EdgeList& edges, int i, int stage) {
    const auto d = node_distances(k, edges);
    std::vector<int> out;
    for (int j = 0; j < k; ++j) {
        if (d[i][j] == stage) {
            out.push_back(j);
        }
    }
    return out;
}

std::vector<int> edge_neighbors(const EdgeList& edges, int e, int stage) {
    const auto d = edge_distances(edges);
    std::vector<int> out;
    for (int f = 0; f < static_cast<int>(edges.size()); ++f) {
        if (d[e][f] == stage) {
            out.push_back(f);
        }
    }
    return out;
}

std::vector<int> incident_edges(const EdgeList& edges, int i) {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (edges[e].first == i || edges[e].second == i) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<long double> regressor(int k, const EdgeList& edges, const Eigen::MatrixXd& g, const Eigen::MatrixXd& p,
                                   const Spec& spec, Row target, int t) {
    std::vector<long double> row;
    for (int l = 1; l <= spec.lags; ++l) {
        const int s = t - l;
        const int stages = spec.stages[l - 1];
        auto gv = [&](int i) { return static_cast<long double>(g(i, s)); };
        auto pv = [&](int e) { return static_cast<long double>(p(e, s)); };
        if (target.node) {
            const int i = target.index;
            row.push_back(gv(i));
            for (int r = 1; r <= stages; ++r) {
                std::vector<long double> vals;
                for (int j : node_neighbors(k, edges, i, r)) {
                    vals.push_back(gv(j));
                }
                row.push_back(mean_of(vals));
            }
            std::vector<long double> inc;
            for (int e : incident_edges(edges, i)) {
                inc.push_back(pv(e));
            }
            row.push_back(mean_of(inc));
            for (int r = 1; r <= stages; ++r) {
                std::vector<long double> outer;
                for (int e : incident_edges(edges, i)) {
                    std::vector<long double> inner;
                    for (int f : edge_neighbors(edges, e, r)) {
                        inner.push_back(pv(f));
                    }
                    outer.push_back(mean_of(inner));
                }
                row.push_back(mean_of(outer));
            }
        } else {
            const int e = target.index;
            const auto [a, b] = edges[e];
            row.push_back(pv(e));
            for (int r = 1; r <= stages; ++r) {
                std::vector<long double> vals;
                for (int f : edge_neighbors(edges, e, r)) {
                    vals.push_back(pv(f));
                }
                row.push_back(mean_of(vals));
            }
            row.push_back((gv(a) + gv(b)) / 2.0L);
            for (int r = 1; r <= stages; ++r) {
                std::vector<int> set = node_neighbors(k, edges, a, r);
                for (int j : node_neighbors(k, edges, b, r)) {
                    set.push_back(j);
                }
                std::sort(set.begin(), set.end());
                set.erase(std::unique(set.begin(), set.end()), set.end());
                std::vector<long double> vals;
                for (int j : set) {
                    if (j != a && j != b) {
                        vals.push_back(gv(j));
                    }
                }
                row.push_back(mean_of(vals));
            }
        }
    }
    return row;
}

std::vector<double> normal_equations_fit(int k, const EdgeList& edges, const Eigen::MatrixXd& g,
                                         const Eigen::MatrixXd& p, const Spec& spec) {
    const int m = static_cast<int>(edges.size());
    const int len = static_cast<int>(g.cols());
    std::size_t n = 0;
    std::vector<std::vector<long double>> xtx;
    std::vector<long double> xty;
    for (int t = spec.lags; t < len; ++t) {
        for (int q = 0; q < m + k; ++q) {
            const Row target{q >= m, q >= m ? q - m : q};
            const auto x = regressor(k, edges, g, p, spec, target, t);
            const long double y = target.node ? g(target.index, t) : p(target.index, t);
            if (xtx.empty()) {
                n = x.size();
                xtx.assign(n, std::vector<long double>(n, 0.0L));
                xty.assign(n, 0.0L);
            }
            for (std::size_t a = 0; a < n; ++a) {
                xty[a] += x[a] * y;
                for (std::size_t b = 0; b < n; ++b) {
                    xtx[a][b] += x[a] * x[b];
                }
            }
        }
    }
    // Gaussian elimination with partial pivoting on [X'X | X'y].
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(xtx[r][c]) > std::fabs(xtx[piv][c])) {
                piv = r;
            }
        }
        if (std::fabs(xtx[piv][c]) < 1e-300L) {
            throw std::runtime_error("oracle: singular normal equations");
        }
        std::swap(xtx[c], xtx[piv]);
        std::swap(xty[c], xty[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const long double f = xtx[r][c] / xtx[c][c];
            for (std::size_t b = c; b < n; ++b) {
                xtx[r][b] -= f * xtx[c][b];
            }
            xty[r] -= f * xty[c];
        }
    }
    std::vector<long double> theta(n, 0.0L);
    for (std::size_t c = n; c-- > 0;) {
        long double s = xty[c];
        for (std::size_t b = c + 1; b < n; ++b) {
            s -= xtx[c][b] * theta[b];
        }
        theta[c] = s / xtx[c][c];
    }
    return {theta.begin(), theta.end()};
}

Eigen::MatrixXd simulate(int k, const EdgeList& edges, const Spec& spec, const std::vector<double>& theta,
                         const Eigen::MatrixXd& noise) {
    const int m = static_cast<int>(edges.size());
    const int steps = static_cast<int>(noise.cols());
    // Pad with L zero columns of pre-sample history.
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, steps + spec.lags);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, steps + spec.lags);
    for (int s = 0; s < steps; ++s) {
        const int t = s + spec.lags;
        for (int q = 0; q < m + k; ++q) {
            const Row target{q >= m, q >= m ? q - m : q};
            const auto x = regressor(k, edges, g, p, spec, target, t);
            long double mean = 0.0L;
            for (std::size_t a = 0; a < x.size(); ++a) {
                mean += x[a] * theta[a];
            }
            const double value = static_cast<double>(mean) + noise(q, s);
            if (target.node) {
                g(target.index, t) = value;
            } else {
                p(target.index, t) = value;
            }
        }
    }
    Eigen::MatrixXd out(m + k, steps);
    out.topRows(m) = p.rightCols(steps);
    out.bottomRows(k) = g.rightCols(steps);
    return out;
}

double binomial_tail(int n, int k, double p) {
    long double total = 0.0L;
    for (int x = k; x <= n; ++x) {
        long double c = 1.0L;
        for (int j = 1; j <= x; ++j) {
            c = c * static_cast<long double>(n - x + j) / static_cast<long double>(j);
        }
        total += c * std::pow(static_cast<long double>(p), x) * std::pow(1.0L - static_cast<long double>(p), n - x);
    }
    return static_cast<double>(total);
}

double spectral_radius_power(const std::vector<Eigen::MatrixXd>& mats) {
    const auto d = mats.front().rows();
    const auto lags = static_cast<Eigen::Index>(mats.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d * lags, d * lags);
    for (Eigen::Index l = 0; l < lags; ++l) {
        c.block(0, l * d, d, d) = mats[static_cast<std::size_t>(l)];
    }
    if (lags > 1) {
        c.block(d, 0, d * (lags - 1), d * (lags - 1)).setIdentity();
    }
    // rho = lim ||C^n||^(1/n); square 12 times (n = 4096) tracking log scale.
    Eigen::MatrixXd power = c;
    double log_scale = 0.0;
    for (int i = 0; i < 12; ++i) {
        const double norm = power.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        power /= norm;
        log_scale = 2.0 * (log_scale + std::log(norm));
        power = power * power;
    }
    const double n = std::ldexp(1.0, 12);
    return std::exp((log_scale + std::log(power.norm())) / n);
}

}  // namespace oracle
