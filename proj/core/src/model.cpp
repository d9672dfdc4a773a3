#include "gnarex/model.hpp"

#include "gnarex/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace gnarex {

GnarexSpec::GnarexSpec(int lag, std::vector<int> stages_per_lag) : max_lag(lag), stages(std::move(stages_per_lag)) {
    validate();
}

GnarexSpec GnarexSpec::uniform(int lag, int stage) {
    if (lag < 1) {
        throw ArgumentError("max lag must be >= 1");
    }
    return GnarexSpec(lag, std::vector<int>(static_cast<std::size_t>(lag), stage));
}

void GnarexSpec::validate() const {
    if (max_lag < 1) {
        throw ArgumentError("max lag must be >= 1, got " + std::to_string(max_lag));
    }
    if (stages.size() != static_cast<std::size_t>(max_lag)) {
        throw ArgumentError("expected " + std::to_string(max_lag) + " stage entries, got " +
                            std::to_string(stages.size()));
    }
    for (int r : stages) {
        if (r < 0) {
            throw ArgumentError("neighbour stages must be >= 0");
        }
    }
}

std::size_t GnarexSpec::parameter_count() const noexcept {
    return 2 * static_cast<std::size_t>(max_lag) +
           2 * static_cast<std::size_t>(std::accumulate(stages.begin(), stages.end(), 0));
}

int GnarexSpec::max_stage() const noexcept {
    return stages.empty() ? 0 : *std::max_element(stages.begin(), stages.end());
}

int GnarexSpec::stage(int lag) const {
    if (lag < 1 || lag > max_lag) {
        throw ArgumentError("lag " + std::to_string(lag) + " outside 1.." + std::to_string(max_lag));
    }
    return stages[static_cast<std::size_t>(lag - 1)];
}

std::size_t GnarexSpec::lag_offset(int lag) const {
    std::size_t offset = 0;
    for (int l = 1; l < lag; ++l) {
        offset += 2 + 2 * static_cast<std::size_t>(stage(l));
    }
    return offset;
}

std::vector<std::string> GnarexSpec::coefficient_names() const {
    std::vector<std::string> names;
    names.reserve(parameter_count());
    for (int l = 1; l <= max_lag; ++l) {
        const auto ls = std::to_string(l);
        names.push_back("alpha_" + ls);
        for (int r = 1; r <= stage(l); ++r) {
            names.push_back("beta_" + ls + "_" + std::to_string(r));
        }
        names.push_back("gamma_" + ls);
        for (int r = 1; r <= stage(l); ++r) {
            names.push_back("delta_" + ls + "_" + std::to_string(r));
        }
    }
    return names;
}

std::string GnarexSpec::to_string() const {
    std::string out = "GNAR-ex(" + std::to_string(max_lag) + ",[";
    for (std::size_t l = 0; l < stages.size(); ++l) {
        out += (l ? "," : "") + std::to_string(stages[l]);
    }
    return out + "])";
}

GnarexParams GnarexParams::zeros(const GnarexSpec& spec) {
    spec.validate();
    GnarexParams p;
    const auto lags = static_cast<std::size_t>(spec.max_lag);
    p.alpha.assign(lags, 0.0);
    p.gamma.assign(lags, 0.0);
    p.beta.resize(lags);
    p.delta.resize(lags);
    for (std::size_t l = 0; l < lags; ++l) {
        p.beta[l].assign(static_cast<std::size_t>(spec.stages[l]), 0.0);
        p.delta[l].assign(static_cast<std::size_t>(spec.stages[l]), 0.0);
    }
    return p;
}

GnarexParams GnarexParams::from_vector(const GnarexSpec& spec, const Eigen::VectorXd& theta, double sigma2) {
    if (static_cast<std::size_t>(theta.size()) != spec.parameter_count()) {
        throw ArgumentError("coefficient vector has length " + std::to_string(theta.size()) + ", expected " +
                            std::to_string(spec.parameter_count()));
    }
    GnarexParams p = zeros(spec);
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < p.alpha.size(); ++l) {
        p.alpha[l] = theta[k++];
        for (double& b : p.beta[l]) {
            b = theta[k++];
        }
        p.gamma[l] = theta[k++];
        for (double& d : p.delta[l]) {
            d = theta[k++];
        }
    }
    p.sigma2 = sigma2;
    p.check(spec);
    return p;
}

Eigen::VectorXd GnarexParams::to_vector(const GnarexSpec& spec) const {
    check(spec);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(spec.parameter_count()));
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < alpha.size(); ++l) {
        theta[k++] = alpha[l];
        for (double b : beta[l]) {
            theta[k++] = b;
        }
        theta[k++] = gamma[l];
        for (double d : delta[l]) {
            theta[k++] = d;
        }
    }
    return theta;
}

void GnarexParams::check(const GnarexSpec& spec) const {
    const auto lags = static_cast<std::size_t>(spec.max_lag);
    if (alpha.size() != lags || gamma.size() != lags || beta.size() != lags || delta.size() != lags) {
        throw ArgumentError("parameter lag dimension does not match " + spec.to_string());
    }
    for (std::size_t l = 0; l < lags; ++l) {
        const auto r = static_cast<std::size_t>(spec.stages[l]);
        if (beta[l].size() != r || delta[l].size() != r) {
            throw ArgumentError("parameter stage dimension at lag " + std::to_string(l + 1) + " does not match " +
                                spec.to_string());
        }
    }
    if (!(sigma2 >= 0.0)) {
        throw ArgumentError("noise variance must be >= 0");
    }
}

PanelSeries::PanelSeries(std::shared_ptr<const StaticNetwork> network, Eigen::MatrixXd node_values,
                         Eigen::MatrixXd edge_values, std::vector<std::string> time_index)
    : network_(std::move(network)),
      nodes_(std::move(node_values)),
      edges_(std::move(edge_values)),
      time_index_(std::move(time_index)) {
    if (!network_) {
        throw ArgumentError("panel requires a network");
    }
    if (static_cast<std::size_t>(nodes_.rows()) != network_->node_count()) {
        throw ArgumentError("node series rows (" + std::to_string(nodes_.rows()) + ") != K (" +
                            std::to_string(network_->node_count()) + ")");
    }
    if (static_cast<std::size_t>(edges_.rows()) != network_->edge_count()) {
        throw ArgumentError("edge series rows (" + std::to_string(edges_.rows()) + ") != M (" +
                            std::to_string(network_->edge_count()) + ")");
    }
    if (edges_.rows() > 0 && edges_.cols() != nodes_.cols()) {
        throw ArgumentError("node and edge series have different lengths");
    }
    if (edges_.rows() == 0) {
        edges_.resize(0, nodes_.cols());
    }
    if (!nodes_.allFinite() || !edges_.allFinite()) {
        throw DataError("panel contains missing or non-finite values");
    }
    if (time_index_.empty()) {
        for (Eigen::Index t = 0; t < nodes_.cols(); ++t) {
            time_index_.push_back(std::to_string(t + 1));
        }
    } else if (time_index_.size() != static_cast<std::size_t>(nodes_.cols())) {
        throw ArgumentError("time index length does not match series length");
    }
}

PanelSeries PanelSeries::from_stacked(std::shared_ptr<const StaticNetwork> network, const Eigen::MatrixXd& stacked,
                                      std::vector<std::string> time_index) {
    if (!network) {
        throw ArgumentError("panel requires a network");
    }
    const auto m = static_cast<Eigen::Index>(network->edge_count());
    const auto k = static_cast<Eigen::Index>(network->node_count());
    if (stacked.rows() != m + k) {
        throw ArgumentError("stacked series must have M+K rows");
    }
    return PanelSeries(network, stacked.bottomRows(k), stacked.topRows(m), std::move(time_index));
}

Eigen::MatrixXd PanelSeries::stacked() const {
    Eigen::MatrixXd y(edges_.rows() + nodes_.rows(), nodes_.cols());
    y.topRows(edges_.rows()) = edges_;
    y.bottomRows(nodes_.rows()) = nodes_;
    return y;
}

PanelSeries PanelSeries::head(std::size_t n) const {
    if (n > length()) {
        throw RangeError("head(" + std::to_string(n) + ") exceeds series length " + std::to_string(length()));
    }
    const auto cols = static_cast<Eigen::Index>(n);
    return PanelSeries(network_, nodes_.leftCols(cols), edges_.leftCols(cols),
                       std::vector<std::string>(time_index_.begin(), time_index_.begin() + cols));
}

std::size_t stacked_index(const StaticNetwork& net, SeriesRef ref) {
    if (ref.kind == SeriesKind::edge) {
        net.check_edge(ref.index);
        return ref.index;
    }
    net.check_node(ref.index);
    return net.edge_count() + ref.index;
}

namespace detail {

namespace {

template <typename Vec, typename Index>
double mean_over(const Vec& values, const std::vector<Index>& set) {
    if (set.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (Index x : set) {
        sum += values[static_cast<Eigen::Index>(x)];
    }
    return sum / static_cast<double>(set.size());
}

}  // namespace

Eigen::MatrixXd column_features(const NeighborhoodTables& tables, const Eigen::Ref<const Eigen::VectorXd>& node_col,
                                const Eigen::Ref<const Eigen::VectorXd>& edge_col, int max_stage) {
    const auto k = static_cast<Eigen::Index>(tables.node_count());
    const auto m = static_cast<Eigen::Index>(tables.edge_count());
    if (max_stage > tables.max_stage()) {
        throw ArgumentError("neighbourhood tables cover stage " + std::to_string(tables.max_stage()) +
                            ", model needs " + std::to_string(max_stage));
    }
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m + k, 2 + 2 * max_stage);

    // Mean of P over each edge's r-stage neighbours, reused by the node rows.
    Eigen::MatrixXd edge_nbr_mean(m, std::max(max_stage, 1));
    for (Eigen::Index e = 0; e < m; ++e) {
        const auto eid = static_cast<EdgeId>(e);
        const auto [i, j] = tables.endpoints(eid);
        f(e, feature_self()) = edge_col[e];
        for (int r = 1; r <= max_stage; ++r) {
            edge_nbr_mean(e, r - 1) = mean_over(edge_col, tables.edge(eid, r));
            f(e, feature_neighbor(r)) = edge_nbr_mean(e, r - 1);
            f(e, feature_cross_neighbor(max_stage, r)) = mean_over(node_col, tables.edge_endpoint_nodes(eid, r));
        }
        f(e, feature_cross(max_stage)) =
            0.5 * (node_col[static_cast<Eigen::Index>(i)] + node_col[static_cast<Eigen::Index>(j)]);
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto nid = static_cast<NodeId>(i);
        const auto& incident = tables.incident(nid);
        const Eigen::Index row = m + i;
        f(row, feature_self()) = node_col[i];
        f(row, feature_cross(max_stage)) = mean_over(edge_col, incident);
        for (int r = 1; r <= max_stage; ++r) {
            f(row, feature_neighbor(r)) = mean_over(node_col, tables.node(nid, r));
            if (!incident.empty()) {
                double sum = 0.0;
                for (EdgeId e : incident) {
                    sum += edge_nbr_mean(static_cast<Eigen::Index>(e), r - 1);
                }
                f(row, feature_cross_neighbor(max_stage, r)) = sum / static_cast<double>(incident.size());
            }
        }
    }
    return f;
}

}  // namespace detail

Eigen::VectorXd regressor_row(const PanelSeries& panel, const NeighborhoodTables& tables, const GnarexSpec& spec,
                              SeriesRef target, std::size_t t) {
    spec.validate();
    const auto lags = static_cast<std::size_t>(spec.max_lag);
    if (t < lags) {
        throw RangeError("regressor row needs t >= L (t=" + std::to_string(t) + ", L=" + std::to_string(lags) + ")");
    }
    if (t > panel.length()) {
        throw RangeError("time index " + std::to_string(t) + " beyond series length " +
                         std::to_string(panel.length()));
    }
    const auto row = static_cast<Eigen::Index>(stacked_index(panel.network(), target));
    const int rmax = spec.max_stage();
    Eigen::VectorXd x(static_cast<Eigen::Index>(spec.parameter_count()));
    Eigen::Index k = 0;
    for (int l = 1; l <= spec.max_lag; ++l) {
        const auto col = static_cast<Eigen::Index>(t) - l;
        const Eigen::MatrixXd f =
            detail::column_features(tables, panel.node_values().col(col), panel.edge_values().col(col), rmax);
        x[k++] = f(row, detail::feature_self());
        for (int r = 1; r <= spec.stage(l); ++r) {
            x[k++] = f(row, detail::feature_neighbor(r));
        }
        x[k++] = f(row, detail::feature_cross(rmax));
        for (int r = 1; r <= spec.stage(l); ++r) {
            x[k++] = f(row, detail::feature_cross_neighbor(rmax, r));
        }
    }
    return x;
}

namespace {

template <typename Index>
void spread(Eigen::MatrixXd& a, Eigen::Index row, Eigen::Index column_offset, const std::vector<Index>& set,
            double mass) {
    if (set.empty() || mass == 0.0) {
        return;
    }
    const double w = mass / static_cast<double>(set.size());
    for (Index x : set) {
        a(row, column_offset + static_cast<Eigen::Index>(x)) += w;
    }
}

}  // namespace

std::vector<Eigen::MatrixXd> to_var(const NeighborhoodTables& tables, const GnarexSpec& spec,
                                    const GnarexParams& params, EquationForm form) {
    params.check(spec);
    const auto k = static_cast<Eigen::Index>(tables.node_count());
    const auto m = static_cast<Eigen::Index>(tables.edge_count());
    const Eigen::Index n = m + k;
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(static_cast<std::size_t>(spec.max_lag));
    for (int l = 1; l <= spec.max_lag; ++l) {
        const auto li = static_cast<std::size_t>(l - 1);
        const double alpha = params.alpha[li];
        const double gamma = params.gamma[li];
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);

        for (Eigen::Index e = 0; e < m; ++e) {
            const auto eid = static_cast<EdgeId>(e);
            const auto [i, j] = tables.endpoints(eid);
            a(e, e) += alpha;
            a(e, m + static_cast<Eigen::Index>(i)) += 0.5 * gamma;
            a(e, m + static_cast<Eigen::Index>(j)) += 0.5 * gamma;
            for (int r = 1; r <= spec.stage(l); ++r) {
                const auto ri = static_cast<std::size_t>(r - 1);
                spread(a, e, 0, tables.edge(eid, r), params.beta[li][ri]);
                spread(a, e, m, tables.edge_endpoint_nodes(eid, r), params.delta[li][ri]);
            }
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto nid = static_cast<NodeId>(i);
            const Eigen::Index row = m + i;
            const auto& incident = tables.incident(nid);
            a(row, row) += alpha;
            spread(a, row, 0, incident, gamma);
            for (int r = 1; r <= spec.stage(l); ++r) {
                const auto ri = static_cast<std::size_t>(r - 1);
                spread(a, row, m, tables.node(nid, r), params.beta[li][ri]);
                double delta = params.delta[li][ri];
                if (form == EquationForm::literal) {
                    delta *= gamma;
                }
                if (incident.empty()) {
                    continue;
                }
                const double per_edge = delta / static_cast<double>(incident.size());
                for (EdgeId kp : incident) {
                    spread(a, row, 0, tables.edge(kp, r), per_edge);
                }
            }
        }
        mats.push_back(std::move(a));
    }
    return mats;
}

double spectral_radius(const std::vector<Eigen::MatrixXd>& var_mats) {
    if (var_mats.empty()) {
        throw ArgumentError("spectral radius of an empty VAR");
    }
    const Eigen::Index d = var_mats.front().rows();
    for (const auto& a : var_mats) {
        if (a.rows() != d || a.cols() != d) {
            throw ArgumentError("VAR coefficient matrices must be square with equal dimension");
        }
    }
    if (d == 0) {
        return 0.0;
    }
    const auto lags = static_cast<Eigen::Index>(var_mats.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(lags * d, lags * d);
    for (Eigen::Index l = 0; l < lags; ++l) {
        companion.block(0, l * d, d, d) = var_mats[static_cast<std::size_t>(l)];
    }
    if (lags > 1) {
        companion.block(d, 0, (lags - 1) * d, (lags - 1) * d).setIdentity();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigensolver did not converge on the companion matrix");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& var_mats, const Eigen::MatrixXd& noise) {
    if (var_mats.empty()) {
        throw ArgumentError("VAR needs at least one lag");
    }
    const Eigen::Index n = noise.rows();
    for (const auto& a : var_mats) {
        if (a.rows() != n || a.cols() != n) {
            throw ArgumentError("noise rows do not match VAR dimension");
        }
    }
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, noise.cols());
    for (Eigen::Index t = 0; t < noise.cols(); ++t) {
        Eigen::VectorXd yt = noise.col(t);
        for (std::size_t l = 1; l <= var_mats.size(); ++l) {
            const Eigen::Index src = t - static_cast<Eigen::Index>(l);
            if (src >= 0) {
                yt.noalias() += var_mats[l - 1] * y.col(src);
            }
        }
        y.col(t) = yt;
    }
    return y;
}

Eigen::MatrixXd simulate_recursion(const NeighborhoodTables& tables, const GnarexSpec& spec,
                                   const GnarexParams& params, const Eigen::MatrixXd& noise, EquationForm form) {
    params.check(spec);
    const auto k = static_cast<Eigen::Index>(tables.node_count());
    const auto m = static_cast<Eigen::Index>(tables.edge_count());
    if (noise.rows() != m + k) {
        throw ArgumentError("noise rows must equal M+K");
    }
    const int rmax = spec.max_stage();
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m + k, noise.cols());
    std::vector<Eigen::MatrixXd> features(static_cast<std::size_t>(noise.cols()));
    for (Eigen::Index t = 0; t < noise.cols(); ++t) {
        for (Eigen::Index row = 0; row < m + k; ++row) {
            const bool is_node = row >= m;
            double mean = 0.0;
            for (int l = 1; l <= spec.max_lag; ++l) {
                const Eigen::Index src = t - l;
                if (src < 0) {
                    continue;
                }
                const auto li = static_cast<std::size_t>(l - 1);
                const auto& f = features[static_cast<std::size_t>(src)];
                mean += params.alpha[li] * f(row, detail::feature_self());
                mean += params.gamma[li] * f(row, detail::feature_cross(rmax));
                for (int r = 1; r <= spec.stage(l); ++r) {
                    const auto ri = static_cast<std::size_t>(r - 1);
                    double delta = params.delta[li][ri];
                    if (is_node && form == EquationForm::literal) {
                        delta *= params.gamma[li];
                    }
                    mean += params.beta[li][ri] * f(row, detail::feature_neighbor(r));
                    mean += delta * f(row, detail::feature_cross_neighbor(rmax, r));
                }
            }
            y(row, t) = mean + noise(row, t);
        }
        features[static_cast<std::size_t>(t)] =
            detail::column_features(tables, y.col(t).tail(k), y.col(t).head(m), rmax);
    }
    return y;
}

}  // namespace gnarex
