#include "gnarex/nowcast.hpp"

#include "gnarex/arima.hpp"
#include "gnarex/errors.hpp"
#include "gnarex/estimation.hpp"
#include "gnarex/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gnarex {

void ReleaseDataset::validate() const {
    if (!network) {
        throw ArgumentError("release '" + release_id + "' has no network");
    }
    if (static_cast<std::size_t>(node_levels.rows()) != network->node_count() ||
        static_cast<std::size_t>(edge_levels.rows()) != network->edge_count()) {
        throw ArgumentError("release '" + release_id + "' level matrices do not match the network");
    }
    if (edge_levels.rows() > 0 && edge_levels.cols() != node_levels.cols()) {
        throw ArgumentError("release '" + release_id + "' node and edge levels differ in length");
    }
    if (!time_index.empty() && time_index.size() != static_cast<std::size_t>(node_levels.cols())) {
        throw ArgumentError("release '" + release_id + "' time index length mismatch");
    }
    if (!node_levels.allFinite() || !edge_levels.allFinite()) {
        throw DataError("release '" + release_id + "' contains non-finite levels");
    }
    if (node_levels.size() > 0 && node_levels.minCoeff() <= 0.0) {
        throw DataError("release '" + release_id + "' has non-positive node levels");
    }
    if (edge_levels.size() > 0 && edge_levels.minCoeff() < 0.0) {
        throw DataError("release '" + release_id + "' has negative payment levels");
    }
}

std::vector<double> to_growth(std::span<const double> levels) {
    std::vector<double> g;
    if (levels.empty()) {
        return g;
    }
    g.reserve(levels.size() - 1);
    for (std::size_t t = 0; t < levels.size(); ++t) {
        if (!(levels[t] > 0.0)) {
            throw DataError("growth rates need strictly positive levels (value " + std::to_string(levels[t]) +
                            " at position " + std::to_string(t) + ")");
        }
        if (t > 0) {
            g.push_back(levels[t] / levels[t - 1] - 1.0);
        }
    }
    return g;
}

EdgeGrowth edge_growth(std::span<const double> levels) {
    EdgeGrowth out;
    for (std::size_t t = 1; t < levels.size(); ++t) {
        if (levels[t - 1] < 0.0 || levels[t] < 0.0) {
            throw DataError("payment levels must be nonnegative");
        }
        if (levels[t - 1] == 0.0) {
            out.values.push_back(0.0);
            ++out.zero_base;
        } else {
            out.values.push_back(levels[t] / levels[t - 1] - 1.0);
        }
    }
    return out;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw ArgumentError("correlation needs two series of equal length >= 2");
    }
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) {
        return std::nullopt;
    }
    return sab / std::sqrt(saa * sbb);
}

void SparsificationConfig::validate() const {
    if (!(corr_threshold > 0.0 && corr_threshold <= 1.0)) {
        throw ArgumentError("corr_threshold must lie in (0,1]");
    }
}

namespace {

std::vector<double> row_vector(const Eigen::MatrixXd& m, Eigen::Index r) {
    std::vector<double> v(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        v[static_cast<std::size_t>(c)] = m(r, c);
    }
    return v;
}

}  // namespace

SparsifyResult sparsify(const ReleaseDataset& release, const SparsificationConfig& cfg) {
    release.validate();
    cfg.validate();
    const StaticNetwork& net = *release.network;
    std::set<NodeId> dropped;
    for (const auto& label : cfg.drop_nodes) {
        const auto id = net.find_node(label);
        if (!id) {
            throw ArgumentError("drop_nodes entry '" + label + "' is not a node of release '" +
                                release.release_id + "'");
        }
        dropped.insert(*id);
    }

    SparsifyResult out;
    std::vector<NodeId> kept_nodes;
    std::vector<NodeId> new_index(net.node_count(), 0);
    for (NodeId i = 0; i < net.node_count(); ++i) {
        if (dropped.count(i)) {
            out.removed_nodes.push_back(net.node_label(i));
        } else {
            new_index[i] = kept_nodes.size();
            kept_nodes.push_back(i);
        }
    }
    if (kept_nodes.empty()) {
        throw ArgumentError("sparsification removed every node");
    }

    std::vector<std::vector<double>> node_growth(net.node_count());
    for (NodeId i : kept_nodes) {
        node_growth[i] = to_growth(row_vector(release.node_levels, static_cast<Eigen::Index>(i)));
    }

    std::vector<EdgeId> kept_edges;
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        const auto [s, t] = net.edge(e);
        if (dropped.count(s) || dropped.count(t)) {
            out.removed_edges.push_back(net.edge_label(e));
            continue;
        }
        if (release.length() < 3) {
            kept_edges.push_back(e);
            continue;
        }
        const auto g = edge_growth(row_vector(release.edge_levels, static_cast<Eigen::Index>(e))).values;
        double strongest = 0.0;
        auto consider = [&](NodeId i) {
            const auto c = pearson(g, node_growth[i]);
            if (!c) {
                ++out.undefined_correlations;
                return;
            }
            strongest = std::max(strongest, std::abs(*c));
        };
        if (cfg.scope == CorrelationScope::endpoints) {
            consider(s);
            consider(t);
        } else {
            for (NodeId i : kept_nodes) {
                consider(i);
            }
        }
        if (strongest > cfg.corr_threshold) {
            out.removed_edges.push_back(net.edge_label(e));
        } else {
            kept_edges.push_back(e);
        }
    }

    std::vector<std::string> labels;
    for (NodeId i : kept_nodes) {
        labels.push_back(net.node_label(i));
    }
    std::vector<Edge> edges;
    for (EdgeId e : kept_edges) {
        const auto [s, t] = net.edge(e);
        edges.push_back({new_index[s], new_index[t]});
    }

    ReleaseDataset& r = out.release;
    r.release_id = release.release_id;
    r.time_index = release.time_index;
    r.network = std::make_shared<const StaticNetwork>(std::move(labels), std::move(edges));
    r.node_levels.resize(static_cast<Eigen::Index>(kept_nodes.size()), release.node_levels.cols());
    for (std::size_t k = 0; k < kept_nodes.size(); ++k) {
        r.node_levels.row(static_cast<Eigen::Index>(k)) = release.node_levels.row(static_cast<Eigen::Index>(kept_nodes[k]));
    }
    r.edge_levels.resize(static_cast<Eigen::Index>(kept_edges.size()), release.node_levels.cols());
    for (std::size_t k = 0; k < kept_edges.size(); ++k) {
        r.edge_levels.row(static_cast<Eigen::Index>(k)) = release.edge_levels.row(static_cast<Eigen::Index>(kept_edges[k]));
    }
    return out;
}

namespace {

constexpr std::size_t kMinimumMonths = 26;

struct Prepared {
    ReleaseDataset release;
    Eigen::MatrixXd node_growth;  // K x (T-1)
    std::vector<Decomposition> node_parts;
    PanelSeries residuals;
    bool degenerate = false;
};

// Fill scores from actuals on the level scale.
void score(ModelNowcast& m, const std::optional<std::map<std::string, double>>& actuals,
           std::vector<std::string>& flags) {
    m.total_forecast = 0.0;
    for (const auto& ind : m.industries) {
        m.total_forecast += ind.point;
    }
    if (!actuals) {
        return;
    }
    double total = 0.0;
    std::size_t inside = 0;
    bool complete = true;
    for (auto& ind : m.industries) {
        const auto it = actuals->find(ind.industry);
        if (it == actuals->end()) {
            complete = false;
            continue;
        }
        ind.actual = it->second;
        ind.relative_error = std::abs(ind.point - it->second) / it->second;
        total += it->second;
        if (it->second >= ind.lower && it->second <= ind.upper) {
            ++inside;
        }
    }
    if (!complete) {
        const std::string flag = "actuals missing for some industries; totals not scored";
        if (std::find(flags.begin(), flags.end(), flag) == flags.end()) {
            flags.push_back(flag);
        }
        return;
    }
    m.total_actual = total;
    m.relative_error = std::abs(m.total_forecast - total) / total;
    m.inclusion = m.industries.empty() ? 0.0
                                       : static_cast<double>(inside) / static_cast<double>(m.industries.size());
}

ModelNowcast gnarex_nowcast(const Prepared& prep, const GnarexSpec& spec, const NowcastOptions& options,
                            const NeighborhoodTables& tables) {
    const auto k = static_cast<Eigen::Index>(prep.release.network->node_count());
    Eigen::VectorXd point = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd upper = Eigen::VectorXd::Zero(k);
    if (!prep.degenerate) {
        const GnarexFit f = fit(prep.residuals, tables, spec);
        const ForecastResult fc = forecast(f, 1, options.level);
        point = fc.node_point.col(0);
        lower = fc.node_lower.col(0);
        upper = fc.node_upper.col(0);
    }
    ModelNowcast m;
    m.model = spec.to_string();
    m.spec = spec;
    const Eigen::Index last = prep.release.node_levels.cols() - 1;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& parts = prep.node_parts[static_cast<std::size_t>(i)];
        const double shift = parts.next_seasonal(options.period) + parts.trend.back();
        const double level = prep.release.node_levels(i, last);
        IndustryNowcast ind;
        ind.industry = prep.release.network->node_label(static_cast<NodeId>(i));
        ind.point = level * (1.0 + point[i] + shift);
        ind.lower = level * (1.0 + lower[i] + shift);
        ind.upper = level * (1.0 + upper[i] + shift);
        m.industries.push_back(ind);
    }
    return m;
}

Prepared prepare(const ReleaseDataset& release, const SparsificationConfig& cfg, const NowcastOptions& options,
                 NowcastReport& report) {
    SparsifyResult sp = sparsify(release, cfg);
    if (sp.undefined_correlations > 0) {
        report.flags.push_back(std::to_string(sp.undefined_correlations) +
                               " correlations against constant series treated as 0");
    }
    const ReleaseDataset& r = sp.release;
    if (r.length() < kMinimumMonths) {
        throw RangeError("release '" + r.release_id + "' has " + std::to_string(r.length()) + " months; need " +
                         std::to_string(kMinimumMonths));
    }
    const auto k = r.node_levels.rows();
    const auto m = r.edge_levels.rows();
    const auto periods = static_cast<Eigen::Index>(r.length() - 1);

    Eigen::MatrixXd node_growth(k, periods);
    Eigen::MatrixXd node_resid(k, periods);
    Eigen::MatrixXd edge_resid(m, periods);
    std::vector<Decomposition> parts;
    double growth_scale = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto g = to_growth(row_vector(r.node_levels, i));
        Decomposition d = deseasonalize(g, options.period, options.method);
        for (Eigen::Index t = 0; t < periods; ++t) {
            node_growth(i, t) = g[static_cast<std::size_t>(t)];
            node_resid(i, t) = d.residual[static_cast<std::size_t>(t)];
            growth_scale = std::max(growth_scale, std::abs(g[static_cast<std::size_t>(t)]));
        }
        parts.push_back(std::move(d));
    }
    std::size_t zero_base = 0;
    for (Eigen::Index e = 0; e < m; ++e) {
        const auto g = edge_growth(row_vector(r.edge_levels, e));
        zero_base += g.zero_base;
        const Decomposition d = deseasonalize(g.values, options.period, options.method);
        for (Eigen::Index t = 0; t < periods; ++t) {
            edge_resid(e, t) = d.residual[static_cast<std::size_t>(t)];
            growth_scale = std::max(growth_scale, std::abs(g.values[static_cast<std::size_t>(t)]));
        }
    }
    if (zero_base > 0) {
        report.flags.push_back(std::to_string(zero_base) + " payment transitions from a zero level set to growth 0");
    }

    std::vector<std::string> growth_index;
    if (!r.time_index.empty()) {
        growth_index.assign(r.time_index.begin() + 1, r.time_index.end());
    }
    Prepared prep{r, node_growth, std::move(parts), PanelSeries(r.network, node_resid, edge_resid, growth_index)};
    const double resid_max = std::max(node_resid.size() ? node_resid.cwiseAbs().maxCoeff() : 0.0,
                                      edge_resid.size() ? edge_resid.cwiseAbs().maxCoeff() : 0.0);
    if (resid_max <= 1e-12 * growth_scale) {
        prep.degenerate = true;
        report.flags.push_back("deseasonalized residuals are identically zero; GNAR-ex residual forecasts set to 0");
    }
    report.release_id = r.release_id;
    report.industries = r.network->node_labels();
    report.edges_after_sparsification = r.network->edge_count();
    return prep;
}

ModelNowcast arima_baseline(const ReleaseDataset& r, const std::string& name, const NowcastOptions& options) {
    ModelNowcast m;
    m.model = name;
    const Eigen::Index last = r.node_levels.cols() - 1;
    for (Eigen::Index i = 0; i < r.node_levels.rows(); ++i) {
        const auto levels = row_vector(r.node_levels, i);
        IndustryNowcast ind;
        ind.industry = r.network->node_label(static_cast<NodeId>(i));
        if (name == kBaselineArima010Growth) {
            const auto g = to_growth(levels);
            const ArimaFit a = arima_fit(g, {0, 1, 0});
            const ArimaForecast fc = arima_forecast(a, g, 1, options.level);
            const double level = r.node_levels(i, last);
            ind.point = level * (1.0 + fc.point[0]);
            ind.lower = level * (1.0 + fc.lower[0]);
            ind.upper = level * (1.0 + fc.upper[0]);
        } else {
            const ArimaFit a = name == kBaselineAutoArima ? auto_arima(levels) : arima_fit(levels, {0, 1, 0});
            const ArimaForecast fc = arima_forecast(a, levels, 1, options.level);
            ind.point = fc.point[0];
            ind.lower = fc.lower[0];
            ind.upper = fc.upper[0];
        }
        m.industries.push_back(ind);
    }
    return m;
}

}  // namespace

const ModelNowcast* NowcastReport::best_gnarex() const {
    const ModelNowcast* best = nullptr;
    for (const auto& m : gnarex) {
        if (m.relative_error && (!best || *m.relative_error < *best->relative_error)) {
            best = &m;
        }
    }
    return best;
}

const ModelNowcast* NowcastReport::baseline(const std::string& name) const {
    for (const auto& m : baselines) {
        if (m.model == name) {
            return &m;
        }
    }
    return nullptr;
}

NowcastReport nowcast_release(const ReleaseDataset& release, const SparsificationConfig& cfg,
                              const std::vector<GnarexSpec>& specs,
                              const std::optional<std::map<std::string, double>>& next_actuals,
                              const NowcastOptions& options) {
    if (specs.empty()) {
        throw ArgumentError("nowcast needs at least one GNAR-ex specification");
    }
    NowcastReport report;
    const Prepared prep = prepare(release, cfg, options, report);

    int stage_cover = 0;
    for (const auto& s : specs) {
        s.validate();
        stage_cover = std::max(stage_cover, s.max_stage());
    }
    const NeighborhoodTables tables(*prep.release.network, stage_cover);

    std::optional<std::string> last_error;
    std::exception_ptr last_exception;
    for (const auto& spec : specs) {
        try {
            ModelNowcast m = gnarex_nowcast(prep, spec, options, tables);
            score(m, next_actuals, report.flags);
            report.gnarex.push_back(std::move(m));
        } catch (const Error& e) {
            report.flags.push_back(spec.to_string() + " skipped: " + e.what());
            last_exception = std::current_exception();
        }
    }
    if (report.gnarex.empty()) {
        std::rethrow_exception(last_exception);
    }

    if (options.model_average) {
        ModelNowcast ma;
        ma.model = kNowcastMa;
        const std::size_t count = report.gnarex.size();
        for (std::size_t i = 0; i < report.industries.size(); ++i) {
            IndustryNowcast ind = report.gnarex.front().industries[i];
            ind.actual.reset();
            ind.relative_error.reset();
            double seen = 1.0;
            for (std::size_t s = 1; s < count; ++s) {
                const auto& other = report.gnarex[s].industries[i];
                seen += 1.0;
                ind.point += (other.point - ind.point) / seen;
                ind.lower = std::min(ind.lower, other.lower);
                ind.upper = std::max(ind.upper, other.upper);
            }
            ma.industries.push_back(ind);
        }
        score(ma, next_actuals, report.flags);
        report.model_average = std::move(ma);
    }

    if (options.baselines) {
        for (const char* name : {kBaselineAutoArima, kBaselineArima010, kBaselineArima010Growth}) {
            try {
                ModelNowcast m = arima_baseline(prep.release, name, options);
                score(m, next_actuals, report.flags);
                report.baselines.push_back(std::move(m));
            } catch (const Error& e) {
                report.flags.push_back(std::string(name) + " baseline skipped: " + e.what());
            }
        }
    }
    return report;
}

NowcastReport model_average_release(const ReleaseDataset& release, const SparsificationConfig& cfg,
                                    const std::optional<std::map<std::string, double>>& next_actuals,
                                    NowcastOptions options, int max_lag, int stage) {
    if (max_lag < 1 || stage < 0) {
        throw ArgumentError("model averaging needs max_lag >= 1 and stage >= 0");
    }
    std::vector<GnarexSpec> specs;
    for (int lag = 1; lag <= max_lag; ++lag) {
        specs.push_back(GnarexSpec::uniform(lag, stage));
    }
    options.model_average = true;
    return nowcast_release(release, cfg, specs, next_actuals, options);
}

IndustrySummary industry_summary(const std::vector<NowcastReport>& reports, const std::string& model,
                                 std::size_t top_k) {
    if (reports.empty()) {
        throw ArgumentError("industry summary needs at least one report");
    }
    std::map<std::string, std::vector<double>> errors;
    std::vector<std::string> order;
    IndustrySummary out;
    for (const auto& report : reports) {
        const ModelNowcast* m = nullptr;
        if (model == kNowcastMa && report.model_average) {
            m = &*report.model_average;
        } else {
            for (const auto& g : report.gnarex) {
                if (g.model == model) {
                    m = &g;
                }
            }
            if (!m) {
                m = report.baseline(model);
            }
        }
        if (!m) {
            continue;
        }
        std::vector<std::pair<std::string, double>> ranked;
        for (const auto& ind : m->industries) {
            if (!ind.relative_error) {
                continue;
            }
            if (!errors.count(ind.industry)) {
                order.push_back(ind.industry);
            }
            errors[ind.industry].push_back(*ind.relative_error);
            ranked.emplace_back(ind.industry, *ind.relative_error);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        if (ranked.size() > top_k) {
            ranked.resize(top_k);
        }
        out.top.emplace_back(report.release_id, std::move(ranked));
    }
    for (const auto& name : order) {
        const auto& v = errors[name];
        IndustryErrorSummary s;
        s.industry = name;
        s.releases = v.size();
        s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        if (v.size() < 2) {
            s.sd = 0.0;
            s.sd_undefined = true;
        } else {
            double ss = 0.0;
            for (double x : v) {
                ss += (x - s.mean) * (x - s.mean);
            }
            s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
        out.industries.push_back(s);
    }
    return out;
}

double scale_relative_error(double relative_error, std::size_t sample_size) {
    return relative_error * std::sqrt(static_cast<double>(sample_size));
}

}  // namespace gnarex
