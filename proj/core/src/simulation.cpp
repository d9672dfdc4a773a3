#include "gnarex/simulation.hpp"

#include "gnarex/arima.hpp"
#include "gnarex/errors.hpp"
#include "gnarex/estimation.hpp"
#include "gnarex/forecasting.hpp"
#include "gnarex/random.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace gnarex {

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::erdos_renyi:
            return "ER";
        case GraphKind::stochastic_block:
            return "SBM";
        case GraphKind::random_dot_product:
            return "RDP";
    }
    return "?";
}

GraphKind parse_graph_kind(const std::string& name) {
    std::string lower;
    for (char c : name) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "er" || lower == "erdos-renyi") {
        return GraphKind::erdos_renyi;
    }
    if (lower == "sbm") {
        return GraphKind::stochastic_block;
    }
    if (lower == "rdp") {
        return GraphKind::random_dot_product;
    }
    throw ArgumentError("unknown graph model '" + name + "' (expected er, sbm or rdp)");
}

namespace {

void check_density(std::size_t node_count, double density) {
    if (node_count < 2) {
        throw ArgumentError("random graph needs at least 2 nodes");
    }
    if (!(density > 0.0 && density < 1.0) && density != 1.0) {
        throw ArgumentError("target density must lie in (0,1]");
    }
}

// Inner expectation over b ~ Gamma(2,1) of min(1, c (x + e^{-b})).
double rdp_inner(double c, double x) {
    if (c * x >= 1.0) {
        return 1.0;
    }
    const double rest = 1.0 / c - x;
    if (rest >= 1.0) {
        return c * x + 0.25 * c;
    }
    const double y = -std::log(rest);
    const double tail = (1.0 + y) * std::exp(-y);
    return (1.0 - tail) + c * x * tail + c * std::exp(-2.0 * y) * (2.0 * y + 1.0) / 4.0;
}

// 5-point Gauss-Legendre rule on [lo, hi] split into `panels`.
template <typename F>
double integrate(F&& f, double lo, double hi, int panels) {
    static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                                 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                   0.2369268850561891, 0.2369268850561891};
    const double width = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * width;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(mid + 0.5 * width * nodes[i]);
        }
    }
    return 0.5 * width * sum;
}

}  // namespace

double rdp_expected_density(double latent_scale) {
    // <u,v> = W1 + W2 with W = u v and -log W ~ Gamma(2,1).
    const double c = latent_scale * latent_scale;
    if (c <= 0.0) {
        return 0.0;
    }
    auto outer = [c](double a) { return rdp_inner(c, std::exp(-a)) * a * std::exp(-a); };
    std::vector<double> cuts{0.0};
    if (c > 1.0) {
        cuts.push_back(std::log(c));  // c x = 1
    }
    if (1.0 / c - 1.0 > 0.0 && 1.0 / c - 1.0 < 1.0) {
        cuts.push_back(-std::log(1.0 / c - 1.0));  // c (x + 1) = 1
    }
    cuts.push_back(60.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        total += integrate(outer, cuts[k], cuts[k + 1], 600);
    }
    return total;
}

GraphModel GraphModel::erdos_renyi(std::size_t node_count, double density) {
    check_density(node_count, density);
    GraphModel m;
    m.kind = GraphKind::erdos_renyi;
    m.node_count = node_count;
    m.target_density = density;
    m.p = density;
    return m;
}

GraphModel GraphModel::stochastic_block(std::size_t node_count, double density, std::size_t blocks,
                                        double block_ratio) {
    check_density(node_count, density);
    if (blocks < 1 || blocks > node_count) {
        throw ArgumentError("SBM block count must lie in 1..K");
    }
    GraphModel m;
    m.kind = GraphKind::stochastic_block;
    m.node_count = node_count;
    m.target_density = density;
    for (std::size_t b = 0; b < blocks; ++b) {
        m.block_sizes.push_back(node_count / blocks + (b < node_count % blocks ? 1 : 0));
    }
    double within_pairs = 0.0;
    for (std::size_t s : m.block_sizes) {
        within_pairs += static_cast<double>(s) * static_cast<double>(s - 1);
    }
    const double all_pairs = static_cast<double>(node_count) * static_cast<double>(node_count - 1);
    const double between_pairs = all_pairs - within_pairs;
    m.p_between = density * all_pairs / (block_ratio * within_pairs + between_pairs);
    m.p_within = block_ratio * m.p_between;
    if (m.p_within > 1.0) {
        throw ArgumentError("SBM within-block probability exceeds 1 at this density");
    }
    return m;
}

GraphModel GraphModel::random_dot_product(std::size_t node_count, double density) {
    check_density(node_count, density);
    if (density >= 1.0) {
        throw ArgumentError("RDP density must be < 1");
    }
    GraphModel m;
    m.kind = GraphKind::random_dot_product;
    m.node_count = node_count;
    m.target_density = density;
    m.latent_dim = 2;
    double lo = 0.0;
    double hi = 1.0;
    while (rdp_expected_density(hi) < density) {
        hi *= 2.0;
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rdp_expected_density(mid) < density ? lo : hi) = mid;
    }
    m.latent_scale = 0.5 * (lo + hi);
    return m;
}

GraphModel GraphModel::make(GraphKind kind, std::size_t node_count, double density) {
    switch (kind) {
        case GraphKind::erdos_renyi:
            return erdos_renyi(node_count, density);
        case GraphKind::stochastic_block:
            return stochastic_block(node_count, density);
        case GraphKind::random_dot_product:
            return random_dot_product(node_count, density);
    }
    throw ArgumentError("unknown graph kind");
}

double GraphModel::expected_density() const {
    switch (kind) {
        case GraphKind::erdos_renyi:
            return p;
        case GraphKind::stochastic_block: {
            double within = 0.0;
            for (std::size_t s : block_sizes) {
                within += static_cast<double>(s) * static_cast<double>(s - 1);
            }
            const double all = static_cast<double>(node_count) * static_cast<double>(node_count - 1);
            return (within * p_within + (all - within) * p_between) / all;
        }
        case GraphKind::random_dot_product:
            return rdp_expected_density(latent_scale);
    }
    return 0.0;
}

StaticNetwork generate_graph(const GraphModel& model, std::uint64_t seed) {
    const std::size_t k = model.node_count;
    if (k < 2) {
        throw ArgumentError("random graph needs at least 2 nodes");
    }
    if (model.kind == GraphKind::random_dot_product && model.latent_dim != 2) {
        throw ArgumentError("RDP graphs use 2-dimensional latent positions");
    }
    constexpr int kAttempts = 10;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        Rng rng = make_rng(seed, "graph", static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        std::vector<std::size_t> block(k, 0);
        if (model.kind == GraphKind::stochastic_block) {
            std::size_t node = 0;
            for (std::size_t b = 0; b < model.block_sizes.size(); ++b) {
                for (std::size_t c = 0; c < model.block_sizes[b]; ++c) {
                    block[node++] = b;
                }
            }
        }
        std::vector<std::array<double, 2>> latent(k);
        if (model.kind == GraphKind::random_dot_product) {
            for (auto& x : latent) {
                x = {model.latent_scale * unif(rng), model.latent_scale * unif(rng)};
            }
        }

        std::vector<Edge> edges;
        for (NodeId i = 0; i < k; ++i) {
            for (NodeId j = 0; j < k; ++j) {
                if (i == j) {
                    continue;
                }
                double prob = model.p;
                if (model.kind == GraphKind::stochastic_block) {
                    prob = block[i] == block[j] ? model.p_within : model.p_between;
                } else if (model.kind == GraphKind::random_dot_product) {
                    prob = std::clamp(latent[i][0] * latent[j][0] + latent[i][1] * latent[j][1], 0.0, 1.0);
                }
                if (unif(rng) < prob) {
                    edges.push_back({i, j});
                }
            }
        }
        if (!edges.empty()) {
            return StaticNetwork::with_node_count(k, std::move(edges));
        }
    }
    throw NumericError("random graph had no edges after " + std::to_string(kAttempts) + " attempts");
}

SimulationRegime table_regime(int id, GraphKind kind, std::size_t node_count, double density) {
    SimulationRegime r;
    r.graph = GraphModel::make(kind, node_count, density);
    switch (id) {
        case 1:
            r.spec = GnarexSpec(1, {1});
            r.params = GnarexParams::zeros(r.spec);
            r.params.alpha = {0.2};
            r.params.beta = {{0.2}};
            r.params.gamma = {0.3};
            r.params.delta = {{0.2}};
            break;
        case 2:
            r.spec = GnarexSpec(1, {2});
            r.params = GnarexParams::zeros(r.spec);
            r.params.alpha = {0.2};
            r.params.beta = {{-0.2, 0.1}};
            r.params.gamma = {0.1};
            r.params.delta = {{0.05, -0.2}};
            break;
        case 3:
            r.spec = GnarexSpec(2, {2, 2});
            r.params = GnarexParams::zeros(r.spec);
            r.params.alpha = {-0.1, 0.3};
            r.params.beta = {{0.1, -0.2}, {-0.02, 0.03}};
            r.params.gamma = {0.01, 0.01};
            r.params.delta = {{0.02, -0.01}, {-0.02, 0.01}};
            break;
        default:
            throw ArgumentError("regime id must be 1, 2 or 3, got " + std::to_string(id));
    }
    r.name = "regime" + std::to_string(id);
    r.params.sigma2 = r.noise_sd * r.noise_sd;
    return r;
}

PanelSeries simulate_panel(std::shared_ptr<const StaticNetwork> net, const SimulationRegime& regime,
                           std::uint64_t seed) {
    if (!net) {
        throw ArgumentError("simulation needs a network");
    }
    if (regime.length < 1) {
        throw ArgumentError("simulation length must be >= 1");
    }
    if (!(regime.noise_sd >= 0.0)) {
        throw ArgumentError("noise standard deviation must be >= 0");
    }
    const NeighborhoodTables tables(*net, regime.spec.max_stage());
    const auto var = to_var(tables, regime.spec, regime.params, regime.form);
    const double radius = spectral_radius(var);
    if (radius >= 1.0) {
        throw StationarityError("implied VAR is not stationary: spectral radius " + std::to_string(radius), radius);
    }
    const auto n = static_cast<Eigen::Index>(net->edge_count() + net->node_count());
    const auto steps = static_cast<Eigen::Index>(regime.burn_in + regime.length);
    Rng rng = make_rng(seed, "innovations");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd noise(n, steps);
    for (Eigen::Index t = 0; t < steps; ++t) {
        for (Eigen::Index i = 0; i < n; ++i) {
            noise(i, t) = regime.noise_sd * normal(rng);
        }
    }
    const Eigen::MatrixXd y = simulate_var(var, noise);
    return PanelSeries::from_stacked(std::move(net), y.rightCols(static_cast<Eigen::Index>(regime.length)));
}

namespace {

struct RepOutcome {
    std::optional<Eigen::VectorXd> estimate;
    std::optional<Eigen::VectorXd> std_error;
    std::vector<PredictionRecord> predictions;
    std::optional<InclusionRecord> inclusion;
    std::vector<ReplicationFailure> failures;
};

std::pair<double, double> prediction_rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual,
                                          Eigen::Index edge_count) {
    const Eigen::VectorXd err = predicted - actual;
    const double all = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
    const Eigen::Index k = err.size() - edge_count;
    const double nodes = k > 0 ? std::sqrt(err.tail(k).squaredNorm() / static_cast<double>(k)) : 0.0;
    return {all, nodes};
}

Eigen::VectorXd stacked_point(const ForecastResult& f) {
    Eigen::VectorXd y(f.edge_point.rows() + f.node_point.rows());
    y << f.edge_point.col(0), f.node_point.col(0);
    return y;
}

RepOutcome run_replication(const SimulationRegime& regime, std::size_t rep, std::uint64_t master_seed,
                           const ReplicationOptions& options) {
    RepOutcome out;
    const std::uint64_t rep_seed = derive_seed(master_seed, "replication", rep);
    auto record = [&](const std::string& stage, const std::exception& e) {
        out.failures.push_back({rep, stage, e.what()});
    };

    std::shared_ptr<const StaticNetwork> net;
    std::optional<PanelSeries> panel;
    try {
        net = std::make_shared<const StaticNetwork>(generate_graph(regime.graph, derive_seed(rep_seed, "graph")));
        panel = simulate_panel(net, regime, derive_seed(rep_seed, "panel"));
    } catch (const Error& e) {
        record("simulate", e);
        return out;
    }
    const std::size_t periods = panel->length();
    const PanelSeries train = panel->head(periods - 1);
    const Eigen::VectorXd actual = panel->stacked().col(static_cast<Eigen::Index>(periods - 1));
    const auto m = static_cast<Eigen::Index>(net->edge_count());

    const int stage_cover = std::max(regime.spec.max_stage(), options.model_average ? options.ma_stage : 0);
    const NeighborhoodTables tables(*net, stage_cover);

    try {
        const GnarexFit main = fit(train, tables, regime.spec);
        out.estimate = main.coefficients();
        out.std_error = main.standard_errors();
        if (options.predictions) {
            const auto [all, nodes] = prediction_rmse(stacked_point(forecast(main, 1, options.level)), actual, m);
            out.predictions.push_back({kModelGnarex, rep, all, nodes});
        }
    } catch (const Error& e) {
        record(kModelGnarex, e);
        return out;
    }

    if (options.predictions) {
        try {
            const GnarexSpec bare(regime.spec.max_lag, std::vector<int>(regime.spec.stages.size(), 0));
            const GnarexFit f = fit(train, tables, bare);
            const auto [all, nodes] = prediction_rmse(stacked_point(forecast(f, 1, options.level)), actual, m);
            out.predictions.push_back({kModelGnarexNoNeighbors, rep, all, nodes});
        } catch (const Error& e) {
            record(kModelGnarexNoNeighbors, e);
        }
    }

    if (options.model_average) {
        try {
            std::vector<ForecastResult> forecasts;
            for (int lag = 1; lag <= options.ma_max_lag; ++lag) {
                const GnarexFit f = fit(train, tables, GnarexSpec::uniform(lag, options.ma_stage));
                forecasts.push_back(forecast(f, 1, options.level));
            }
            const ForecastResult avg = model_average(forecasts);
            const auto [all, nodes] = prediction_rmse(stacked_point(avg), actual, m);
            out.predictions.push_back({kModelGnarexMa, rep, all, nodes});
            InclusionRecord inc{rep, 0, static_cast<int>(net->node_count())};
            for (Eigen::Index i = 0; i < avg.node_point.rows(); ++i) {
                const double truth = actual[m + i];
                if (truth >= avg.node_lower(i, 0) && truth <= avg.node_upper(i, 0)) {
                    ++inc.nodes_inside;
                }
            }
            out.inclusion = inc;
        } catch (const Error& e) {
            record(kModelGnarexMa, e);
        }
    }

    if (options.arima) {
        const Eigen::MatrixXd history = train.stacked();
        Eigen::VectorXd auto_pred(history.rows());
        Eigen::VectorXd rw_pred(history.rows());
        bool auto_ok = true;
        bool rw_ok = true;
        for (Eigen::Index s = 0; s < history.rows(); ++s) {
            const Eigen::VectorXd row = history.row(s).transpose();
            const std::span<const double> series(row.data(), static_cast<std::size_t>(row.size()));
            if (auto_ok) {
                try {
                    const ArimaFit a = auto_arima(series);
                    auto_pred[s] = arima_forecast(a, series, 1, options.level).point[0];
                } catch (const Error& e) {
                    record(kModelAutoArima, e);
                    auto_ok = false;
                }
            }
            if (rw_ok) {
                try {
                    const ArimaFit a = arima_fit(series, {0, 1, 0});
                    rw_pred[s] = arima_forecast(a, series, 1, options.level).point[0];
                } catch (const Error& e) {
                    record(kModelArima010, e);
                    rw_ok = false;
                }
            }
        }
        if (auto_ok) {
            const auto [all, nodes] = prediction_rmse(auto_pred, actual, m);
            out.predictions.push_back({kModelAutoArima, rep, all, nodes});
        }
        if (rw_ok) {
            const auto [all, nodes] = prediction_rmse(rw_pred, actual, m);
            out.predictions.push_back({kModelArima010, rep, all, nodes});
        }
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double ReplicationReport::median_prediction_rmse(const std::string& model, bool nodes_only) const {
    std::vector<double> values;
    for (const auto& p : predictions) {
        if (p.model == model) {
            values.push_back(nodes_only ? p.rmse_nodes : p.rmse_all);
        }
    }
    return median(std::move(values));
}

std::map<int, double> ReplicationReport::inclusion_distribution() const {
    std::map<int, double> dist;
    if (inclusion.empty()) {
        return dist;
    }
    const int k = inclusion.front().node_count;
    for (int c = std::max(0, k - 3); c <= k; ++c) {
        dist[c] = 0.0;
    }
    for (const auto& rec : inclusion) {
        dist[rec.nodes_inside] += 1.0;
    }
    for (auto& [count, share] : dist) {
        share /= static_cast<double>(inclusion.size());
    }
    return dist;
}

ReplicationReport replicate_experiment(const SimulationRegime& regime, std::size_t n_reps,
                                       std::uint64_t master_seed, const ReplicationOptions& options) {
    if (n_reps < 1) {
        throw ArgumentError("replication count must be >= 1");
    }
    regime.params.check(regime.spec);
    if (options.model_average && (options.ma_max_lag < 1 || options.ma_stage < 0)) {
        throw ArgumentError("model averaging needs ma_max_lag >= 1 and ma_stage >= 0");
    }

    std::vector<RepOutcome> outcomes(n_reps);
    const unsigned workers = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n_reps)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < n_reps; r = next++) {
            outcomes[r] = run_replication(regime, r, master_seed, options);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    ReplicationReport report;
    report.regime = regime.name;
    report.graph = to_string(regime.graph.kind);
    report.spec = regime.spec;
    report.n_reps = n_reps;

    const Eigen::VectorXd truth = regime.params.to_vector(regime.spec);
    const auto names = regime.spec.coefficient_names();
    const double z = normal_quantile(0.5 * (1.0 + options.level));
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(truth.size());
    Eigen::VectorXd covered = Eigen::VectorXd::Zero(truth.size());
    std::size_t fitted = 0;
    for (const auto& o : outcomes) {
        report.failures.insert(report.failures.end(), o.failures.begin(), o.failures.end());
        report.predictions.insert(report.predictions.end(), o.predictions.begin(), o.predictions.end());
        if (o.inclusion) {
            report.inclusion.push_back(*o.inclusion);
        }
        if (!o.estimate) {
            continue;
        }
        ++fitted;
        const Eigen::VectorXd err = *o.estimate - truth;
        sq += err.cwiseAbs2();
        for (Eigen::Index k = 0; k < err.size(); ++k) {
            if (std::abs(err[k]) <= z * (*o.std_error)[k]) {
                covered[k] += 1.0;
            }
        }
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        CoefficientSummary s;
        s.name = names[k];
        s.true_value = truth[i];
        s.replications = fitted;
        if (fitted > 0) {
            s.rmse = std::sqrt(sq[i] / static_cast<double>(fitted));
            s.coverage = covered[i] / static_cast<double>(fitted);
        } else {
            s.rmse = std::numeric_limits<double>::quiet_NaN();
            s.coverage = std::numeric_limits<double>::quiet_NaN();
        }
        report.coefficients.push_back(s);
    }
    std::stable_sort(report.predictions.begin(), report.predictions.end(),
                     [](const PredictionRecord& a, const PredictionRecord& b) {
                         return a.model != b.model ? a.model < b.model : a.rep < b.rep;
                     });
    return report;
}

}  // namespace gnarex
