#include "gnarex_cli/commands.hpp"

#include "gnarex/arima.hpp"
#include "gnarex/errors.hpp"
#include "gnarex/estimation.hpp"
#include "gnarex/forecasting.hpp"
#include "gnarex/io.hpp"
#include "gnarex/nowcast.hpp"
#include "gnarex/random.hpp"
#include "gnarex/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <optional>
#include <thread>

namespace gnarex::cli {

namespace fs = std::filesystem;

namespace {

struct Shared {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string out = ".";
    double level = 0.95;
    int lags = 1;
    std::string stages = "1";
    bool literal = false;
    std::optional<double> corr_threshold;
    bool endpoint_corr = false;
    bool stl = false;
};

void add_shared(CLI::App* app, Shared& s) {
    app->add_option("--seed", s.seed, "Master seed for every random stream")->capture_default_str();
    app->add_option("--jobs", s.jobs, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app->add_option("--out", s.out, "Output directory")->capture_default_str();
    app->add_option("--level", s.level, "Nominal interval level")->check(CLI::Range(0.5, 0.9999))->capture_default_str();
    app->add_option("--lags", s.lags, "Maximum lag L")->check(CLI::Range(1, 1000))->capture_default_str();
    app->add_option("--stages", s.stages, "Neighbour stage per lag, comma-separated (one value is broadcast)")
        ->capture_default_str();
    app->add_flag("--literal-nested-form", s.literal, "Simulate with the nested product coefficient gamma*delta");
    app->add_option("--corr-threshold", s.corr_threshold, "Edge correlation threshold for sparsification");
    app->add_flag("--endpoint-corr", s.endpoint_corr, "Screen edges only against their endpoint industries");
    app->add_flag("--stl", s.stl, "Use the loess seasonal-trend decomposition");
}

GnarexSpec spec_from(const Shared& s) {
    std::vector<int> stages = io::parse_int_list(s.stages, "--stages");
    if (stages.size() == 1 && s.lags > 1) {
        stages.assign(static_cast<std::size_t>(s.lags), stages.front());
    }
    try {
        return GnarexSpec(s.lags, stages);
    } catch (const ArgumentError& e) {
        throw DataError(std::string("--lags/--stages: ") + e.what());
    }
}

void write(const fs::path& dir, const std::string& name, const std::string& content, std::ostream& out) {
    io::write_file_atomic(dir / name, content);
    out << "wrote " << (dir / name).string() << "\n";
}

std::string month_label(std::size_t t) {
    const std::string month = std::to_string(t % 12 + 1);
    return std::to_string(2000 + t / 12) + (month.size() == 1 ? "-0" : "-") + month;
}

std::string nodes_csv(const StaticNetwork& net) {
    std::string s = "node,label\n";
    for (const auto& label : net.node_labels()) {
        s += io::csv_field(label) + "," + io::csv_field(label) + "\n";
    }
    return s;
}

std::string edges_csv(const StaticNetwork& net) {
    std::string s = "source,target\n";
    for (const auto& e : net.edges()) {
        s += io::csv_field(net.node_label(e.source)) + "," + io::csv_field(net.node_label(e.target)) + "\n";
    }
    return s;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads; the first error wins.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F body) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < std::min<std::size_t>(jobs, n); ++j) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

struct ReplicateArgs {
    int regime = 1;
    std::string regime_file;
    std::string graph = "all";
    long long reps = 50;
    std::size_t nodes = 20;
    double density = 0.4;
    bool ma = false;
    bool no_arima = false;
};

int cmd_replicate(const Shared& s, const ReplicateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.reps <= 0) {
        throw DataError("--reps must be positive");
    }
    std::vector<GraphKind> kinds;
    if (a.graph == "all") {
        kinds = {GraphKind::erdos_renyi, GraphKind::stochastic_block, GraphKind::random_dot_product};
    } else {
        try {
            kinds = {parse_graph_kind(a.graph)};
        } catch (const ArgumentError& e) {
            throw DataError(e.what());
        }
    }
    const fs::path dir(s.out);
    ReplicationOptions opts;
    opts.arima = !a.no_arima;
    opts.model_average = a.ma;
    opts.level = s.level;
    opts.jobs = s.jobs;

    std::vector<ReplicationReport> reports;
    std::size_t failures = 0;
    for (GraphKind kind : kinds) {
        SimulationRegime regime;
        if (!a.regime_file.empty()) {
            regime = io::load_regime(a.regime_file);
            regime.graph = GraphModel::make(kind, regime.graph.node_count, regime.graph.target_density);
        } else {
            regime = table_regime(a.regime, kind, a.nodes, a.density);
        }
        if (s.literal) {
            regime.form = EquationForm::literal;
        }
        ReplicationReport report = replicate_experiment(regime, static_cast<std::size_t>(a.reps), s.seed, opts);
        const std::string tag = to_string(kind);
        write(dir, "coefficients_" + tag + ".csv", io::replication_coefficients_csv(report), out);
        write(dir, "predictions_" + tag + ".csv", io::replication_predictions_csv(report), out);
        std::string log = "rep,stage,message\n";
        for (const auto& f : report.failures) {
            log += std::to_string(f.rep) + "," + f.stage + "," + io::csv_field(f.message) + "\n";
            err << tag << " replication " << f.rep << " failed at " << f.stage << ": " << f.message << "\n";
        }
        write(dir, "failures_" + tag + ".csv", log, out);
        failures += report.failures.size();
        reports.push_back(std::move(report));
    }
    if (a.ma) {
        write(dir, "inclusion_distribution.csv", io::inclusion_distribution_csv(reports), out);
    }
    return failures == 0 ? kOk : kNumericError;
}

struct PanelArgs {
    std::string nodes;
    std::string edges;
    std::string node_series;
    std::string edge_series;
    int horizon = 1;
    bool baselines = false;
};

int cmd_fit(const Shared& s, const PanelArgs& a, bool with_forecast, std::ostream& out) {
    const GnarexSpec spec = spec_from(s);
    auto net = io::load_network(a.nodes, a.edges);
    const PanelSeries panel = io::load_panel(net, a.node_series, a.edge_series);
    const GnarexFit f = fit(panel, spec);
    const fs::path dir(s.out);
    write(dir, "coefficients.csv", io::coefficients_csv(f, s.level), out);
    if (!with_forecast) {
        return kOk;
    }
    if (a.horizon < 1) {
        throw DataError("--horizon must be >= 1");
    }
    const ForecastResult fc = forecast(f, a.horizon, s.level);
    write(dir, "forecast.csv", io::forecast_csv(*net, fc), out);
    write(dir, "forecast_notes.txt",
          "Intervals are z * sqrt(sigma2 * cumulative MA weights) and exclude parameter-estimation uncertainty.\n",
          out);
    if (a.baselines) {
        std::vector<io::BaselineRow> rows;
        auto add = [&](const std::string& label, const Eigen::VectorXd& values) {
            const std::vector<double> x(values.data(), values.data() + values.size());
            for (const char* model : {kBaselineAutoArima, kBaselineArima010}) {
                const ArimaFit af = std::string(model) == kBaselineAutoArima ? auto_arima(x) : arima_fit(x, {0, 1, 0});
                const ArimaForecast afc = arima_forecast(af, x, 1, s.level);
                rows.push_back({label, model, af.order, af.aic, afc.point[0], afc.lower[0], afc.upper[0]});
            }
        };
        for (NodeId i = 0; i < net->node_count(); ++i) {
            add(net->node_label(i), panel.node_values().row(static_cast<Eigen::Index>(i)));
        }
        for (EdgeId e = 0; e < net->edge_count(); ++e) {
            add(net->edge_label(e), panel.edge_values().row(static_cast<Eigen::Index>(e)));
        }
        write(dir, "baselines.csv", io::baseline_csv(rows), out);
    }
    return kOk;
}

struct NowcastArgs {
    std::vector<std::string> releases;
    std::string config;
    std::string actuals;
    bool ma = false;
    bool no_baselines = false;
};

int cmd_nowcast(const Shared& s, const NowcastArgs& a, bool lags_given, bool stages_given, std::ostream& out,
                std::ostream& err) {
    if (!a.actuals.empty() && a.releases.size() != 1) {
        throw DataError("--actuals applies to a single release; place actuals.csv in each release directory instead");
    }
    SparsificationConfig cfg = a.config.empty() ? SparsificationConfig{} : io::load_sparsification_config(a.config);
    if (s.corr_threshold) {
        cfg.corr_threshold = *s.corr_threshold;
    }
    if (s.endpoint_corr) {
        cfg.scope = CorrelationScope::endpoints;
    }
    try {
        cfg.validate();
    } catch (const ArgumentError& e) {
        throw DataError(e.what());
    }
    NowcastOptions options;
    options.level = s.level;
    options.method = s.stl ? DecompositionMethod::stl : DecompositionMethod::moving_average;
    options.baselines = !a.no_baselines;

    const int max_lag = lags_given ? s.lags : 9;
    std::vector<int> stage_grid = stages_given ? io::parse_int_list(s.stages, "--stages") : std::vector<int>{0, 1, 2, 3};
    std::vector<GnarexSpec> specs;
    if (!a.ma) {
        for (int lag = 1; lag <= max_lag; ++lag) {
            for (int r : stage_grid) {
                if (r < 0) {
                    throw DataError("--stages entries must be >= 0");
                }
                specs.push_back(GnarexSpec::uniform(lag, r));
            }
        }
    } else if (stage_grid.size() != 1) {
        if (stages_given) {
            throw DataError("--ma averages one stage; pass a single --stages value");
        }
        stage_grid = {1};
    }

    const std::size_t n = a.releases.size();
    std::vector<ReleaseDataset> releases(n);
    std::vector<std::optional<std::map<std::string, double>>> actuals(n);
    for (std::size_t i = 0; i < n; ++i) {
        releases[i] = io::load_release(a.releases[i]);
        const fs::path candidate = a.actuals.empty() ? fs::path(a.releases[i]) / "actuals.csv" : fs::path(a.actuals);
        if (!a.actuals.empty() || fs::exists(candidate)) {
            actuals[i] = io::load_actuals(candidate);
        }
    }
    std::vector<NowcastReport> reports(n);
    parallel_for(n, s.jobs, [&](std::size_t i) {
        reports[i] = a.ma ? model_average_release(releases[i], cfg, actuals[i], options, max_lag, stage_grid.front())
                          : nowcast_release(releases[i], cfg, specs, actuals[i], options);
    });

    const fs::path dir(s.out);
    write(dir, "nowcast_specs.csv", io::nowcast_specs_csv(reports), out);
    write(dir, "nowcast_industries.csv", io::nowcast_industries_csv(reports), out);
    write(dir, "best_model.csv", io::best_model_csv(reports), out);
    if (a.ma) {
        write(dir, "model_average.csv", io::model_average_csv(reports), out);
        write(dir, "ma_inclusion.csv", io::model_average_inclusion_csv(reports), out);
    }
    for (const auto& r : reports) {
        write(dir, "inclusion_" + r.release_id + ".csv", io::inclusion_grid_csv(r), out);
    }
    const std::string flags = io::flags_text(reports);
    write(dir, "flags.txt", flags, out);
    err << flags;
    return kOk;
}

struct EvalArgs {
    std::vector<std::string> inputs;
    std::string model = kNowcastMa;
    std::size_t top_k = 3;
    std::optional<std::size_t> sqrt_t;
};

int cmd_eval(const Shared& s, const EvalArgs& a, std::ostream& out) {
    std::vector<NowcastReport> reports;
    for (const auto& input : a.inputs) {
        fs::path p(input);
        if (fs::is_directory(p)) {
            p /= "nowcast_industries.csv";
        }
        for (auto& r : io::load_industry_reports(p)) {
            reports.push_back(std::move(r));
        }
    }
    if (a.sqrt_t) {
        for (auto& r : reports) {
            auto scale = [&](ModelNowcast& m) {
                for (auto& ind : m.industries) {
                    if (ind.relative_error) {
                        ind.relative_error = scale_relative_error(*ind.relative_error, *a.sqrt_t);
                    }
                }
            };
            for (auto& m : r.gnarex) {
                scale(m);
            }
            for (auto& m : r.baselines) {
                scale(m);
            }
            if (r.model_average) {
                scale(*r.model_average);
            }
        }
    }
    IndustrySummary summary;
    try {
        summary = industry_summary(reports, a.model, a.top_k);
    } catch (const ArgumentError& e) {
        throw DataError(e.what());
    }
    if (summary.industries.empty()) {
        throw DataError("no scored rows for model '" + a.model + "' in the given reports");
    }
    const fs::path dir(s.out);
    write(dir, "industry_summary.csv", io::industry_summary_csv(summary), out);
    write(dir, "top_industries.csv", io::top_industries_csv(summary), out);
    return kOk;
}

struct GraphArgs {
    std::string graph = "er";
    std::size_t nodes = 20;
    double density = 0.4;
};

GraphModel graph_model(const GraphArgs& g) {
    try {
        return GraphModel::make(parse_graph_kind(g.graph), g.nodes, g.density);
    } catch (const ArgumentError& e) {
        throw DataError(e.what());
    }
}

int cmd_gen_graph(const Shared& s, const GraphArgs& g, std::ostream& out) {
    const StaticNetwork net = generate_graph(graph_model(g), derive_seed(s.seed, "graph"));
    const fs::path dir(s.out);
    write(dir, "nodes.csv", nodes_csv(net), out);
    write(dir, "edges.csv", edges_csv(net), out);
    return kOk;
}

struct SimulateArgs {
    int regime = 1;
    std::string regime_file;
    std::string nodes_file;
    std::string edges_file;
    std::size_t length = 200;
    std::size_t burn_in = 50;
    double sigma = 0.1;
};

int cmd_simulate(const Shared& s, const GraphArgs& g, const SimulateArgs& a, bool length_given, bool burn_given,
                 bool sigma_given, std::ostream& out) {
    SimulationRegime regime;
    if (!a.regime_file.empty()) {
        regime = io::load_regime(a.regime_file);
    } else {
        if (a.regime < 1 || a.regime > 3) {
            throw DataError("--regime must be 1, 2 or 3");
        }
        regime = table_regime(a.regime, GraphKind::erdos_renyi, g.nodes, g.density);
        regime.graph = graph_model(g);
    }
    if (length_given) {
        regime.length = a.length;
    }
    if (burn_given) {
        regime.burn_in = a.burn_in;
    }
    if (sigma_given) {
        regime.noise_sd = a.sigma;
        regime.params.sigma2 = a.sigma * a.sigma;
    }
    if (s.literal) {
        regime.form = EquationForm::literal;
    }
    std::shared_ptr<const StaticNetwork> net;
    if (!a.nodes_file.empty() || !a.edges_file.empty()) {
        if (a.nodes_file.empty() || a.edges_file.empty()) {
            throw DataError("--network-nodes and --network-edges go together");
        }
        net = io::load_network(a.nodes_file, a.edges_file);
    } else {
        net = std::make_shared<const StaticNetwork>(generate_graph(regime.graph, derive_seed(s.seed, "graph")));
    }
    const PanelSeries panel = simulate_panel(net, regime, derive_seed(s.seed, "panel"));
    std::string nodes = "date,node,value\n";
    std::string edges = "date,source,target,value\n";
    for (std::size_t t = 0; t < panel.length(); ++t) {
        const auto c = static_cast<Eigen::Index>(t);
        for (NodeId i = 0; i < net->node_count(); ++i) {
            nodes += month_label(t) + "," + io::csv_field(net->node_label(i)) + "," +
                     io::format_number(panel.node_values()(static_cast<Eigen::Index>(i), c)) + "\n";
        }
        for (EdgeId e = 0; e < net->edge_count(); ++e) {
            const auto& ed = net->edge(e);
            edges += month_label(t) + "," + io::csv_field(net->node_label(ed.source)) + "," +
                     io::csv_field(net->node_label(ed.target)) + "," +
                     io::format_number(panel.edge_values()(static_cast<Eigen::Index>(e), c)) + "\n";
        }
    }
    const fs::path dir(s.out);
    write(dir, "nodes.csv", nodes_csv(*net), out);
    write(dir, "edges.csv", edges_csv(*net), out);
    write(dir, "node_series.csv", nodes, out);
    write(dir, "edge_series.csv", edges, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"GNAR-ex network time series toolkit", "gnarex"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gnarex 0.1.0");

    Shared shared;
    ReplicateArgs rep;
    PanelArgs panel;
    NowcastArgs now;
    EvalArgs ev;
    GraphArgs graph;
    SimulateArgs sim;

    auto* replicate = app.add_subcommand("replicate-sim", "Monte Carlo replication of a simulation regime");
    add_shared(replicate, shared);
    replicate->add_option("--regime", rep.regime, "Regime 1, 2 or 3")->check(CLI::Range(1, 3))->capture_default_str();
    replicate->add_option("--regime-file", rep.regime_file, "Key-value regime file (overrides --regime)");
    replicate->add_option("--graph", rep.graph, "er, sbm, rdp or all")->capture_default_str();
    replicate->add_option("--reps", rep.reps, "Replications per graph model")->capture_default_str();
    replicate->add_option("--nodes", rep.nodes, "Nodes per graph")->check(CLI::Range(2, 100000))->capture_default_str();
    replicate->add_option("--density", rep.density, "Target density")->capture_default_str();
    replicate->add_flag("--ma", rep.ma, "Also score the lag-averaged stage-1 model and its union intervals");
    replicate->add_flag("--no-arima", rep.no_arima, "Skip the per-series ARIMA baselines");

    auto add_panel = [&](CLI::App* cmd) {
        add_shared(cmd, shared);
        cmd->add_option("--nodes", panel.nodes, "Node file (node,label)")->required();
        cmd->add_option("--edges", panel.edges, "Edge list (source,target)")->required();
        cmd->add_option("--node-series", panel.node_series, "Long node series (date,node,value)")->required();
        cmd->add_option("--edge-series", panel.edge_series, "Long edge series (date,source,target,value)")->required();
    };
    auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit of one GNAR-ex specification");
    add_panel(fit_cmd);
    auto* forecast_cmd = app.add_subcommand("forecast", "Fit and forecast with Gaussian intervals");
    add_panel(forecast_cmd);
    forecast_cmd->add_option("--horizon", panel.horizon, "Forecast horizon")->capture_default_str();
    forecast_cmd->add_flag("--baselines", panel.baselines, "Also write per-series ARIMA baselines");

    auto* nowcast_cmd = app.add_subcommand("nowcast", "Nowcast industry and total levels for data releases");
    add_shared(nowcast_cmd, shared);
    nowcast_cmd->add_option("releases", now.releases, "Release directories")->required()->check(CLI::ExistingDirectory);
    nowcast_cmd->add_option("--config", now.config, "Sparsification config (drop_nodes, corr_threshold)");
    nowcast_cmd->add_option("--actuals", now.actuals, "Next-month levels (node,value) for a single release");
    nowcast_cmd->add_flag("--ma", now.ma, "Average GNAR-ex over lags 1..L at one stage (default 9 and 1)");
    nowcast_cmd->add_flag("--no-baselines", now.no_baselines, "Skip the ARIMA baselines");

    auto* eval_cmd = app.add_subcommand("eval", "Industry-level error summary across nowcast outputs");
    add_shared(eval_cmd, shared);
    eval_cmd->add_option("inputs", ev.inputs, "Nowcast output directories or industry CSVs")->required();
    eval_cmd->add_option("--model", ev.model, "Model to summarise")->capture_default_str();
    eval_cmd->add_option("--top-k", ev.top_k, "Industries listed per release")->capture_default_str();
    eval_cmd->add_option("--sqrt-t", ev.sqrt_t, "Scale relative errors by sqrt(T)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one panel from a regime");
    add_shared(simulate_cmd, shared);
    simulate_cmd->add_option("--regime", sim.regime, "Regime 1, 2 or 3")->capture_default_str();
    simulate_cmd->add_option("--regime-file", sim.regime_file, "Key-value regime file");
    simulate_cmd->add_option("--graph", graph.graph, "er, sbm or rdp")->capture_default_str();
    simulate_cmd->add_option("--nodes", graph.nodes, "Nodes")->check(CLI::Range(2, 100000))->capture_default_str();
    simulate_cmd->add_option("--density", graph.density, "Target density")->capture_default_str();
    simulate_cmd->add_option("--network-nodes", sim.nodes_file, "Use this node file instead of drawing a graph");
    simulate_cmd->add_option("--network-edges", sim.edges_file, "Use this edge list instead of drawing a graph");
    auto* length_opt = simulate_cmd->add_option("-T,--length", sim.length, "Kept time points");
    auto* burn_opt = simulate_cmd->add_option("--burn-in", sim.burn_in, "Discarded warm-up steps");
    auto* sigma_opt = simulate_cmd->add_option("--sigma", sim.sigma, "Innovation standard deviation");

    auto* graph_cmd = app.add_subcommand("gen-graph", "Draw a random directed graph");
    add_shared(graph_cmd, shared);
    graph_cmd->add_option("--graph", graph.graph, "er, sbm or rdp")->capture_default_str();
    graph_cmd->add_option("--nodes", graph.nodes, "Nodes")->check(CLI::Range(2, 100000))->capture_default_str();
    graph_cmd->add_option("--density", graph.density, "Target density")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "gnarex 0.1.0\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kUsage;
        }
        for (auto* sub : app.get_subcommands()) {
            err << sub->help();
        }
        return kInputError;
    }

    try {
        if (replicate->parsed()) {
            return cmd_replicate(shared, rep, out, err);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(shared, panel, false, out);
        }
        if (forecast_cmd->parsed()) {
            return cmd_fit(shared, panel, true, out);
        }
        if (nowcast_cmd->parsed()) {
            return cmd_nowcast(shared, now, nowcast_cmd->count("--lags") > 0, nowcast_cmd->count("--stages") > 0, out,
                               err);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(shared, ev, out);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(shared, graph, sim, length_opt->count() > 0, burn_opt->count() > 0,
                                sigma_opt->count() > 0, out);
        }
        if (graph_cmd->parsed()) {
            return cmd_gen_graph(shared, graph, out);
        }
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << "\n";
        if (!e.columns().empty()) {
            err << "dependent columns:";
            for (const auto& c : e.columns()) {
                err << " " << c;
            }
            err << "\n";
        }
        return kRankDeficient;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kNumericError;
    }
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace gnarex::cli
