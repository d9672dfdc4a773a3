#include "gnarex/io.hpp"

#include "gnarex/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace gnarex::io {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Splits one physical record into fields, honouring double quotes.
std::vector<std::string> split_record(std::string_view line, const std::string& where) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            if (!trim(current).empty()) {
                throw DataError(where + ": stray quote inside an unquoted field");
            }
            current.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
        } else {
            current += c;
        }
    }
    if (quoted) {
        throw DataError(where + ": unterminated quoted field");
    }
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

std::string month_key(int year, int month) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

const std::string& require(const KeyValues& kv, const std::string& key, const std::string& source) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw DataError(source + ": missing key '" + key + "'");
    }
    return it->second;
}

std::vector<std::vector<double>> parse_groups(const std::string& text, std::size_t lags, const std::string& where) {
    const auto groups = split(text, ';');
    if (groups.size() != lags) {
        throw DataError(where + ": expected " + std::to_string(lags) + " ';'-separated groups, got " +
                        std::to_string(groups.size()));
    }
    std::vector<std::vector<double>> out;
    for (const auto& g : groups) {
        out.push_back(g.empty() ? std::vector<double>{} : parse_double_list(g, where));
    }
    return out;
}

std::string spec_lag(const ModelNowcast& m) {
    return m.spec ? std::to_string(m.spec->max_lag) : std::string("NA");
}

std::string spec_stage(const ModelNowcast& m) {
    if (!m.spec) {
        return "NA";
    }
    const auto& s = m.spec->stages;
    if (std::all_of(s.begin(), s.end(), [&](int r) { return r == s.front(); })) {
        return std::to_string(s.front());
    }
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? ";" : "") + std::to_string(s[i]);
    }
    return out;
}

std::vector<const ModelNowcast*> all_models(const NowcastReport& r) {
    std::vector<const ModelNowcast*> out;
    for (const auto& m : r.gnarex) {
        out.push_back(&m);
    }
    if (r.model_average) {
        out.push_back(&*r.model_average);
    }
    for (const auto& m : r.baselines) {
        out.push_back(&m);
    }
    return out;
}

std::optional<double> baseline_error(const NowcastReport& r, const char* name) {
    const ModelNowcast* m = r.baseline(name);
    return m ? m->relative_error : std::nullopt;
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError(source + ": missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::string CsvTable::where(std::size_t row) const {
    return source + ":" + std::to_string(lines.at(row));
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
    CsvTable table;
    table.source = source;
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool have_header = false;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        auto fields = split_record(line, where);
        if (!have_header) {
            std::set<std::string> seen;
            for (const auto& f : fields) {
                if (f.empty() || !seen.insert(f).second) {
                    throw DataError(where + ": empty or duplicate header name '" + f + "'");
                }
            }
            table.header = std::move(fields);
            have_header = true;
        } else {
            if (fields.size() != table.header.size()) {
                throw DataError(where + ": expected " + std::to_string(table.header.size()) + " fields, found " +
                                std::to_string(fields.size()));
            }
            table.rows.push_back(std::move(fields));
            table.lines.push_back(line_no);
        }
        if (end == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw DataError(source + ": empty file (no header row)");
    }
    return table;
}

CsvTable read_csv(const fs::path& path) {
    return parse_csv(read_text(path), path.string());
}

double parse_double(std::string_view field, const std::string& where) {
    const std::string s = trim(field);
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc() || ptr != last) {
        throw DataError(where + ": '" + s + "' is not a number");
    }
    if (!std::isfinite(value)) {
        throw DataError(where + ": non-finite value '" + s + "'");
    }
    return value;
}

long long parse_integer(std::string_view field, const std::string& where) {
    const std::string s = trim(field);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError(where + ": '" + s + "' is not an integer");
    }
    return value;
}

std::vector<int> parse_int_list(std::string_view text, const std::string& where) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        const long long v = parse_integer(part, where);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw DataError(where + ": integer out of range");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> parse_double_list(std::string_view text, const std::string& where) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        out.push_back(parse_double(part, where));
    }
    return out;
}

std::shared_ptr<const StaticNetwork> load_network(const fs::path& nodes_csv, const fs::path& edges_csv) {
    const CsvTable nodes = read_csv(nodes_csv);
    const CsvTable edges = read_csv(edges_csv);
    const std::size_t node_col = nodes.column("node");
    std::vector<std::string> labels;
    std::map<std::string, NodeId> index;
    for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
        const std::string& id = nodes.rows[r][node_col];
        if (id.empty()) {
            throw DataError(nodes.where(r) + ": empty node identifier");
        }
        if (!index.emplace(id, labels.size()).second) {
            throw DataError(nodes.where(r) + ": duplicate node '" + id + "'");
        }
        labels.push_back(id);
    }
    const std::size_t src = edges.column("source");
    const std::size_t tgt = edges.column("target");
    std::vector<Edge> list;
    for (std::size_t r = 0; r < edges.rows.size(); ++r) {
        const auto s = index.find(edges.rows[r][src]);
        const auto t = index.find(edges.rows[r][tgt]);
        if (s == index.end() || t == index.end()) {
            throw DataError(edges.where(r) + ": edge refers to unknown node '" +
                            (s == index.end() ? edges.rows[r][src] : edges.rows[r][tgt]) + "'");
        }
        list.push_back({s->second, t->second});
    }
    try {
        return std::make_shared<const StaticNetwork>(std::move(labels), std::move(list));
    } catch (const ArgumentError& e) {
        throw DataError(edges_csv.string() + ": " + e.what());
    }
}

LongPanel load_long_panel(const StaticNetwork& net, const fs::path& node_csv, const fs::path& edge_csv,
                          std::optional<double> missing_edge_value) {
    const CsvTable nodes = read_csv(node_csv);
    const CsvTable edges = read_csv(edge_csv);
    const std::size_t nd = nodes.column("date"), nn = nodes.column("node"), nv = nodes.column("value");
    const std::size_t ed = edges.column("date"), es = edges.column("source"), et = edges.column("target"),
                      ev = edges.column("value");

    std::set<std::string> date_set;
    for (const auto& row : nodes.rows) {
        date_set.insert(row[nd]);
    }
    LongPanel out;
    out.dates.assign(date_set.begin(), date_set.end());
    std::map<std::string, Eigen::Index> date_index;
    for (std::size_t t = 0; t < out.dates.size(); ++t) {
        date_index[out.dates[t]] = static_cast<Eigen::Index>(t);
    }
    const auto k = static_cast<Eigen::Index>(net.node_count());
    const auto m = static_cast<Eigen::Index>(net.edge_count());
    const auto len = static_cast<Eigen::Index>(out.dates.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.node_values = Eigen::MatrixXd::Constant(k, len, nan);
    out.edge_values = Eigen::MatrixXd::Constant(m, len, missing_edge_value.value_or(nan));

    for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
        const auto& row = nodes.rows[r];
        const auto id = net.find_node(row[nn]);
        if (!id) {
            throw DataError(nodes.where(r) + ": unknown node '" + row[nn] + "'");
        }
        const Eigen::Index t = date_index.at(row[nd]);
        const auto i = static_cast<Eigen::Index>(*id);
        if (!std::isnan(out.node_values(i, t))) {
            throw DataError(nodes.where(r) + ": duplicate value for node '" + row[nn] + "' at " + row[nd]);
        }
        out.node_values(i, t) = parse_double(row[nv], nodes.where(r));
    }
    std::vector<std::vector<bool>> seen(static_cast<std::size_t>(m), std::vector<bool>(out.dates.size(), false));
    for (std::size_t r = 0; r < edges.rows.size(); ++r) {
        const auto& row = edges.rows[r];
        const auto s = net.find_node(row[es]);
        const auto t = net.find_node(row[et]);
        const auto e = (s && t) ? net.find_edge(*s, *t) : std::nullopt;
        if (!e) {
            throw DataError(edges.where(r) + ": '" + row[es] + "->" + row[et] + "' is not an edge of the network");
        }
        const auto it = date_index.find(row[ed]);
        if (it == date_index.end()) {
            throw DataError(edges.where(r) + ": date '" + row[ed] + "' has no node observations");
        }
        if (seen[*e][static_cast<std::size_t>(it->second)]) {
            throw DataError(edges.where(r) + ": duplicate value for edge '" + row[es] + "->" + row[et] + "' at " +
                            row[ed]);
        }
        seen[*e][static_cast<std::size_t>(it->second)] = true;
        out.edge_values(static_cast<Eigen::Index>(*e), it->second) = parse_double(row[ev], edges.where(r));
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index t = 0; t < len; ++t) {
            if (std::isnan(out.node_values(i, t))) {
                throw DataError(node_csv.string() + ": missing value for node '" +
                                net.node_label(static_cast<NodeId>(i)) + "' at " +
                                out.dates[static_cast<std::size_t>(t)]);
            }
        }
    }
    for (Eigen::Index e = 0; e < m; ++e) {
        for (Eigen::Index t = 0; t < len; ++t) {
            if (std::isnan(out.edge_values(e, t))) {
                throw DataError(edge_csv.string() + ": missing value for edge '" +
                                net.edge_label(static_cast<EdgeId>(e)) + "' at " +
                                out.dates[static_cast<std::size_t>(t)]);
            }
        }
    }
    return out;
}

PanelSeries load_panel(std::shared_ptr<const StaticNetwork> net, const fs::path& node_csv,
                       const fs::path& edge_csv) {
    LongPanel p = load_long_panel(*net, node_csv, edge_csv);
    return PanelSeries(std::move(net), std::move(p.node_values), std::move(p.edge_values), std::move(p.dates));
}

void check_monthly(const std::vector<std::string>& dates, const std::string& where) {
    int prev = -1;
    for (const auto& d : dates) {
        int year = 0, month = 0;
        if (d.size() != 7 || d[4] != '-' || std::sscanf(d.c_str(), "%4d-%2d", &year, &month) != 2 || month < 1 ||
            month > 12 || month_key(year, month) != d) {
            throw DataError(where + ": date '" + d + "' is not YYYY-MM");
        }
        const int serial = year * 12 + (month - 1);
        if (prev >= 0 && serial != prev + 1) {
            throw DataError(where + ": months are not consecutive before '" + d + "'");
        }
        prev = serial;
    }
}

ReleaseDataset load_release(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw DataError("release directory '" + dir.string() + "' does not exist");
    }
    auto net = load_network(dir / "nodes.csv", dir / "edges.csv");
    LongPanel p = load_long_panel(*net, dir / "node_levels.csv", dir / "edge_levels.csv", 0.0);
    check_monthly(p.dates, (dir / "node_levels.csv").string());
    ReleaseDataset r;
    r.release_id = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    r.network = std::move(net);
    r.node_levels = std::move(p.node_values);
    r.edge_levels = std::move(p.edge_values);
    r.time_index = std::move(p.dates);
    r.validate();
    return r;
}

std::map<std::string, double> load_actuals(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t n = t.column("node"), v = t.column("value");
    std::map<std::string, double> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double value = parse_double(t.rows[r][v], t.where(r));
        if (!(value > 0.0)) {
            throw DataError(t.where(r) + ": actual levels must be positive");
        }
        if (!out.emplace(t.rows[r][n], value).second) {
            throw DataError(t.where(r) + ": duplicate node '" + t.rows[r][n] + "'");
        }
    }
    return out;
}

KeyValues parse_key_values(std::string_view text, const std::string& source) {
    KeyValues kv;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto sep = line.find_first_of("=:");
        const std::string where = source + ":" + std::to_string(line_no);
        if (sep == std::string::npos) {
            throw DataError(where + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, sep));
        if (key.empty()) {
            throw DataError(where + ": empty key");
        }
        if (!kv.emplace(key, trim(std::string_view(line).substr(sep + 1))).second) {
            throw DataError(where + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values(const fs::path& path) {
    return parse_key_values(read_text(path), path.string());
}

SparsificationConfig sparsification_config(const KeyValues& kv, const std::string& source) {
    SparsificationConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "drop_nodes") {
            for (auto& label : split(value, ',')) {
                if (!label.empty()) {
                    cfg.drop_nodes.push_back(label);
                }
            }
        } else if (key == "corr_threshold") {
            cfg.corr_threshold = parse_double(value, source + " corr_threshold");
        } else if (key == "corr_scope") {
            if (value == "all_nodes") {
                cfg.scope = CorrelationScope::all_nodes;
            } else if (value == "endpoints") {
                cfg.scope = CorrelationScope::endpoints;
            } else {
                throw DataError(source + ": corr_scope must be all_nodes or endpoints");
            }
        } else {
            throw DataError(source + ": unknown key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const ArgumentError& e) {
        throw DataError(source + ": " + e.what());
    }
    return cfg;
}

SparsificationConfig load_sparsification_config(const fs::path& path) {
    return sparsification_config(read_key_values(path), path.string());
}

SimulationRegime simulation_regime(const KeyValues& kv, const std::string& source) {
    static const std::set<std::string> known{"name", "lags",    "stages", "alpha", "beta",    "gamma", "delta",
                                             "graph", "nodes",  "density", "T",    "burn_in", "sigma", "form"};
    for (const auto& [key, value] : kv) {
        if (!known.count(key)) {
            throw DataError(source + ": unknown key '" + key + "'");
        }
    }
    auto get = [&](const std::string& key, const std::string& fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    try {
        const long long lags = parse_integer(require(kv, "lags", source), source + " lags");
        if (lags < 1 || lags > 1000) {
            throw DataError(source + ": lags must be in 1..1000");
        }
        std::vector<int> stages = parse_int_list(require(kv, "stages", source), source + " stages");
        if (stages.size() == 1 && lags > 1) {
            stages.assign(static_cast<std::size_t>(lags), stages.front());
        }
        SimulationRegime regime;
        regime.name = get("name", "custom");
        regime.spec = GnarexSpec(static_cast<int>(lags), stages);
        const auto l = static_cast<std::size_t>(lags);
        regime.params.alpha = parse_double_list(require(kv, "alpha", source), source + " alpha");
        regime.params.gamma = parse_double_list(require(kv, "gamma", source), source + " gamma");
        regime.params.beta = parse_groups(get("beta", std::string(l - 1, ';')), l, source + " beta");
        regime.params.delta = parse_groups(get("delta", std::string(l - 1, ';')), l, source + " delta");
        regime.noise_sd = parse_double(get("sigma", "0.1"), source + " sigma");
        if (!(regime.noise_sd > 0.0)) {
            throw DataError(source + ": sigma must be positive");
        }
        regime.params.sigma2 = regime.noise_sd * regime.noise_sd;
        regime.params.check(regime.spec);

        const long long nodes = parse_integer(get("nodes", "20"), source + " nodes");
        const double density = parse_double(get("density", "0.4"), source + " density");
        if (nodes < 2) {
            throw DataError(source + ": nodes must be >= 2");
        }
        regime.graph = GraphModel::make(parse_graph_kind(get("graph", "er")), static_cast<std::size_t>(nodes), density);

        const long long len = parse_integer(get("T", "200"), source + " T");
        const long long burn = parse_integer(get("burn_in", "50"), source + " burn_in");
        if (len < 2 || burn < 0) {
            throw DataError(source + ": T must be >= 2 and burn_in >= 0");
        }
        regime.length = static_cast<std::size_t>(len);
        regime.burn_in = static_cast<std::size_t>(burn);
        const std::string form = get("form", "linear");
        if (form == "linear") {
            regime.form = EquationForm::linear;
        } else if (form == "literal") {
            regime.form = EquationForm::literal;
        } else {
            throw DataError(source + ": form must be linear or literal");
        }
        return regime;
    } catch (const ArgumentError& e) {
        throw DataError(source + ": " + e.what());
    }
}

SimulationRegime load_regime(const fs::path& path) {
    return simulation_regime(read_key_values(path), path.string());
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "NA";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_optional(const std::optional<double>& x) {
    return x ? format_number(*x) : std::string("NA");
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw DataError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

std::string coefficients_csv(const GnarexFit& fit, double level) {
    std::string out = "name,estimate,std_error,ci_lower,ci_upper\n";
    for (const auto& row : coefficient_table(fit, level)) {
        out += row.name + "," + format_number(row.estimate) + "," + format_number(row.std_error) + "," +
               format_number(row.ci_lower) + "," + format_number(row.ci_upper) + "\n";
    }
    return out;
}

std::string forecast_csv(const StaticNetwork& net, const ForecastResult& fc) {
    std::string out = "series_kind,series_label,h,point,lower,upper\n";
    for (int h = 0; h < fc.horizon; ++h) {
        for (NodeId i = 0; i < net.node_count(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            out += "node," + csv_field(net.node_label(i)) + "," + std::to_string(h + 1) + "," +
                   format_number(fc.node_point(r, h)) + "," + format_number(fc.node_lower(r, h)) + "," +
                   format_number(fc.node_upper(r, h)) + "\n";
        }
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            const auto r = static_cast<Eigen::Index>(e);
            out += "edge," + csv_field(net.edge_label(e)) + "," + std::to_string(h + 1) + "," +
                   format_number(fc.edge_point(r, h)) + "," + format_number(fc.edge_lower(r, h)) + "," +
                   format_number(fc.edge_upper(r, h)) + "\n";
        }
    }
    return out;
}

std::string replication_coefficients_csv(const ReplicationReport& report) {
    std::string out = "coefficient,true_value,rmse,coverage\n";
    for (const auto& c : report.coefficients) {
        out += c.name + "," + format_number(c.true_value) + "," + format_number(c.rmse) + "," +
               format_number(c.coverage) + "\n";
    }
    return out;
}

std::string replication_predictions_csv(const ReplicationReport& report) {
    std::string out = "model,rep,prediction_rmse_all,prediction_rmse_nodes\n";
    for (const auto& p : report.predictions) {
        out += p.model + "," + std::to_string(p.rep) + "," + format_number(p.rmse_all) + "," +
               format_number(p.rmse_nodes) + "\n";
    }
    return out;
}

std::string inclusion_distribution_csv(const std::vector<ReplicationReport>& reports) {
    std::vector<std::map<int, double>> dists;
    std::set<int> counts;
    for (const auto& r : reports) {
        dists.push_back(r.inclusion_distribution());
        for (const auto& [k, share] : dists.back()) {
            counts.insert(k);
        }
    }
    std::string out = "graph";
    for (int k : counts) {
        out += "," + std::to_string(k);
    }
    out += "\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out += reports[i].graph;
        for (int k : counts) {
            const auto it = dists[i].find(k);
            out += "," + format_number(it == dists[i].end() ? 0.0 : it->second);
        }
        out += "\n";
    }
    return out;
}

std::string baseline_csv(const std::vector<BaselineRow>& rows) {
    std::string out = "series,model,p,d,q,aic,forecast,lower,upper\n";
    for (const auto& r : rows) {
        out += csv_field(r.series) + "," + r.model + "," + std::to_string(r.order.p) + "," + std::to_string(r.order.d) +
               "," + std::to_string(r.order.q) + "," + format_number(r.aic) + "," + format_number(r.forecast) + "," +
               format_number(r.lower) + "," + format_number(r.upper) + "\n";
    }
    return out;
}

std::string nowcast_specs_csv(const std::vector<NowcastReport>& reports) {
    std::string out = "release,model,lag,stage,total_forecast,total_actual,relative_error,inclusion\n";
    for (const auto& r : reports) {
        for (const ModelNowcast* m : all_models(r)) {
            out += csv_field(r.release_id) + "," + csv_field(m->model) + "," + spec_lag(*m) + "," +
                   csv_field(spec_stage(*m)) + "," + format_number(m->total_forecast) + "," +
                   format_optional(m->total_actual) + "," + format_optional(m->relative_error) + "," +
                   format_optional(m->inclusion) + "\n";
        }
    }
    return out;
}

std::string nowcast_industries_csv(const std::vector<NowcastReport>& reports) {
    std::string out = "release,model,industry,point,lower,upper,actual,relative_error\n";
    for (const auto& r : reports) {
        for (const ModelNowcast* m : all_models(r)) {
            for (const auto& ind : m->industries) {
                out += csv_field(r.release_id) + "," + csv_field(m->model) + "," + csv_field(ind.industry) + "," +
                       format_number(ind.point) + "," + format_number(ind.lower) + "," + format_number(ind.upper) +
                       "," + format_optional(ind.actual) + "," + format_optional(ind.relative_error) + "\n";
            }
        }
    }
    return out;
}

std::string best_model_csv(const std::vector<NowcastReport>& reports) {
    std::string out = "release,gnarex_lag,gnarex_stage,gnarex_error,auto_arima_error,arima_010_error\n";
    for (const auto& r : reports) {
        const ModelNowcast* best = r.best_gnarex();
        out += csv_field(r.release_id) + "," + (best ? spec_lag(*best) : "NA") + "," +
               (best ? csv_field(spec_stage(*best)) : "NA") + "," +
               (best ? format_optional(best->relative_error) : "NA") + "," +
               format_optional(baseline_error(r, kBaselineAutoArima)) + "," +
               format_optional(baseline_error(r, kBaselineArima010)) + "\n";
    }
    return out;
}

std::string model_average_csv(const std::vector<NowcastReport>& reports) {
    std::string out = "release,ma_error,auto_arima_error,arima_010_error\n";
    for (const auto& r : reports) {
        out += csv_field(r.release_id) + "," +
               (r.model_average ? format_optional(r.model_average->relative_error) : "NA") + "," +
               format_optional(baseline_error(r, kBaselineAutoArima)) + "," +
               format_optional(baseline_error(r, kBaselineArima010)) + "\n";
    }
    return out;
}

std::string model_average_inclusion_csv(const std::vector<NowcastReport>& reports) {
    std::string out = "release,forecast_inclusion\n";
    for (const auto& r : reports) {
        out += csv_field(r.release_id) + "," +
               (r.model_average ? format_optional(r.model_average->inclusion) : "NA") + "\n";
    }
    return out;
}

std::string inclusion_grid_csv(const NowcastReport& report) {
    std::map<int, std::map<int, std::optional<double>>> grid;
    std::set<int> stages;
    for (const auto& m : report.gnarex) {
        if (!m.spec) {
            continue;
        }
        const auto& s = m.spec->stages;
        if (!std::all_of(s.begin(), s.end(), [&](int r) { return r == s.front(); })) {
            continue;
        }
        grid[m.spec->max_lag][s.front()] = m.inclusion;
        stages.insert(s.front());
    }
    std::string out = "lag";
    for (int s : stages) {
        out += ",stage_" + std::to_string(s);
    }
    out += "\n";
    for (const auto& [lag, row] : grid) {
        out += std::to_string(lag);
        for (int s : stages) {
            const auto it = row.find(s);
            out += "," + (it == row.end() ? std::string("NA") : format_optional(it->second));
        }
        out += "\n";
    }
    return out;
}

std::string flags_text(const std::vector<NowcastReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        for (const auto& f : r.flags) {
            out += r.release_id + ": " + f + "\n";
        }
    }
    return out;
}

std::vector<NowcastReport> load_industry_reports(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t rel = t.column("release"), mod = t.column("model"), ind = t.column("industry"),
                      pt = t.column("point"), lo = t.column("lower"), up = t.column("upper"),
                      act = t.column("actual"), err = t.column("relative_error");
    std::vector<NowcastReport> reports;
    auto optional_number = [&](const std::string& s, std::size_t r) -> std::optional<double> {
        if (s == "NA" || s.empty()) {
            return std::nullopt;
        }
        return parse_double(s, t.where(r));
    };
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        auto rit = std::find_if(reports.begin(), reports.end(),
                                [&](const NowcastReport& x) { return x.release_id == row[rel]; });
        if (rit == reports.end()) {
            reports.emplace_back();
            reports.back().release_id = row[rel];
            rit = reports.end() - 1;
        }
        NowcastReport& report = *rit;
        ModelNowcast* m = nullptr;
        const std::string& name = row[mod];
        if (name == kNowcastMa) {
            if (!report.model_average) {
                report.model_average.emplace();
                report.model_average->model = name;
            }
            m = &*report.model_average;
        } else {
            const bool is_baseline = name == kBaselineAutoArima || name == kBaselineArima010 ||
                                     name == kBaselineArima010Growth;
            auto& bucket = is_baseline ? report.baselines : report.gnarex;
            auto mit = std::find_if(bucket.begin(), bucket.end(), [&](const ModelNowcast& x) { return x.model == name; });
            if (mit == bucket.end()) {
                bucket.emplace_back();
                bucket.back().model = name;
                mit = bucket.end() - 1;
            }
            m = &*mit;
        }
        IndustryNowcast entry;
        entry.industry = row[ind];
        entry.point = parse_double(row[pt], t.where(r));
        entry.lower = parse_double(row[lo], t.where(r));
        entry.upper = parse_double(row[up], t.where(r));
        entry.actual = optional_number(row[act], r);
        entry.relative_error = optional_number(row[err], r);
        m->total_forecast += entry.point;
        m->industries.push_back(std::move(entry));
        if (std::find(report.industries.begin(), report.industries.end(), row[ind]) == report.industries.end()) {
            report.industries.push_back(row[ind]);
        }
    }
    return reports;
}

std::string industry_summary_csv(const IndustrySummary& summary) {
    std::string out = "industry,mean_relative_error,sd_relative_error,releases,sd_undefined\n";
    for (const auto& s : summary.industries) {
        out += csv_field(s.industry) + "," + format_number(s.mean) + "," + format_number(s.sd) + "," +
               std::to_string(s.releases) + "," + (s.sd_undefined ? "true" : "false") + "\n";
    }
    return out;
}

std::string top_industries_csv(const IndustrySummary& summary) {
    std::string out = "release,rank,industry,relative_error\n";
    for (const auto& [release, ranked] : summary.top) {
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            out += csv_field(release) + "," + std::to_string(i + 1) + "," + csv_field(ranked[i].first) + "," +
                   format_number(ranked[i].second) + "\n";
        }
    }
    return out;
}

}  // namespace gnarex::io
