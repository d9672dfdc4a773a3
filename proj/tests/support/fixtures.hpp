#pragma once

#include "oracles.hpp"

#include <gnarex/model.hpp>
#include <gnarex/network.hpp>
#include <gnarex/nowcast.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace fixture {

inline std::shared_ptr<const gnarex::StaticNetwork> network(std::size_t k, std::vector<gnarex::Edge> edges) {
    return std::make_shared<const gnarex::StaticNetwork>(gnarex::StaticNetwork::with_node_count(k, std::move(edges)));
}

// 1 -> 2 -> 3
inline std::shared_ptr<const gnarex::StaticNetwork> path3() {
    return network(3, {{0, 1}, {1, 2}});
}

inline oracle::EdgeList edge_list(const gnarex::StaticNetwork& net) {
    oracle::EdgeList out;
    for (const auto& e : net.edges()) {
        out.emplace_back(static_cast<int>(e.source), static_cast<int>(e.target));
    }
    return out;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, unsigned seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            m(r, c) = z(rng);
        }
    }
    return m;
}

inline gnarex::PanelSeries random_panel(std::shared_ptr<const gnarex::StaticNetwork> net, Eigen::Index len,
                                        unsigned seed) {
    const auto k = static_cast<Eigen::Index>(net->node_count());
    const auto m = static_cast<Eigen::Index>(net->edge_count());
    return gnarex::PanelSeries(net, gaussian(k, len, seed), gaussian(m, len, seed + 1000));
}

inline std::vector<std::string> months(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < count; ++t) {
        const std::string month = std::to_string(t % 12 + 1);
        out.push_back(std::to_string(2019 + t / 12) + (month.size() == 1 ? "-0" : "-") + month);
    }
    return out;
}

// Release whose levels follow level_0 * prod(1 + growth(t)) with one growth
// path per series; `growth(series, t)` for t = 1..T-1.
template <class Growth>
gnarex::ReleaseDataset release_from_growth(std::shared_ptr<const gnarex::StaticNetwork> net, std::size_t len,
                                           Growth growth) {
    gnarex::ReleaseDataset r;
    r.release_id = "fixture";
    r.network = net;
    const auto k = static_cast<Eigen::Index>(net->node_count());
    const auto m = static_cast<Eigen::Index>(net->edge_count());
    const auto cols = static_cast<Eigen::Index>(len);
    r.node_levels.resize(k, cols);
    r.edge_levels.resize(m, cols);
    for (Eigen::Index i = 0; i < k + m; ++i) {
        double level = 100.0 + 10.0 * static_cast<double>(i);
        for (Eigen::Index t = 0; t < cols; ++t) {
            if (t > 0) {
                level *= 1.0 + growth(static_cast<std::size_t>(i), static_cast<std::size_t>(t));
            }
            if (i < k) {
                r.node_levels(i, t) = level;
            } else {
                r.edge_levels(i - k, t) = level;
            }
        }
    }
    r.time_index = months(len);
    return r;
}

// Next-month node levels continuing the same growth paths.
template <class Growth>
std::map<std::string, double> next_levels(const gnarex::ReleaseDataset& r, Growth growth) {
    std::map<std::string, double> out;
    const auto last = r.node_levels.cols() - 1;
    for (Eigen::Index i = 0; i < r.node_levels.rows(); ++i) {
        out[r.network->node_label(static_cast<gnarex::NodeId>(i))] =
            r.node_levels(i, last) * (1.0 + growth(static_cast<std::size_t>(i), static_cast<std::size_t>(last + 1)));
    }
    return out;
}

inline double seasonal_growth(std::size_t series, std::size_t t) {
    constexpr double kPi = 3.14159265358979323846;
    return 0.004 + 0.02 * std::sin(2.0 * kPi * static_cast<double>(t) / 12.0 + 0.3 * static_cast<double>(series));
}

}  // namespace fixture
