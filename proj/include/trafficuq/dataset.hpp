#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trafficuq/graph.hpp"

namespace tuq {

/// Sensor-network speed matrix at a fixed sampling interval.
/// Rows are timestamps, columns are sensors, values in mph.
struct TrafficDataset {
    Eigen::MatrixXd values;                // [T x N]
    int interval_minutes = 5;
    std::vector<std::string> sensor_ids;   // size N
    std::int64_t start_epoch_s = 1704067200;  // 2024-01-01T00:00:00Z

    long T() const { return values.rows(); }
    long N() const { return values.cols(); }

    /// Throws ValidationError if shapes/ids disagree or values are non-finite.
    void validate() const;

    /// ISO-8601 UTC timestamp of row `t`.
    std::string timestamp_at(long t) const;
};

struct SplitSpec {
    double train_frac = 0.7;
    double valid_frac = 0.1;
    double test_frac = 0.2;
    void validate() const;
};

/// Single global z-score scaler fitted on the train split. One scaler across
/// all sensors keeps the inverse transform of quantile forecasts monotone.
struct Scaler {
    double mean = 0.0;
    double std = 1.0;

    double apply(double x) const { return (x - mean) / std; }
    double invert(double z) const { return z * std + mean; }
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        return (x.array() - mean) / std;
    }
    Eigen::MatrixXd invert(const Eigen::MatrixXd& z) const {
        return z.array() * std + mean;
    }
};

/// Supervised windows: sample s has input rows [s, s+history) and target rows
/// [s+history, s+history+horizon) of the source series.
struct WindowedSamples {
    std::vector<Eigen::MatrixXd> inputs;   // S matrices [history x N]
    std::vector<Eigen::MatrixXd> targets;  // S matrices [horizon x N]
    int history = 0;
    int horizon = 0;

    std::size_t size() const { return inputs.size(); }
    bool empty() const { return inputs.empty(); }
    long sensors() const { return inputs.empty() ? 0 : inputs.front().cols(); }
};

/// Desk-scale synthetic stand-in for a loop-detector corpus: a daily
/// sinusoid-plus-rush-hour-dip profile, AR(1) noise with a per-sensor scale,
/// and Poisson-arriving congestion drops. Sensors are placed along a corridor
/// so the returned graph connects neighbours.
struct SyntheticSpec {
    int n_sensors = 12;
    int n_days = 7;
    int interval_minutes = 5;

    double free_flow_mph = 65.0;
    double dip_depth_mph = 22.0;
    double dip_width_hours = 1.5;
    std::vector<double> dip_centers_hours = {8.0, 17.0};
    double diurnal_amplitude_mph = 3.0;

    std::vector<double> noise_scales_mph;  // size n_sensors; empty = all 1.0
    double congestion_event_rate_per_day = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

TrafficDataset generate_synthetic(const SyntheticSpec& spec);
std::pair<TrafficDataset, SensorGraph> generate_synthetic_with_graph(const SyntheticSpec& spec);

/// Values CSV: header row of sensor ids, one row per timestamp, '.' decimal.
/// Adjacency is either a dense N x N numeric matrix (weights, no header) or a
/// triple list with header "src,dst,distance_m" (distances; weights then come
/// from the Gaussian kernel with sigma = std of listed distances, kappa=0.1).
std::pair<TrafficDataset, SensorGraph> load_csv(const std::string& values_path,
                                                const std::string& adjacency_path);
TrafficDataset load_values_csv(const std::string& values_path);

void write_values_csv(const TrafficDataset& ds, const std::string& path);
void write_adjacency_csv(const SensorGraph& graph, const std::string& path);

struct ChronologicalSplit {
    TrafficDataset train;
    TrafficDataset valid;
    TrafficDataset test;
};

/// Contiguous train -> valid -> test split. Each part gets floor(T*frac) rows
/// and the remainder goes to train.
ChronologicalSplit split_chronological(const TrafficDataset& ds, const SplitSpec& spec);

/// Population mean/std over every cell of the train split. Errors on constant data.
Scaler fit_scaler(const TrafficDataset& train);

WindowedSamples window(const TrafficDataset& ds, int history, int horizon);

}  // namespace tuq
