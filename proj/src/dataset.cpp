#include "trafficuq/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trafficuq/errors.hpp"
#include "trafficuq/rng.hpp"

namespace tuq {

namespace {

// Days since 1970-01-01 -> civil date (Howard Hinnant's algorithm).
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yr + (m <= 2));
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_cell(const std::string& file, long row, long col, const std::string& cell) {
    std::string t = cell;
    // trim surrounding spaces
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError(file, row, col, "empty cell");
    t = t.substr(b, e - b + 1);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError(file, row, col, "cannot parse '" + t + "' as a number");
    if (!std::isfinite(value))
        throw ParseError(file, row, col, "non-finite value '" + t + "'");
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

}  // namespace

void TrafficDataset::validate() const {
    if (T() < 1 || N() < 1) throw ValidationError("dataset needs at least one row and one sensor");
    if (interval_minutes <= 0) throw ValidationError("interval_minutes must be positive");
    if (sensor_ids.size() != static_cast<std::size_t>(N()))
        throw ValidationError("sensor id count does not match the value columns");
    if (!values.allFinite()) throw ValidationError("dataset contains non-finite values");
}

std::string TrafficDataset::timestamp_at(long t) const {
    const std::int64_t s = start_epoch_s + static_cast<std::int64_t>(t) * interval_minutes * 60;
    std::int64_t days = s / 86400;
    std::int64_t rem = s % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld", y, mo, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

void SplitSpec::validate() const {
    for (double f : {train_frac, valid_frac, test_frac})
        if (!(f > 0.0 && f < 1.0)) throw ValidationError("split fractions must lie in (0,1)");
    if (std::abs(train_frac + valid_frac + test_frac - 1.0) > 1e-9)
        throw ValidationError("split fractions must sum to 1");
}

void SyntheticSpec::validate() const {
    if (n_sensors < 1) throw ValidationError("n_sensors must be >= 1");
    if (n_days < 1) throw ValidationError("n_days must be >= 1");
    if (interval_minutes <= 0) throw ValidationError("interval_minutes must be positive");
    if (!(free_flow_mph > 0.0)) throw ValidationError("free_flow_mph must be positive");
    if (dip_depth_mph < 0.0) throw ValidationError("dip_depth_mph must be nonnegative");
    if (!(dip_width_hours > 0.0)) throw ValidationError("dip_width_hours must be positive");
    if (diurnal_amplitude_mph < 0.0) throw ValidationError("diurnal amplitude must be nonnegative");
    if (congestion_event_rate_per_day < 0.0)
        throw ValidationError("congestion_event_rate_per_day must be nonnegative");
    if (!noise_scales_mph.empty() &&
        noise_scales_mph.size() != static_cast<std::size_t>(n_sensors))
        throw ValidationError("noise_scales_mph must have one entry per sensor");
    for (double s : noise_scales_mph)
        if (s < 0.0) throw ValidationError("noise scales must be nonnegative");
}

namespace {

double base_profile(const SyntheticSpec& spec, double hour_of_day) {
    double v = spec.free_flow_mph;
    v -= spec.diurnal_amplitude_mph * 0.5 * (1.0 + std::sin(2.0 * M_PI * (hour_of_day - 15.0) / 24.0));
    for (double c : spec.dip_centers_hours) {
        double delta = std::fmod(std::abs(hour_of_day - c), 24.0);
        delta = std::min(delta, 24.0 - delta);
        v -= spec.dip_depth_mph *
             std::exp(-delta * delta / (2.0 * spec.dip_width_hours * spec.dip_width_hours));
    }
    return v;
}

}  // namespace

TrafficDataset generate_synthetic(const SyntheticSpec& spec) {
    return generate_synthetic_with_graph(spec).first;
}

std::pair<TrafficDataset, SensorGraph> generate_synthetic_with_graph(const SyntheticSpec& spec) {
    spec.validate();
    const long steps_per_day = 24 * 60 / spec.interval_minutes;
    const long T = steps_per_day * spec.n_days;
    const int N = spec.n_sensors;
    const double hours_per_step = spec.interval_minutes / 60.0;

    Eigen::MatrixXd values(T, N);
    std::vector<double> scales = spec.noise_scales_mph;
    if (scales.empty()) scales.assign(static_cast<std::size_t>(N), 1.0);

    const double phi = 0.85;  // AR(1) memory; stationary sd equals the configured scale
    for (int j = 0; j < N; ++j) {
        Rng rng(derive_seed(spec.seed, "synthetic-sensor", static_cast<std::uint64_t>(j)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double scale = scales[static_cast<std::size_t>(j)];

        double ar = 0.0;
        for (long t = 0; t < T; ++t) {
            const double hod = std::fmod(static_cast<double>(t) * hours_per_step, 24.0);
            ar = phi * ar + std::sqrt(1.0 - phi * phi) * scale * gauss(rng);
            values(t, j) = base_profile(spec, hod) + ar;
        }

        // Congestion events: Poisson count over the whole horizon, each a
        // smooth speed drop of 30-120 minutes.
        std::poisson_distribution<int> n_events(spec.congestion_event_rate_per_day *
                                                spec.n_days);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const int events = spec.congestion_event_rate_per_day > 0.0 ? n_events(rng) : 0;
        for (int e = 0; e < events; ++e) {
            const long start = static_cast<long>(unit(rng) * static_cast<double>(T));
            const long duration =
                static_cast<long>((30.0 + 90.0 * unit(rng)) / spec.interval_minutes);
            const double severity = 0.3 + 0.4 * unit(rng);
            for (long t = start; t < std::min(T, start + duration); ++t) {
                const double progress = static_cast<double>(t - start) / static_cast<double>(duration);
                values(t, j) -= severity * values(t, j) * std::sin(M_PI * progress);
            }
        }

        for (long t = 0; t < T; ++t)
            values(t, j) = std::clamp(values(t, j), 0.0, spec.free_flow_mph);
    }

    TrafficDataset ds;
    ds.values = std::move(values);
    ds.interval_minutes = spec.interval_minutes;
    ds.sensor_ids.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%03d", j);
        ds.sensor_ids.emplace_back(buf);
    }
    ds.validate();

    // Corridor placement: consecutive sensors 400-700 m apart, so the kernel
    // connects neighbours and distant sensors fall below the cutoff.
    Rng place_rng(derive_seed(spec.seed, "synthetic-placement"));
    std::uniform_real_distribution<double> spacing(400.0, 700.0);
    std::vector<double> pos(static_cast<std::size_t>(N), 0.0);
    for (int j = 1; j < N; ++j) pos[static_cast<std::size_t>(j)] = pos[j - 1] + spacing(place_rng);
    Eigen::MatrixXd dist(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            dist(i, j) = std::abs(pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]);

    SensorGraph graph;
    graph.distances = dist;
    graph.weights = N > 1 ? adjacency_from_distances(dist, default_kernel_sigma(dist), 0.1)
                          : Eigen::MatrixXd::Ones(1, 1);
    graph.validate();
    return {std::move(ds), std::move(graph)};
}

TrafficDataset load_values_csv(const std::string& values_path) {
    const auto lines = read_lines(values_path);
    if (lines.size() < 2) throw ParseError(values_path, 1, 1, "need a header row and data rows");
    TrafficDataset ds;
    ds.sensor_ids = split_line(lines[0]);
    const std::size_t n = ds.sensor_ids.size();
    for (std::size_t j = 0; j < n; ++j)
        if (ds.sensor_ids[j].empty())
            throw ParseError(values_path, 1, static_cast<long>(j + 1), "empty sensor id in header");
    ds.values.resize(static_cast<long>(lines.size() - 1), static_cast<long>(n));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split_line(lines[r]);
        if (cells.size() != n)
            throw ParseError(values_path, static_cast<long>(r + 1), 1,
                             "expected " + std::to_string(n) + " columns, found " +
                                 std::to_string(cells.size()));
        for (std::size_t c = 0; c < n; ++c)
            ds.values(static_cast<long>(r - 1), static_cast<long>(c)) =
                parse_cell(values_path, static_cast<long>(r + 1), static_cast<long>(c + 1), cells[c]);
    }
    ds.validate();
    return ds;
}

namespace {

SensorGraph load_adjacency(const std::string& path, const std::vector<std::string>& sensor_ids) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path, 1, 1, "empty adjacency file");
    const long n = static_cast<long>(sensor_ids.size());
    SensorGraph graph;

    if (split_line(lines[0]) == std::vector<std::string>{"src", "dst", "distance_m"}) {
        Eigen::MatrixXd dist =
            Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
        dist.diagonal().setZero();
        auto index_of = [&](const std::string& id, long row) {
            const auto it = std::find(sensor_ids.begin(), sensor_ids.end(), id);
            if (it == sensor_ids.end())
                throw ParseError(path, row, 1, "sensor id '" + id + "' not present in values header");
            return static_cast<long>(it - sensor_ids.begin());
        };
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto cells = split_line(lines[r]);
            if (cells.size() != 3)
                throw ParseError(path, static_cast<long>(r + 1), 1, "expected src,dst,distance_m");
            const long i = index_of(cells[0], static_cast<long>(r + 1));
            const long j = index_of(cells[1], static_cast<long>(r + 1));
            const double d = parse_cell(path, static_cast<long>(r + 1), 3, cells[2]);
            if (d < 0.0) throw ParseError(path, static_cast<long>(r + 1), 3, "negative distance");
            dist(i, j) = d;
        }
        graph.distances = dist;
        graph.weights = adjacency_from_distances(dist, default_kernel_sigma(dist), 0.1);
    } else {
        if (static_cast<long>(lines.size()) != n)
            throw ValidationError(path + ": adjacency is " + std::to_string(lines.size()) + "x? but " +
                                  std::to_string(n) + " sensor ids were declared in the values header");
        Eigen::MatrixXd w(n, n);
        for (long r = 0; r < n; ++r) {
            const auto cells = split_line(lines[static_cast<std::size_t>(r)]);
            if (static_cast<long>(cells.size()) != n)
                throw ValidationError(path + ": adjacency row " + std::to_string(r + 1) + " has " +
                                      std::to_string(cells.size()) + " columns but " +
                                      std::to_string(n) + " sensor ids were declared");
            for (long c = 0; c < n; ++c) {
                w(r, c) = parse_cell(path, r + 1, c + 1, cells[static_cast<std::size_t>(c)]);
                if (w(r, c) < 0.0) throw ParseError(path, r + 1, c + 1, "negative weight");
            }
        }
        graph.weights = std::move(w);
    }
    graph.validate();
    return graph;
}

}  // namespace

std::pair<TrafficDataset, SensorGraph> load_csv(const std::string& values_path,
                                                const std::string& adjacency_path) {
    TrafficDataset ds = load_values_csv(values_path);
    SensorGraph graph = load_adjacency(adjacency_path, ds.sensor_ids);
    return {std::move(ds), std::move(graph)};
}

void write_values_csv(const TrafficDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t j = 0; j < ds.sensor_ids.size(); ++j)
        out << (j ? "," : "") << ds.sensor_ids[j];
    out << "\n";
    for (long t = 0; t < ds.T(); ++t) {
        for (long j = 0; j < ds.N(); ++j) out << (j ? "," : "") << format_double(ds.values(t, j));
        out << "\n";
    }
}

void write_adjacency_csv(const SensorGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    if (graph.distances) {
        out << "src,dst,distance_m\n";
        for (long i = 0; i < graph.n(); ++i)
            for (long j = 0; j < graph.n(); ++j)
                if (std::isfinite((*graph.distances)(i, j)) && i != j) {
                    char si[16], sj[16];
                    std::snprintf(si, sizeof(si), "s%03ld", i);
                    std::snprintf(sj, sizeof(sj), "s%03ld", j);
                    out << si << "," << sj << "," << format_double((*graph.distances)(i, j)) << "\n";
                }
    } else {
        for (long i = 0; i < graph.n(); ++i) {
            for (long j = 0; j < graph.n(); ++j)
                out << (j ? "," : "") << format_double(graph.weights(i, j));
            out << "\n";
        }
    }
}

ChronologicalSplit split_chronological(const TrafficDataset& ds, const SplitSpec& spec) {
    ds.validate();
    spec.validate();
    if (ds.T() < 3) throw ValidationError("need at least 3 rows to split");
    const double T = static_cast<double>(ds.T());
    long n_valid = static_cast<long>(std::floor(T * spec.valid_frac));
    long n_test = static_cast<long>(std::floor(T * spec.test_frac));
    long n_train = ds.T() - n_valid - n_test;  // floor(T*train) plus the remainder
    if (n_train < 1 || n_valid < 1 || n_test < 1)
        throw ValidationError("a split would be empty; use more data or larger fractions");

    auto slice = [&](long begin, long count) {
        TrafficDataset part;
        part.values = ds.values.middleRows(begin, count);
        part.interval_minutes = ds.interval_minutes;
        part.sensor_ids = ds.sensor_ids;
        part.start_epoch_s =
            ds.start_epoch_s + static_cast<std::int64_t>(begin) * ds.interval_minutes * 60;
        return part;
    };
    return {slice(0, n_train), slice(n_train, n_valid), slice(n_train + n_valid, n_test)};
}

Scaler fit_scaler(const TrafficDataset& train) {
    train.validate();
    Scaler s;
    s.mean = train.values.mean();
    const double var = (train.values.array() - s.mean).square().mean();
    s.std = std::sqrt(var);
    if (!(s.std > 0.0)) throw ValidationError("cannot fit a scaler on constant data");
    return s;
}

WindowedSamples window(const TrafficDataset& ds, int history, int horizon) {
    ds.validate();
    if (history < 1 || horizon < 1) throw ValidationError("history and horizon must be >= 1");
    WindowedSamples w;
    w.history = history;
    w.horizon = horizon;
    const long S = ds.T() - history - horizon + 1;
    if (S <= 0) return w;
    w.inputs.reserve(static_cast<std::size_t>(S));
    w.targets.reserve(static_cast<std::size_t>(S));
    for (long s = 0; s < S; ++s) {
        w.inputs.emplace_back(ds.values.middleRows(s, history));
        w.targets.emplace_back(ds.values.middleRows(s + history, horizon));
    }
    return w;
}

}  // namespace tuq
