#include "trafficuq/graph.hpp"

#include <cmath>

#include "trafficuq/errors.hpp"

namespace tuq {

std::string to_string(FilterType f) {
    switch (f) {
        case FilterType::laplacian: return "laplacian";
        case FilterType::random_walk: return "random_walk";
        case FilterType::dual_random_walk: return "dual_random_walk";
    }
    throw ValidationError("unknown filter type");
}

FilterType filter_type_from_string(const std::string& s) {
    if (s == "laplacian") return FilterType::laplacian;
    if (s == "random_walk") return FilterType::random_walk;
    if (s == "dual_random_walk") return FilterType::dual_random_walk;
    throw ValidationError("unknown filter type: '" + s +
                          "' (expected laplacian|random_walk|dual_random_walk)");
}

void SensorGraph::validate() const {
    if (weights.rows() != weights.cols())
        throw ValidationError("sensor graph weights must be square");
    if (weights.rows() < 1) throw ValidationError("sensor graph needs at least one node");
    if ((weights.array() < 0.0).any())
        throw ValidationError("sensor graph weights must be nonnegative");
    if (!weights.allFinite()) throw ValidationError("sensor graph weights must be finite");
    if (distances && (distances->rows() != weights.rows() || distances->cols() != weights.cols()))
        throw ValidationError("distance matrix shape does not match weights");
}

std::vector<const Eigen::MatrixXd*> TransitionSet::directions() const {
    std::vector<const Eigen::MatrixXd*> dirs;
    if (laplacian) dirs.push_back(&*laplacian);
    if (forward) dirs.push_back(&*forward);
    if (reverse) dirs.push_back(&*reverse);
    return dirs;
}

Eigen::MatrixXd adjacency_from_distances(const Eigen::MatrixXd& distances, double kernel_sigma,
                                         double threshold_kappa) {
    if (!(kernel_sigma > 0.0)) throw ValidationError("kernel sigma must be positive");
    if ((distances.array() < 0.0).any())
        throw ValidationError("distances must be nonnegative");
    Eigen::MatrixXd w = (-(distances.array() / kernel_sigma).square()).exp();
    return (w >= threshold_kappa).select(w, 0.0);
}

double default_kernel_sigma(const Eigen::MatrixXd& distances) {
    std::vector<double> finite;
    finite.reserve(static_cast<std::size_t>(distances.size()));
    for (long i = 0; i < distances.rows(); ++i)
        for (long j = 0; j < distances.cols(); ++j)
            if (std::isfinite(distances(i, j))) finite.push_back(distances(i, j));
    if (finite.empty()) throw ValidationError("no finite distances to derive a kernel sigma from");
    double m = 0.0;
    for (double d : finite) m += d;
    m /= static_cast<double>(finite.size());
    double ss = 0.0;
    for (double d : finite) ss += (d - m) * (d - m);
    const double sigma = std::sqrt(ss / static_cast<double>(finite.size()));
    if (!(sigma > 0.0)) throw ValidationError("distances are constant; pass an explicit sigma");
    return sigma;
}

namespace {

Eigen::MatrixXd row_normalized(const Eigen::MatrixXd& w) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w.rows(), w.cols());
    for (long i = 0; i < w.rows(); ++i) {
        const double deg = w.row(i).sum();
        if (deg > 0.0) out.row(i) = w.row(i) / deg;
    }
    return out;
}

// 2 L_sym / lambda_max - I on the elementwise-max symmetrization of W.
Eigen::MatrixXd scaled_laplacian(const Eigen::MatrixXd& w) {
    const Eigen::MatrixXd sym = w.cwiseMax(w.transpose());
    const long n = sym.rows();
    Eigen::VectorXd deg = sym.rowwise().sum();
    Eigen::VectorXd dinv_sqrt(n);
    for (long i = 0; i < n; ++i) dinv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) -
                          dinv_sqrt.asDiagonal() * sym * dinv_sqrt.asDiagonal();
    // lambda_max by 50 power iterations; the spectrum lies in [0, 2].
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd lv = lap * v;
        lambda = lv.norm();
        if (lambda < 1e-12) break;
        v = lv / lambda;
    }
    if (lambda < 1e-12) lambda = 2.0;
    return 2.0 / lambda * lap - Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TransitionSet transitions(const SensorGraph& graph, FilterType filter) {
    graph.validate();
    TransitionSet t;
    switch (filter) {
        case FilterType::laplacian:
            t.laplacian = scaled_laplacian(graph.weights);
            break;
        case FilterType::random_walk:
            t.forward = row_normalized(graph.weights);
            break;
        case FilterType::dual_random_walk:
            t.forward = row_normalized(graph.weights);
            t.reverse = row_normalized(graph.weights.transpose());
            break;
    }
    return t;
}

Eigen::MatrixXd diffusion_conv(const Eigen::MatrixXd& features, const TransitionSet& transitions,
                               int k_steps,
                               const std::vector<std::vector<Eigen::MatrixXd>>& coefficients) {
    if (k_steps < 1) throw ValidationError("diffusion needs at least one step");
    const auto dirs = transitions.directions();
    if (coefficients.size() != dirs.size())
        throw ValidationError("coefficient direction count does not match the filter");
    Eigen::MatrixXd out;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        if (coefficients[d].size() != static_cast<std::size_t>(k_steps))
            throw ValidationError("coefficient step count does not match k_steps");
        Eigen::MatrixXd power = features;  // (M_dir)^0 X = X
        for (int k = 0; k < k_steps; ++k) {
            if (k > 0) power = *dirs[d] * power;
            const Eigen::MatrixXd& theta = coefficients[d][static_cast<std::size_t>(k)];
            if (theta.rows() != features.cols())
                throw ValidationError("coefficient rows must equal the feature count");
            if (out.size() == 0)
                out = power * theta;
            else if (theta.cols() != out.cols())
                throw ValidationError("coefficient output widths disagree");
            else
                out += power * theta;
        }
    }
    return out;
}

std::vector<Eigen::MatrixXd> diffusion_supports(const SensorGraph& graph, FilterType filter,
                                                int k_steps) {
    if (k_steps < 1) throw ValidationError("diffusion needs at least one step");
    const TransitionSet t = transitions(graph, filter);
    std::vector<Eigen::MatrixXd> supports;
    for (const Eigen::MatrixXd* m : t.directions()) {
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(graph.n(), graph.n());
        for (int k = 0; k < k_steps; ++k) {
            if (k > 0) power = *m * power;
            supports.push_back(power);
        }
    }
    return supports;
}

}  // namespace tuq
