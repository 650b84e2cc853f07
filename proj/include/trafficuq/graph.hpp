#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace tuq {

enum class FilterType { laplacian, random_walk, dual_random_walk };

std::string to_string(FilterType f);
FilterType filter_type_from_string(const std::string& s);

/// Weighted directed sensor graph. weights(i,j) >= 0, zero means no edge.
struct SensorGraph {
    Eigen::MatrixXd weights;                    // [N x N]
    std::optional<Eigen::MatrixXd> distances;   // [N x N] metres, if known

    long n() const { return weights.rows(); }
    void validate() const;
};

/// Normalized operators derived from the weights. Rows of the walk matrices
/// with nonzero degree sum to 1; zero-degree rows stay all-zero.
struct TransitionSet {
    std::optional<Eigen::MatrixXd> forward;    // D_out^-1 W
    std::optional<Eigen::MatrixXd> reverse;    // D_in^-1 W^T
    std::optional<Eigen::MatrixXd> laplacian;  // 2 L_sym / lambda_max - I

    /// The operators a given filter diffuses over, in a fixed order.
    std::vector<const Eigen::MatrixXd*> directions() const;
};

/// Gaussian kernel on pairwise distances with a sparsity cutoff:
/// W_ij = exp(-d_ij^2 / sigma^2) where that value >= kappa, else 0.
Eigen::MatrixXd adjacency_from_distances(const Eigen::MatrixXd& distances,
                                         double kernel_sigma, double threshold_kappa);

/// Standard deviation of all finite entries, the default kernel sigma.
double default_kernel_sigma(const Eigen::MatrixXd& distances);

TransitionSet transitions(const SensorGraph& graph, FilterType filter);

/// Bidirectional K-step diffusion of node features:
///   out = sum_dir sum_{k=0}^{K-1} (M_dir)^k X Theta_{dir,k},
/// with (M_dir)^0 = I. coefficients[dir][k] is the [F x F'] weight of that term.
Eigen::MatrixXd diffusion_conv(const Eigen::MatrixXd& features, const TransitionSet& transitions,
                               int k_steps,
                               const std::vector<std::vector<Eigen::MatrixXd>>& coefficients);

/// Powers [I, M, M^2, ..., M^(K-1)] for every direction of the filter,
/// flattened direction-major. This is the support list the forecaster's
/// diffusion convolutions contract against.
std::vector<Eigen::MatrixXd> diffusion_supports(const SensorGraph& graph, FilterType filter,
                                                int k_steps);

}  // namespace tuq
