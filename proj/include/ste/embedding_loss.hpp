#pragma once

#include <map>
#include <vector>

#include "ste/label_map.hpp"
#include "ste/tensor.hpp"

namespace ste {

/// Radii and weights of the instance embedding loss, plus the view-synthesis
/// weight consumed by the geometry stack. Defaults follow the reference
/// training configuration.
struct LossConfig {
    double rho_a = 0.5;
    double rho_r = 1.5;
    double lambda_a = 1.0;
    double lambda_r = 1.0;
    double lambda_reg = 0.001;
    double lambda_vs = 1.0;
};

/// Video-pixel sets per instance id over a (T,H,W) block. Background (id 0)
/// is excluded. Indices are flat offsets into T*H*W.
class InstancePartition {
public:
    InstancePartition() = default;

    /// Builds the partition from a label-map sequence; all maps must share
    /// one (H,W) extent.
    static InstancePartition from_labels(const std::vector<InstanceLabelMap>& frames);

    /// Direct construction; validates non-empty, in-bounds, disjoint sets.
    static InstancePartition from_sets(std::map<int, std::vector<std::size_t>> sets,
                                       std::size_t video_pixels);

    const std::map<int, std::vector<std::size_t>>& sets() const { return sets_; }
    std::size_t instance_count() const { return sets_.size(); }
    std::size_t video_pixels() const { return video_pixels_; }

private:
    std::map<int, std::vector<std::size_t>> sets_;
    std::size_t video_pixels_ = 0;
};

/// Mean embedding per instance id, each of length p.
using InstanceMeans = std::map<int, std::vector<double>>;

/// field has shape [p, T, H, W]; the partition indexes the T*H*W block.
InstanceMeans compute_means(const Tensor& field, const InstancePartition& part);

double attraction_loss(const Tensor& field, const InstancePartition& part,
                       const InstanceMeans& means, const LossConfig& cfg);

double repulsion_loss(const InstanceMeans& means, const LossConfig& cfg);

double regularisation_loss(const InstanceMeans& means);

struct InstanceLossResult {
    double total = 0.0;
    double attraction = 0.0;
    double repulsion = 0.0;
    double regularisation = 0.0;
    bool no_instances = false; // frame block had no instances; all terms are 0
    Tensor grad;               // d total / d field, same shape as field
};

/// Weighted sum of the three forces with its analytic gradient. The gradient
/// flows through each instance mean into every member pixel.
InstanceLossResult total_instance_loss(const Tensor& field, const InstancePartition& part,
                                       const LossConfig& cfg);

} // namespace ste
