#include "ste/embedding_loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ste {

namespace {

constexpr double kDegenerateNorm = 1e-12;

struct FieldView {
    const Tensor& field;
    std::size_t p;
    std::size_t block; // T*H*W

    explicit FieldView(const Tensor& f) : field(f) {
        if (f.ndim() != 4) {
            throw std::invalid_argument("embedding field must have shape [p,T,H,W]");
        }
        p = f.extent(0);
        block = f.extent(1) * f.extent(2) * f.extent(3);
    }

    double at(std::size_t channel, std::size_t pixel) const {
        return field[channel * block + pixel];
    }
};

void check_partition(const FieldView& v, const InstancePartition& part) {
    if (part.video_pixels() != v.block) {
        throw std::invalid_argument("partition video-pixel extent does not match field");
    }
}

double norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) {
        s += e * e;
    }
    return std::sqrt(s);
}

} // namespace

InstancePartition InstancePartition::from_labels(const std::vector<InstanceLabelMap>& frames) {
    if (frames.empty()) {
        throw std::invalid_argument("InstancePartition: empty frame sequence");
    }
    const std::size_t h = frames[0].height;
    const std::size_t w = frames[0].width;
    std::map<int, std::vector<std::size_t>> sets;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& frame = frames[t];
        if (frame.height != h || frame.width != w || frame.ids.size() != h * w) {
            throw std::invalid_argument("InstancePartition: inconsistent frame extents");
        }
        for (std::size_t q = 0; q < frame.ids.size(); ++q) {
            const int id = frame.ids[q];
            if (id < 0) {
                throw std::invalid_argument("InstancePartition: negative instance id");
            }
            if (id != 0) {
                sets[id].push_back(t * h * w + q);
            }
        }
    }
    InstancePartition part;
    part.sets_ = std::move(sets);
    part.video_pixels_ = frames.size() * h * w;
    return part;
}

InstancePartition InstancePartition::from_sets(std::map<int, std::vector<std::size_t>> sets,
                                               std::size_t video_pixels) {
    std::vector<char> seen(video_pixels, 0);
    for (const auto& [id, pixels] : sets) {
        if (id <= 0) {
            throw std::invalid_argument("InstancePartition: instance ids must be positive");
        }
        if (pixels.empty()) {
            throw std::invalid_argument("InstancePartition: empty set for instance " +
                                        std::to_string(id));
        }
        for (std::size_t q : pixels) {
            if (q >= video_pixels) {
                throw std::invalid_argument("InstancePartition: index out of bounds");
            }
            if (seen[q]) {
                throw std::invalid_argument("InstancePartition: overlapping instance sets");
            }
            seen[q] = 1;
        }
    }
    InstancePartition part;
    part.sets_ = std::move(sets);
    part.video_pixels_ = video_pixels;
    return part;
}

InstanceMeans compute_means(const Tensor& field, const InstancePartition& part) {
    const FieldView v(field);
    check_partition(v, part);
    InstanceMeans means;
    for (const auto& [id, pixels] : part.sets()) {
        if (pixels.empty()) {
            throw std::invalid_argument("compute_means: empty set for instance " +
                                        std::to_string(id));
        }
        std::vector<double> mean(v.p, 0.0);
        for (std::size_t q : pixels) {
            for (std::size_t c = 0; c < v.p; ++c) {
                mean[c] += v.at(c, q);
            }
        }
        const double inv = 1.0 / static_cast<double>(pixels.size());
        for (double& e : mean) {
            e *= inv;
        }
        means.emplace(id, std::move(mean));
    }
    return means;
}

double attraction_loss(const Tensor& field, const InstancePartition& part,
                       const InstanceMeans& means, const LossConfig& cfg) {
    const FieldView v(field);
    check_partition(v, part);
    const std::size_t k_count = part.instance_count();
    if (k_count == 0) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& [id, pixels] : part.sets()) {
        const auto& mu = means.at(id);
        double inst = 0.0;
        for (std::size_t q : pixels) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < v.p; ++c) {
                const double d = mu[c] - v.at(c, q);
                d2 += d * d;
            }
            const double hinge = std::sqrt(d2) - cfg.rho_a;
            if (hinge > 0.0) {
                inst += hinge * hinge;
            }
        }
        total += inst / static_cast<double>(pixels.size());
    }
    return total / static_cast<double>(k_count);
}

double repulsion_loss(const InstanceMeans& means, const LossConfig& cfg) {
    const std::size_t k_count = means.size();
    if (k_count < 2) {
        return 0.0;
    }
    // Ordered pairs; both (a,b) and (b,a) contribute, matching the K(K-1)
    // normaliser.
    double total = 0.0;
    for (auto it1 = means.begin(); it1 != means.end(); ++it1) {
        for (auto it2 = means.begin(); it2 != means.end(); ++it2) {
            if (it1->first == it2->first) {
                continue;
            }
            double d2 = 0.0;
            for (std::size_t c = 0; c < it1->second.size(); ++c) {
                const double d = it1->second[c] - it2->second[c];
                d2 += d * d;
            }
            const double hinge = 2.0 * cfg.rho_r - std::sqrt(d2);
            if (hinge > 0.0) {
                total += hinge * hinge;
            }
        }
    }
    return total / static_cast<double>(k_count * (k_count - 1));
}

double regularisation_loss(const InstanceMeans& means) {
    if (means.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& [id, mu] : means) {
        total += norm(mu);
    }
    return total / static_cast<double>(means.size());
}

InstanceLossResult total_instance_loss(const Tensor& field, const InstancePartition& part,
                                       const LossConfig& cfg) {
    const FieldView v(field);
    check_partition(v, part);

    InstanceLossResult result;
    result.grad = Tensor(field.shape());
    const std::size_t k_count = part.instance_count();
    if (k_count == 0) {
        result.no_instances = true;
        return result;
    }

    const InstanceMeans means = compute_means(field, part);
    result.attraction = attraction_loss(field, part, means, cfg);
    result.repulsion = repulsion_loss(means, cfg);
    result.regularisation = regularisation_loss(means);
    result.total = cfg.lambda_a * result.attraction + cfg.lambda_r * result.repulsion +
                   cfg.lambda_reg * result.regularisation;

    const double k = static_cast<double>(k_count);

    // d(repulsion + regularisation)/d mu_k, accumulated per instance.
    std::map<int, std::vector<double>> mean_grad;
    for (const auto& [id, mu] : means) {
        mean_grad.emplace(id, std::vector<double>(v.p, 0.0));
    }
    if (k_count >= 2 && cfg.lambda_r != 0.0) {
        const double scale = -4.0 * cfg.lambda_r / (k * (k - 1.0));
        for (auto it1 = means.begin(); it1 != means.end(); ++it1) {
            auto& g = mean_grad[it1->first];
            for (auto it2 = means.begin(); it2 != means.end(); ++it2) {
                if (it1->first == it2->first) {
                    continue;
                }
                double d2 = 0.0;
                for (std::size_t c = 0; c < v.p; ++c) {
                    const double d = it1->second[c] - it2->second[c];
                    d2 += d * d;
                }
                const double m = std::sqrt(d2);
                const double hinge = 2.0 * cfg.rho_r - m;
                if (hinge <= 0.0 || m < kDegenerateNorm) {
                    continue;
                }
                for (std::size_t c = 0; c < v.p; ++c) {
                    g[c] += scale * hinge * (it1->second[c] - it2->second[c]) / m;
                }
            }
        }
    }
    if (cfg.lambda_reg != 0.0) {
        for (const auto& [id, mu] : means) {
            const double n = norm(mu);
            if (n < kDegenerateNorm) {
                continue;
            }
            auto& g = mean_grad[id];
            const double scale = cfg.lambda_reg / (k * n);
            for (std::size_t c = 0; c < v.p; ++c) {
                g[c] += scale * mu[c];
            }
        }
    }

    // Attraction: direct pixel term plus the mean-mediated term, then spread
    // the accumulated mean gradient over every member pixel.
    std::vector<double> unit(v.p);
    for (const auto& [id, pixels] : part.sets()) {
        const auto& mu = means.at(id);
        const double inv_size = 1.0 / static_cast<double>(pixels.size());
        std::vector<double> pulled(v.p, 0.0); // sum of hinge * unit over pixels
        std::vector<double> direct(pixels.size() * v.p, 0.0);
        for (std::size_t idx = 0; idx < pixels.size(); ++idx) {
            const std::size_t q = pixels[idx];
            double d2 = 0.0;
            for (std::size_t c = 0; c < v.p; ++c) {
                const double d = mu[c] - v.at(c, q);
                unit[c] = d;
                d2 += d * d;
            }
            const double n = std::sqrt(d2);
            const double hinge = n - cfg.rho_a;
            if (hinge <= 0.0 || n < kDegenerateNorm) {
                continue;
            }
            for (std::size_t c = 0; c < v.p; ++c) {
                const double hu = hinge * unit[c] / n;
                pulled[c] += hu;
                direct[idx * v.p + c] = hu;
            }
        }
        const double attr_scale = 2.0 * cfg.lambda_a / (k * static_cast<double>(pixels.size()));
        const auto& mg = mean_grad.at(id);
        for (std::size_t idx = 0; idx < pixels.size(); ++idx) {
            const std::size_t q = pixels[idx];
            for (std::size_t c = 0; c < v.p; ++c) {
                double g = attr_scale * (pulled[c] * inv_size - direct[idx * v.p + c]);
                g += mg[c] * inv_size;
                result.grad[c * v.block + q] += g;
            }
        }
    }
    return result;
}

} // namespace ste
