#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ste {

/// Dense row-major tensor of doubles. Minimal on purpose: only the ops the
/// loss, warping and clustering code actually need.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0)
        : shape_(std::move(shape)) {
        data_.assign(checked_numel(shape_), fill);
    }

    static Tensor from_data(std::vector<std::size_t> shape, std::vector<double> data) {
        Tensor t;
        if (checked_numel(shape) != data.size()) {
            throw std::invalid_argument("Tensor: shape/data size mismatch");
        }
        t.shape_ = std::move(shape);
        t.data_ = std::move(data);
        return t;
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t numel() const { return data_.size(); }
    std::size_t extent(std::size_t dim) const { return shape_.at(dim); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    template <typename... Ix>
    double& operator()(Ix... ix) {
        return data_[flat_index({static_cast<std::size_t>(ix)...})];
    }
    template <typename... Ix>
    double operator()(Ix... ix) const {
        return data_[flat_index({static_cast<std::size_t>(ix)...})];
    }

    std::size_t flat_index(std::initializer_list<std::size_t> idx) const {
        if (idx.size() != shape_.size()) {
            throw std::invalid_argument("Tensor: rank mismatch in index");
        }
        std::size_t flat = 0;
        std::size_t dim = 0;
        for (std::size_t i : idx) {
            if (i >= shape_[dim]) {
                throw std::out_of_range("Tensor: index out of range in dim " + std::to_string(dim));
            }
            flat = flat * shape_[dim] + i;
            ++dim;
        }
        return flat;
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    static std::size_t checked_numel(const std::vector<std::size_t>& shape) {
        std::size_t n = 1;
        for (std::size_t d : shape) {
            if (d == 0) {
                throw std::invalid_argument("Tensor: zero extent");
            }
            n *= d;
        }
        return n;
    }

    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

} // namespace ste
