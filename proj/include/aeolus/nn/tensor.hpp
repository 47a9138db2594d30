#pragma once

#include <cstddef>
#include <vector>

namespace aeolus::nn {

/// Dense row-major tensor of rank 2 (rows, cols) or rank 3 (batch, time,
/// channels). Rank 3 carries sequences; rank 2 carries per-window vectors
/// (network outputs, targets, dense-layer activations).
struct Tensor {
    int rank = 0;
    std::size_t d0 = 0, d1 = 0, d2 = 0;
    std::vector<double> data;

    static Tensor zeros2(std::size_t rows, std::size_t cols);
    static Tensor zeros3(std::size_t batch, std::size_t time, std::size_t chans);

    std::size_t numel() const { return data.size(); }

    double& at(std::size_t i, std::size_t j) { return data[i * d1 + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * d1 + j]; }
    double& at(std::size_t b, std::size_t t, std::size_t c) {
        return data[(b * d1 + t) * d2 + c];
    }
    double at(std::size_t b, std::size_t t, std::size_t c) const {
        return data[(b * d1 + t) * d2 + c];
    }

    bool all_finite() const;
};

} // namespace aeolus::nn
