#include "aeolus/nn/tensor.hpp"

#include <cmath>

namespace aeolus::nn {

Tensor Tensor::zeros2(std::size_t rows, std::size_t cols) {
    Tensor t;
    t.rank = 2;
    t.d0 = rows;
    t.d1 = cols;
    t.d2 = 1;
    t.data.assign(rows * cols, 0.0);
    return t;
}

Tensor Tensor::zeros3(std::size_t batch, std::size_t time, std::size_t chans) {
    Tensor t;
    t.rank = 3;
    t.d0 = batch;
    t.d1 = time;
    t.d2 = chans;
    t.data.assign(batch * time * chans, 0.0);
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace aeolus::nn
