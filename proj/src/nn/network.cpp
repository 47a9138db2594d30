#include "aeolus/nn/network.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/nn/layers.hpp"
#include "aeolus/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

namespace aeolus::nn {

namespace {

using core::ConfigError;
using core::NumericError;

std::string activation_name(Activation a) {
    switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
    case Activation::Softmax: return "softmax";
    }
    return "?";
}

/// Enumerate the canonical parameter list of a spec in layer order. The
/// callback receives (name, shape, fan_in, fan_out); biases have fan_in 0.
void for_each_param(
    const NetworkSpec& spec,
    const std::function<void(const std::string&, std::vector<std::size_t>,
                             std::size_t, std::size_t)>& fn) {
    std::size_t ci = spec.input_channels;
    for (const auto& l : spec.layers) {
        const std::size_t co = l.units;
        switch (l.kind) {
        case LayerSpec::Kind::Conv1d:
            fn(l.name + "/kernel", {l.kernel, ci, co}, l.kernel * ci,
               l.kernel * co);
            fn(l.name + "/bias", {co}, 0, co);
            break;
        case LayerSpec::Kind::Gru:
            for (const char* g : {"z", "r", "h"})
                fn(l.name + "/W_" + g, {ci, co}, ci, co);
            for (const char* g : {"z", "r", "h"})
                fn(l.name + "/U_" + g, {co, co}, co, co);
            for (const char* g : {"z", "r", "h"})
                fn(l.name + "/b_" + g, {co}, 0, co);
            break;
        case LayerSpec::Kind::Dense:
            fn(l.name + "/W", {ci, co}, ci, co);
            fn(l.name + "/b", {co}, 0, co);
            break;
        }
        ci = co;
    }
}

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape)
        n *= d;
    return n;
}

/// Fetch a parameter and verify its shape against the spec's expectation.
const ParamTensor& checked(const Weights& w, const std::string& name,
                           std::initializer_list<std::size_t> shape) {
    const ParamTensor& p = w.find(name);
    if (!std::equal(shape.begin(), shape.end(), p.shape.begin(),
                    p.shape.end()))
        throw ConfigError("parameter shape mismatch: " + name);
    return p;
}

struct LayerCache {
    Tensor in;  ///< layer input (dense: the consumed rank-2 slice)
    Tensor out; ///< layer output (gru: always the full hidden sequence)
    Tensor z, r, hc;
    bool sliced_seq = false; ///< dense consumed the last step of a sequence
    std::size_t seq_len = 0;
};

Tensor run_forward(const NetworkSpec& spec, const Weights& w, const Tensor& x,
                   std::vector<LayerCache>* caches) {
    if (x.rank != 3)
        throw ConfigError("network input must be rank 3 (batch, time, chan)");
    if (x.d2 != spec.input_channels || x.d1 != spec.window_len)
        throw ConfigError("network " + spec.name + " expects (B, " +
                          std::to_string(spec.window_len) + ", " +
                          std::to_string(spec.input_channels) + ") input");

    Tensor cur = x;
    if (!w.norm_mean.empty()) {
        if (w.norm_mean.size() != spec.input_channels ||
            w.norm_std.size() != spec.input_channels)
            throw ConfigError("normalization size mismatch");
        const std::size_t n = cur.d0 * cur.d1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < cur.d2; ++c)
                cur.data[i * cur.d2 + c] =
                    (cur.data[i * cur.d2 + c] - w.norm_mean[c]) /
                    w.norm_std[c];
    }

    std::size_t ci = spec.input_channels;
    for (const auto& l : spec.layers) {
        LayerCache cache;
        const std::size_t co = l.units;
        const std::size_t B = cur.d0;
        switch (l.kind) {
        case LayerSpec::Kind::Conv1d: {
            if (cur.rank != 3)
                throw ConfigError(l.name + ": conv1d needs a sequence input");
            const auto& k = checked(w, l.name + "/kernel", {l.kernel, ci, co});
            const auto& b = checked(w, l.name + "/bias", {co});
            Tensor y = Tensor::zeros3(B, cur.d1, co);
            conv1d_forward(cur.data.data(), B, cur.d1, ci, k.data.data(),
                           l.kernel, co, b.data.data(),
                           l.activation == Activation::Relu, y.data.data());
            cache.in = std::move(cur);
            cache.out = y;
            cur = std::move(y);
            break;
        }
        case LayerSpec::Kind::Gru: {
            if (cur.rank != 3)
                throw ConfigError(l.name + ": gru needs a sequence input");
            const auto& wz = checked(w, l.name + "/W_z", {ci, co});
            const auto& wr = checked(w, l.name + "/W_r", {ci, co});
            const auto& wh = checked(w, l.name + "/W_h", {ci, co});
            const auto& uz = checked(w, l.name + "/U_z", {co, co});
            const auto& ur = checked(w, l.name + "/U_r", {co, co});
            const auto& uh = checked(w, l.name + "/U_h", {co, co});
            const auto& bz = checked(w, l.name + "/b_z", {co});
            const auto& br = checked(w, l.name + "/b_r", {co});
            const auto& bh = checked(w, l.name + "/b_h", {co});
            const std::size_t T = cur.d1;
            Tensor h = Tensor::zeros3(B, T, co);
            cache.z = Tensor::zeros3(B, T, co);
            cache.r = Tensor::zeros3(B, T, co);
            cache.hc = Tensor::zeros3(B, T, co);
            gru_forward(cur.data.data(), B, T, ci, co, wz.data.data(),
                        wr.data.data(), wh.data.data(), uz.data.data(),
                        ur.data.data(), uh.data.data(), bz.data.data(),
                        br.data.data(), bh.data.data(), h.data.data(),
                        cache.z.data.data(), cache.r.data.data(),
                        cache.hc.data.data());
            cache.in = std::move(cur);
            cache.out = h;
            if (l.return_sequences) {
                cur = std::move(h);
            } else {
                Tensor last = Tensor::zeros2(B, co);
                for (std::size_t b = 0; b < B; ++b)
                    std::memcpy(&last.at(b, 0), &h.at(b, T - 1, 0),
                                sizeof(double) * co);
                cur = std::move(last);
            }
            break;
        }
        case LayerSpec::Kind::Dense: {
            Tensor in2;
            if (cur.rank == 3) {
                // A dense layer after a sequence consumes the last timestep.
                cache.sliced_seq = true;
                cache.seq_len = cur.d1;
                in2 = Tensor::zeros2(B, ci);
                for (std::size_t b = 0; b < B; ++b)
                    std::memcpy(&in2.at(b, 0), &cur.at(b, cur.d1 - 1, 0),
                                sizeof(double) * ci);
            } else {
                in2 = std::move(cur);
            }
            const auto& W = checked(w, l.name + "/W", {ci, co});
            const auto& b = checked(w, l.name + "/b", {co});
            Tensor y = Tensor::zeros2(B, co);
            dense_forward(in2.data.data(), B, ci, W.data.data(), co,
                          b.data.data(), l.activation == Activation::Softmax,
                          y.data.data());
            cache.in = std::move(in2);
            cache.out = y;
            cur = std::move(y);
            break;
        }
        }
        if (caches)
            caches->push_back(std::move(cache));
        ci = co;
    }
    if (cur.rank != 2)
        throw ConfigError("network " + spec.name +
                          " must end in a vector output");
    if (!cur.all_finite())
        throw NumericError("non-finite output from network " + spec.name);
    return cur;
}

double loss_value(const Tensor& y, const Tensor& target, Loss loss) {
    if (target.rank != 2 || target.d0 != y.d0 || target.d1 != y.d1)
        throw ConfigError("target shape mismatch");
    double acc = 0.0;
    if (loss == Loss::Mse) {
        for (std::size_t i = 0; i < y.data.size(); ++i) {
            const double e = y.data[i] - target.data[i];
            acc += e * e;
        }
        return acc / static_cast<double>(y.data.size());
    }
    for (std::size_t i = 0; i < y.data.size(); ++i)
        if (target.data[i] != 0.0)
            acc -= target.data[i] * std::log(std::max(y.data[i], 1e-300));
    return acc / static_cast<double>(y.d0);
}

Tensor loss_gradient(const Tensor& y, const Tensor& target, Loss loss) {
    Tensor dy = Tensor::zeros2(y.d0, y.d1);
    if (loss == Loss::Mse) {
        const double s = 2.0 / static_cast<double>(y.data.size());
        for (std::size_t i = 0; i < y.data.size(); ++i)
            dy.data[i] = s * (y.data[i] - target.data[i]);
    } else {
        const double s = 1.0 / static_cast<double>(y.d0);
        for (std::size_t i = 0; i < y.data.size(); ++i)
            if (target.data[i] != 0.0)
                dy.data[i] = -s * target.data[i] /
                             std::max(y.data[i], 1e-300);
    }
    return dy;
}

} // namespace

std::string NetworkSpec::fingerprint() const {
    std::string s = name + ":" + std::to_string(input_channels) + "x" +
                    std::to_string(window_len);
    for (const auto& l : layers) {
        switch (l.kind) {
        case LayerSpec::Kind::Conv1d:
            s += "|conv1d(" + std::to_string(l.units) + ",k" +
                 std::to_string(l.kernel) + "," + activation_name(l.activation) +
                 ")";
            break;
        case LayerSpec::Kind::Gru:
            s += "|gru(" + std::to_string(l.units) +
                 (l.return_sequences ? ",seq)" : ",last)");
            break;
        case LayerSpec::Kind::Dense:
            s += "|dense(" + std::to_string(l.units) + "," +
                 activation_name(l.activation) + ")";
            break;
        }
    }
    return s;
}

std::size_t NetworkSpec::parameter_count() const {
    std::size_t n = 0;
    for_each_param(*this, [&](const std::string&, std::vector<std::size_t> s,
                              std::size_t, std::size_t) { n += shape_numel(s); });
    return n;
}

std::size_t NetworkSpec::output_dim() const {
    if (layers.empty())
        throw ConfigError("empty network");
    return layers.back().units;
}

ParamTensor& Weights::find(std::string_view name) {
    for (auto& p : params)
        if (p.name == name)
            return p;
    throw ConfigError("missing parameter: " + std::string(name));
}

const ParamTensor& Weights::find(std::string_view name) const {
    for (const auto& p : params)
        if (p.name == name)
            return p;
    throw ConfigError("missing parameter: " + std::string(name));
}

Weights init_weights(const NetworkSpec& spec, std::uint64_t seed) {
    Weights w;
    for_each_param(spec, [&](const std::string& name,
                             std::vector<std::size_t> shape, std::size_t fi,
                             std::size_t fo) {
        ParamTensor p;
        p.name = name;
        p.shape = std::move(shape);
        p.data.assign(shape_numel(p.shape), 0.0);
        if (fi > 0) { // weight matrix: Glorot uniform; biases stay zero
            const double limit = std::sqrt(6.0 / static_cast<double>(fi + fo));
            sim::StreamRng rng(seed, name);
            for (double& v : p.data)
                v = rng.uniform(-limit, limit);
        }
        w.params.push_back(std::move(p));
    });
    return w;
}

Weights zero_like(const Weights& w) {
    Weights z;
    z.params.reserve(w.params.size());
    for (const auto& p : w.params) {
        ParamTensor q;
        q.name = p.name;
        q.shape = p.shape;
        q.data.assign(p.data.size(), 0.0);
        z.params.push_back(std::move(q));
    }
    return z;
}

Tensor network_forward(const NetworkSpec& spec, const Weights& w,
                       const Tensor& x) {
    return run_forward(spec, w, x, nullptr);
}

double network_loss(const NetworkSpec& spec, const Weights& w, const Tensor& x,
                    const Tensor& target, Loss loss) {
    return loss_value(run_forward(spec, w, x, nullptr), target, loss);
}

double network_loss_and_gradients(const NetworkSpec& spec, const Weights& w,
                                  const Tensor& x, const Tensor& target,
                                  Loss loss, Weights& grads) {
    std::vector<LayerCache> caches;
    caches.reserve(spec.layers.size());
    const Tensor y = run_forward(spec, w, x, &caches);
    const double L = loss_value(y, target, loss);

    Tensor d = loss_gradient(y, target, loss);
    for (std::size_t li = spec.layers.size(); li-- > 0;) {
        const auto& l = spec.layers[li];
        LayerCache& c = caches[li];
        const std::size_t B = c.in.d0;
        const std::size_t ci = l.kind == LayerSpec::Kind::Dense
                                   ? c.in.d1
                                   : c.in.d2;
        const std::size_t co = l.units;
        const bool need_dx = li > 0;
        switch (l.kind) {
        case LayerSpec::Kind::Dense: {
            const auto& W = w.find(l.name + "/W");
            auto& dW = grads.find(l.name + "/W");
            auto& db = grads.find(l.name + "/b");
            Tensor dx = Tensor::zeros2(B, ci);
            dense_backward(c.in.data.data(), c.out.data.data(), d.data.data(),
                           B, ci, W.data.data(), co,
                           l.activation == Activation::Softmax,
                           dW.data.data(), db.data.data(),
                           need_dx ? dx.data.data() : nullptr);
            if (c.sliced_seq) {
                Tensor dseq = Tensor::zeros3(B, c.seq_len, ci);
                for (std::size_t b = 0; b < B; ++b)
                    std::memcpy(&dseq.at(b, c.seq_len - 1, 0), &dx.at(b, 0),
                                sizeof(double) * ci);
                d = std::move(dseq);
            } else {
                d = std::move(dx);
            }
            break;
        }
        case LayerSpec::Kind::Gru: {
            const std::size_t T = c.in.d1;
            Tensor dh;
            if (l.return_sequences) {
                dh = std::move(d);
            } else {
                dh = Tensor::zeros3(B, T, co);
                for (std::size_t b = 0; b < B; ++b)
                    std::memcpy(&dh.at(b, T - 1, 0), &d.at(b, 0),
                                sizeof(double) * co);
            }
            Tensor dx = Tensor::zeros3(B, T, ci);
            gru_backward(
                c.in.data.data(), c.out.data.data(), c.z.data.data(),
                c.r.data.data(), c.hc.data.data(), B, T, ci, co,
                w.find(l.name + "/W_z").data.data(),
                w.find(l.name + "/W_r").data.data(),
                w.find(l.name + "/W_h").data.data(),
                w.find(l.name + "/U_z").data.data(),
                w.find(l.name + "/U_r").data.data(),
                w.find(l.name + "/U_h").data.data(), dh.data.data(),
                grads.find(l.name + "/W_z").data.data(),
                grads.find(l.name + "/W_r").data.data(),
                grads.find(l.name + "/W_h").data.data(),
                grads.find(l.name + "/U_z").data.data(),
                grads.find(l.name + "/U_r").data.data(),
                grads.find(l.name + "/U_h").data.data(),
                grads.find(l.name + "/b_z").data.data(),
                grads.find(l.name + "/b_r").data.data(),
                grads.find(l.name + "/b_h").data.data(),
                need_dx ? dx.data.data() : nullptr);
            d = std::move(dx);
            break;
        }
        case LayerSpec::Kind::Conv1d: {
            const auto& k = w.find(l.name + "/kernel");
            Tensor dx = Tensor::zeros3(B, c.in.d1, ci);
            conv1d_backward(c.in.data.data(), c.out.data.data(),
                            d.data.data(), B, c.in.d1, ci, k.data.data(),
                            l.kernel, co, l.activation == Activation::Relu,
                            grads.find(l.name + "/kernel").data.data(),
                            grads.find(l.name + "/bias").data.data(),
                            need_dx ? dx.data.data() : nullptr);
            d = std::move(dx);
            break;
        }
        }
    }
    return L;
}

} // namespace aeolus::nn
