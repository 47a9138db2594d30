#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "aeolus/core/errors.hpp"
#include "aeolus/nn/layers.hpp"
#include "aeolus/nn/network.hpp"
#include "aeolus/nn/paper_nets.hpp"
#include "aeolus/nn/weights_io.hpp"
#include "aeolus/nn/windows.hpp"
#include "oracles/naive_nets.hpp"

using namespace aeolus;
using namespace aeolus::nn;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                  double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v)
        x = d(rng);
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Minimal in-air record for channel-extraction tests: constant sensors with
/// the multirate empty-cell pattern and a rotating truth block.
sim::FlightRecord tiny_record(std::size_t rows) {
    sim::FlightRecord rec;
    rec.rate_hz = 400.0;
    rec.rows.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        auto& r = rec.rows[i];
        r.t = static_cast<double>(i) / rec.rate_hz;
        r.anemo = {0.1 * static_cast<double>(i % 7), 0.2, -0.3, 0.4};
        r.accel = {0.0, 0.0, -9.80665};
        r.gyro = {0.01, -0.02, 0.03};
        r.mag = {0.5, 0.0, 0.8660254};
        if (i % 2 == 0)
            r.pressure_pa = 101000.0 - static_cast<double>(i);
        r.esc = {0.5, 0.6, 0.7, 0.8};
        if (i % 4 == 0) {
            r.voltage_v = 16.0 - 0.001 * static_cast<double>(i);
            r.current_a = 5.0 + 0.002 * static_cast<double>(i);
        }
        sim::GroundTruth gt;
        gt.p = {0.0, 0.0, -1.5};
        gt.v = {0.3, -0.2, 0.1};
        gt.a = {0.05, 0.1, -0.15};
        gt.q = core::Rotation::from_rpy(0.0, 0.0, 0.4).to_quaternion();
        gt.in_air = i >= rows / 2;
        r.gt = gt;
    }
    return rec;
}

} // namespace

TEST_SUITE("nn") {

TEST_CASE("conv1d delta kernel reproduces relu of the input") {
    std::mt19937_64 rng(100);
    const std::size_t B = 2, T = 9, C = 3, K = 5;
    const auto x = random_vector(rng, B * T * C, 2.0);
    std::vector<double> kernel(K * C * C, 0.0);
    // Center tap (k = pad = 2) mapping channel ci to co = ci.
    for (std::size_t c = 0; c < C; ++c)
        kernel[(2 * C + c) * C + c] = 1.0;
    const std::vector<double> bias(C, 0.0);
    std::vector<double> y(B * T * C);
    conv1d_forward(x.data(), B, T, C, kernel.data(), K, C, bias.data(), true,
                   y.data());
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(y[i] == (x[i] > 0.0 ? x[i] : 0.0));
}

TEST_CASE("conv1d zero kernel returns the bias everywhere") {
    std::mt19937_64 rng(101);
    const std::size_t B = 1, T = 6, Ci = 4, Co = 2, K = 3;
    const auto x = random_vector(rng, B * T * Ci, 5.0);
    const std::vector<double> kernel(K * Ci * Co, 0.0);
    const std::vector<double> bias = {0.7, 1.3};
    std::vector<double> y(B * T * Co);
    conv1d_forward(x.data(), B, T, Ci, kernel.data(), K, Co, bias.data(), true,
                   y.data());
    for (std::size_t t = 0; t < T; ++t) {
        CHECK(y[t * Co + 0] == 0.7);
        CHECK(y[t * Co + 1] == 1.3);
    }
}

TEST_CASE("conv1d matches the naive reference on random shapes") {
    std::mt19937_64 rng(102);
    for (int it = 0; it < 120; ++it) {
        const std::size_t B = 1 + rng() % 3, T = 1 + rng() % 9;
        const std::size_t Ci = 1 + rng() % 4, Co = 1 + rng() % 4;
        const std::size_t K = 1 + rng() % 6;
        const bool relu = rng() % 2 == 0;
        const auto x = random_vector(rng, B * T * Ci, 1.5);
        const auto k = random_vector(rng, K * Ci * Co, 1.0);
        const auto b = random_vector(rng, Co, 0.5);
        std::vector<double> y(B * T * Co);
        conv1d_forward(x.data(), B, T, Ci, k.data(), K, Co, b.data(), relu,
                       y.data());
        const auto ref = naive::conv1d(x, B, T, Ci, k, K, Co, b, relu);
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(std::abs(y[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("gru with all-zero weights outputs zero") {
    std::mt19937_64 rng(103);
    const std::size_t B = 2, T = 5, Ci = 3, H = 4;
    const auto x = random_vector(rng, B * T * Ci, 3.0);
    const std::vector<double> W(Ci * H, 0.0), U(H * H, 0.0), b(H, 0.0);
    std::vector<double> h(B * T * H), z(B * T * H), r(B * T * H),
        hc(B * T * H);
    gru_forward(x.data(), B, T, Ci, H, W.data(), W.data(), W.data(), U.data(),
                U.data(), U.data(), b.data(), b.data(), b.data(), h.data(),
                z.data(), r.data(), hc.data());
    for (double v : h)
        CHECK(v == 0.0);
}

TEST_CASE("gru single step matches the scalar closed form") {
    // One unit, one step, h0 = 0: the reset gate is irrelevant and
    // h1 = sigmoid(Wz x + bz) * tanh(Wh x + bh).
    const double x = 0.4, Wz = 0.9, bz = -0.1, Wh = 1.3, bh = 0.2;
    const std::vector<double> wz = {Wz}, wr = {0.7}, wh = {Wh};
    const std::vector<double> u(1, 0.6);
    const std::vector<double> vbz = {bz}, vbr = {0.3}, vbh = {bh};
    std::vector<double> h(1), z(1), r(1), hc(1);
    gru_forward(&x, 1, 1, 1, 1, wz.data(), wr.data(), wh.data(), u.data(),
                u.data(), u.data(), vbz.data(), vbr.data(), vbh.data(),
                h.data(), z.data(), r.data(), hc.data());
    const double zz = 1.0 / (1.0 + std::exp(-(Wz * x + bz)));
    const double expected = zz * std::tanh(Wh * x + bh);
    CHECK(h[0] == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("gru matches the naive recurrence on random shapes") {
    std::mt19937_64 rng(104);
    for (int it = 0; it < 120; ++it) {
        const std::size_t B = 1 + rng() % 2, T = 1 + rng() % 6;
        const std::size_t Ci = 1 + rng() % 3, H = 1 + rng() % 4;
        const auto x = random_vector(rng, B * T * Ci, 1.5);
        const auto Wz = random_vector(rng, Ci * H, 1.0);
        const auto Wr = random_vector(rng, Ci * H, 1.0);
        const auto Wh = random_vector(rng, Ci * H, 1.0);
        const auto Uz = random_vector(rng, H * H, 1.0);
        const auto Ur = random_vector(rng, H * H, 1.0);
        const auto Uh = random_vector(rng, H * H, 1.0);
        const auto bz = random_vector(rng, H, 0.5);
        const auto br = random_vector(rng, H, 0.5);
        const auto bh = random_vector(rng, H, 0.5);
        std::vector<double> h(B * T * H), z(B * T * H), r(B * T * H),
            hc(B * T * H);
        gru_forward(x.data(), B, T, Ci, H, Wz.data(), Wr.data(), Wh.data(),
                    Uz.data(), Ur.data(), Uh.data(), bz.data(), br.data(),
                    bh.data(), h.data(), z.data(), r.data(), hc.data());
        const auto ref =
            naive::gru(x, B, T, Ci, H, Wz, Wr, Wh, Uz, Ur, Uh, bz, br, bh);
        for (std::size_t i = 0; i < h.size(); ++i)
            CHECK(std::abs(h[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("dense matches the naive reference and softmax rows sum to one") {
    std::mt19937_64 rng(105);
    for (int it = 0; it < 60; ++it) {
        const std::size_t B = 1 + rng() % 4, Ci = 1 + rng() % 5,
                          Co = 1 + rng() % 5;
        const bool softmax = rng() % 2 == 0;
        const auto x = random_vector(rng, B * Ci, it % 3 == 0 ? 100.0 : 2.0);
        const auto W = random_vector(rng, Ci * Co, 1.0);
        const auto b = random_vector(rng, Co, 0.5);
        std::vector<double> y(B * Co);
        dense_forward(x.data(), B, Ci, W.data(), Co, b.data(), softmax,
                      y.data());
        const auto ref = naive::dense(x, B, Ci, W, Co, b, softmax);
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(std::abs(y[i] - ref[i]) <= 1e-12);
        if (softmax) {
            for (std::size_t bi = 0; bi < B; ++bi) {
                double sum = 0.0;
                for (std::size_t co = 0; co < Co; ++co) {
                    CHECK(y[bi * Co + co] >= 0.0);
                    CHECK(y[bi * Co + co] <= 1.0);
                    sum += y[bi * Co + co];
                }
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            }
        }
    }
}

TEST_CASE("status network probabilities sum to one on random inputs") {
    const NetworkSpec spec = status_network_spec();
    Weights w = init_weights(spec, 42);
    std::mt19937_64 rng(106);
    Tensor x = Tensor::zeros3(3, spec.window_len, spec.input_channels);
    for (double& v : x.data)
        v = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    const Tensor y = network_forward(spec, w, x);
    REQUIRE(y.d0 == 3);
    REQUIRE(y.d1 == 2);
    for (std::size_t b = 0; b < 3; ++b)
        CHECK(std::abs(y.at(b, 0) + y.at(b, 1) - 1.0) <= 1e-9);
}

TEST_CASE("velocity network with zero weights returns zero") {
    const NetworkSpec spec = velocity_network_spec();
    Weights w = init_weights(spec, 1);
    for (auto& p : w.params)
        std::fill(p.data.begin(), p.data.end(), 0.0);
    Tensor x = Tensor::zeros3(1, spec.window_len, spec.input_channels);
    std::mt19937_64 rng(107);
    for (double& v : x.data)
        v = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const Tensor y = network_forward(spec, w, x);
    for (double v : y.data)
        CHECK(v == 0.0);
}

TEST_CASE("network forward is bit-deterministic") {
    const NetworkSpec spec = acceleration_network_spec();
    const Weights w = init_weights(spec, 9);
    Tensor x = Tensor::zeros3(2, spec.window_len, spec.input_channels);
    std::mt19937_64 rng(108);
    for (double& v : x.data)
        v = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const Tensor y1 = network_forward(spec, w, x);
    const Tensor y2 = network_forward(spec, w, x);
    REQUIRE(y1.data.size() == y2.data.size());
    CHECK(std::memcmp(y1.data.data(), y2.data.data(),
                      y1.data.size() * sizeof(double)) == 0);
}

TEST_CASE("parameter counts of the three architectures are pinned") {
    // Hand-derived shape audit:
    //   velocity:     (5*7*16+16) + (5*16*16+16) + 2*3*(16*16+16*16+16)
    //                 + (16*3+3) = 5091
    //   acceleration: (12*14*5+5) + (12*5*5+5) + 3*(5*12+12*12+12)
    //                 + 3*(12*12+12*12+12) + (12*3+3) = 2737
    //   status:       (5*8*4+4) + 3*(4*6+6*6+6) + (6*2+2) = 376
    CHECK(velocity_network_spec().parameter_count() == 5091);
    CHECK(acceleration_network_spec().parameter_count() == 2737);
    CHECK(status_network_spec().parameter_count() == 376);
}

TEST_CASE("the three architectures accept their stated window shapes") {
    std::mt19937_64 rng(109);
    for (const NetworkSpec& spec :
         {velocity_network_spec(), acceleration_network_spec(),
          status_network_spec()}) {
        const Weights w = init_weights(spec, 5);
        Tensor x = Tensor::zeros3(2, spec.window_len, spec.input_channels);
        for (double& v : x.data)
            v = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const Tensor y = network_forward(spec, w, x);
        CHECK(y.rank == 2);
        CHECK(y.d0 == 2);
        CHECK(y.d1 == spec.output_dim());
        // Wrong window length must be rejected, not silently accepted.
        Tensor bad = Tensor::zeros3(1, spec.window_len + 1, spec.input_channels);
        CHECK_THROWS_AS(network_forward(spec, w, bad), core::ConfigError);
    }
}

TEST_CASE("weights json roundtrip is byte-exact") {
    const NetworkSpec spec = status_network_spec();
    Weights w = init_weights(spec, 77);
    w.norm_mean.assign(spec.input_channels, 0.0);
    w.norm_std.assign(spec.input_channels, 1.0);
    std::mt19937_64 rng(110);
    for (auto& v : w.norm_mean)
        v = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    for (auto& v : w.norm_std)
        v = std::uniform_real_distribution<double>(0.1, 3.0)(rng);

    const std::string p1 = "test_weights_a.json";
    const std::string p2 = "test_weights_b.json";
    save_weights(p1, spec, w);
    const Weights r = load_weights(p1, spec);
    save_weights(p2, spec, r);
    CHECK(slurp(p1) == slurp(p2));
    REQUIRE(r.params.size() == w.params.size());
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        CHECK(r.params[i].name == w.params[i].name);
        CHECK(r.params[i].data == w.params[i].data);
    }
    CHECK(r.norm_mean == w.norm_mean);
    CHECK(r.norm_std == w.norm_std);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("weights for one architecture are rejected by another") {
    const std::string path = "test_weights_mismatch.json";
    save_weights(path, status_network_spec(),
                 init_weights(status_network_spec(), 3));
    CHECK_THROWS_AS(load_weights(path, velocity_network_spec()),
                    core::DataError);
    std::remove(path.c_str());
}

TEST_CASE("window count arithmetic") {
    SessionChannels s;
    s.rows = 4000; // 10 s at 400 Hz
    s.channels = 1;
    s.target_dim = 1;
    s.values.assign(s.rows, 0.0);
    s.targets.assign(s.rows, 0.0);
    const auto windows = make_windows({s}, 400, 1);
    CHECK(windows.size() == 3601);
    CHECK(windows.front().start == 0);
    CHECK(windows.back().start == 3600);
}

TEST_CASE("windows never cross session boundaries") {
    SessionChannels a, b;
    a.rows = 500;
    b.rows = 450;
    a.channels = b.channels = 1;
    a.target_dim = b.target_dim = 1;
    a.values.assign(a.rows, 0.0);
    a.targets.assign(a.rows, 0.0);
    b.values.assign(b.rows, 0.0);
    b.targets.assign(b.rows, 0.0);
    const auto windows = make_windows({a, b}, 400, 50);
    CHECK(windows.size() == 5); // 3 in the first session, 2 in the second
    for (const auto& ref : windows) {
        const std::size_t rows = ref.session == 0 ? a.rows : b.rows;
        CHECK(ref.start + 400 <= rows);
    }
}

TEST_CASE("stride-1 window ends cover every timestamp past the first window") {
    SessionChannels s;
    s.rows = 450;
    s.channels = 1;
    s.target_dim = 1;
    s.values.assign(s.rows, 0.0);
    s.targets.assign(s.rows, 0.0);
    const auto windows = make_windows({s}, 400, 1);
    REQUIRE(windows.size() == 51);
    for (std::size_t i = 0; i < windows.size(); ++i)
        CHECK(windows[i].start + 400 - 1 == 399 + i);
}

TEST_CASE("a session shorter than one window is an error") {
    SessionChannels s;
    s.rows = 100;
    s.channels = 1;
    s.target_dim = 1;
    s.values.assign(s.rows, 0.0);
    s.targets.assign(s.rows, 0.0);
    CHECK_THROWS_AS(make_windows({s}, 400, 1), core::DataError);
}

TEST_CASE("window target is the value at the window's last row") {
    SessionChannels s;
    s.rows = 20;
    s.channels = 2;
    s.target_dim = 1;
    s.values.assign(s.rows * 2, 1.0);
    s.targets.resize(s.rows);
    for (std::size_t i = 0; i < s.rows; ++i)
        s.targets[i] = static_cast<double>(i);
    Tensor x = Tensor::zeros3(1, 8, 2);
    Tensor t = Tensor::zeros2(1, 1);
    assemble_window(s, {0, 5}, 8, x, t, 0);
    CHECK(t.at(0, 0) == 12.0); // start 5 + window 8 - 1
}

TEST_CASE("velocity channels and targets follow the record") {
    const auto rec = tiny_record(16);
    const auto s = velocity_channels(rec, true);
    REQUIRE(s.rows == 16);
    REQUIRE(s.channels == 7);
    CHECK(s.value(3, 0) == rec.rows[3].anemo[0]);
    CHECK(s.value(3, 4) == rec.rows[3].gyro.x);
    // Body-frame target: R^T v for yaw 0.4.
    const core::Vec3 body = core::Rotation::from_rpy(0.0, 0.0, 0.4)
                                .rotate_back({0.3, -0.2, 0.1});
    CHECK(s.targets[3 * 3 + 0] == doctest::Approx(body.x).epsilon(1e-12));
    CHECK(s.targets[3 * 3 + 1] == doctest::Approx(body.y).epsilon(1e-12));
    CHECK(s.targets[3 * 3 + 2] == doctest::Approx(body.z).epsilon(1e-12));
}

TEST_CASE("sparse sensor channels are forward-filled") {
    const auto rec = tiny_record(16);
    const std::vector<core::Quat> att(rec.rows.size());
    const auto s = acceleration_channels(rec, att, false);
    // Battery samples land on rows 0, 4, 8, ...; in between the last value
    // holds.
    CHECK(s.value(1, 12) == *rec.rows[0].voltage_v);
    CHECK(s.value(3, 13) == *rec.rows[0].current_a);
    CHECK(s.value(4, 12) == *rec.rows[4].voltage_v);
    CHECK(s.value(5, 4) == rec.rows[5].esc[0]);
}

TEST_CASE("status altitude channel is re-zeroed to each window start") {
    const auto rec = tiny_record(64);
    const auto s = status_channels(rec, true);
    REQUIRE(s.shift_channel == 5);
    Tensor x = Tensor::zeros3(1, 16, 8);
    Tensor t = Tensor::zeros2(1, 2);
    assemble_window(s, {0, 10}, 16, x, t, 0);
    CHECK(x.at(0, 0, 5) == 0.0);
    // Later entries carry the altitude excursion since the window start.
    CHECK(x.at(0, 15, 5) ==
          doctest::Approx(s.value(25, 5) - s.value(10, 5)).epsilon(1e-12));
    // One-hot phase target at the window end (row 25 is before the
    // midpoint, so the truth phase is on-ground).
    CHECK(t.at(0, 0) == 1.0);
    CHECK(t.at(0, 1) == 0.0);
    // A window ending in the in-air half labels the other class.
    assemble_window(s, {0, 40}, 16, x, t, 0);
    CHECK(t.at(0, 0) == 0.0);
    CHECK(t.at(0, 1) == 1.0);
}

TEST_CASE("training extraction without ground truth is rejected") {
    auto rec = tiny_record(8);
    rec.rows[4].gt.reset();
    CHECK_THROWS_AS(velocity_channels(rec, true), core::DataError);
    CHECK_THROWS_AS(status_channels(rec, true), core::DataError);
}

} // TEST_SUITE
