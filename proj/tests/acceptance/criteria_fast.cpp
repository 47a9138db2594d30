#include "criteria.hpp"

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"
#include "aeolus/est/altitude.hpp"
#include "aeolus/est/lever_arm.hpp"
#include "aeolus/nn/layers.hpp"
#include "aeolus/sim/rig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace acceptance {

using aeolus::core::Rotation;
using aeolus::core::Vec3;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

Vec3 random_vec(std::mt19937_64& rng, double amp) {
    return {uniform(rng, -amp, amp), uniform(rng, -amp, amp),
            uniform(rng, -amp, amp)};
}

Rotation random_rotation(std::mt19937_64& rng) {
    Vec3 axis = random_vec(rng, 1.0);
    if (axis.norm() < 1e-6)
        axis = Vec3::unit_x();
    return Rotation::from_axis_angle(axis.normalized(),
                                     uniform(rng, -3.14159, 3.14159));
}

} // namespace

// Zero-noise, zero-downwash channel readings synthesized from first
// principles (sensor-point velocity projected on the channel axes), then
// inverted through assemble_flow_vector + lever_arm_velocity.
bool criterion_1(const fs::path&) {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 v = random_vec(rng, 2.0);
        const Vec3 omega = random_vec(rng, 1.0);
        const Vec3 delta = random_vec(rng, 0.2);
        const Rotation r0 = random_rotation(rng);

        // Independent forward model: the air moves past the sensor point at
        // the negative of the point's velocity; the channel convention
        // reports flow such that v = R0·flow − ω×δ.
        const Vec3 flow_sensor = r0.inverse() * (v + omega.cross(delta));

        aeolus::sim::SensorRig rig;
        rig.mount = r0;
        rig.lever_arm = delta;
        std::array<double, 4> readings{};
        for (std::size_t c = 0; c < 4; ++c)
            readings[c] = rig.axes[c].dot(flow_sensor);

        const Vec3 flow = aeolus::sim::assemble_flow_vector(readings, rig);
        const Vec3 recovered =
            aeolus::est::lever_arm_velocity(flow, omega, r0, delta);
        worst = std::max(worst, (recovered - v).norm());
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "lever-arm roundtrip worst error %.3g m/s over 10000 random "
                  "states (bound 1e-9)",
                  worst);
    return verdict(1, worst <= 1e-9, buf);
}

// pressure_to_altitude against direct numerical integration of the
// hydrostatic equation dP/dh = −g·M·P / (R·T(h)) with T linear in h.
bool criterion_2(const fs::path&) {
    const aeolus::est::AtmosphereParams atm{};
    const auto dp_dh = [&](double h, double p) {
        const double t = atm.t1 + atm.lapse * (h - atm.h1);
        return -atm.gravity * atm.molar_mass * p / (atm.gas_constant * t);
    };

    double worst = 0.0;
    double h = 0.0, p = atm.p1;
    const int checkpoints = 100;
    for (int k = 0; k < checkpoints; ++k) {
        const double h_target = 2000.0 * static_cast<double>(k) /
                                static_cast<double>(checkpoints - 1);
        const int substeps = 200;
        const double step = (h_target - h) / substeps;
        if (step > 0.0) {
            for (int s = 0; s < substeps; ++s) {
                const double k1 = dp_dh(h, p);
                const double k2 = dp_dh(h + 0.5 * step, p + 0.5 * step * k1);
                const double k3 = dp_dh(h + 0.5 * step, p + 0.5 * step * k2);
                const double k4 = dp_dh(h + step, p + step * k3);
                p += step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
                h += step;
            }
        }
        const double recovered = aeolus::est::pressure_to_altitude(p, atm);
        worst = std::max(worst, std::abs(recovered - h));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "altitude vs hydrostatic integration worst error %.3g m on "
                  "100 points over 0-2000 m (bound 0.01)",
                  worst);
    return verdict(2, worst <= 0.01, buf);
}

namespace {

// ---- Naive layer references, written independently of src/nn ----

void naive_conv(const std::vector<double>& x, std::size_t B, std::size_t T,
                std::size_t Ci, const std::vector<double>& kern, std::size_t K,
                std::size_t Co, const std::vector<double>& bias, bool relu,
                std::vector<double>& y) {
    const std::size_t pad = (K - 1) / 2;
    y.assign(B * T * Co, 0.0);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t co = 0; co < Co; ++co) {
                double acc = bias[co];
                for (std::size_t k = 0; k < K; ++k) {
                    const std::ptrdiff_t src =
                        static_cast<std::ptrdiff_t>(t + k) -
                        static_cast<std::ptrdiff_t>(pad);
                    if (src < 0 || src >= static_cast<std::ptrdiff_t>(T))
                        continue;
                    for (std::size_t ci = 0; ci < Ci; ++ci)
                        acc += x[(b * T + src) * Ci + ci] *
                               kern[(k * Ci + ci) * Co + co];
                }
                if (relu && acc < 0.0)
                    acc = 0.0;
                y[(b * T + t) * Co + co] = acc;
            }
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void naive_gru(const std::vector<double>& x, std::size_t B, std::size_t T,
               std::size_t Ci, std::size_t H, const std::vector<double>& wz,
               const std::vector<double>& wr, const std::vector<double>& wh,
               const std::vector<double>& uz, const std::vector<double>& ur,
               const std::vector<double>& uh, const std::vector<double>& bz,
               const std::vector<double>& br, const std::vector<double>& bh,
               std::vector<double>& h_seq) {
    h_seq.assign(B * T * H, 0.0);
    std::vector<double> h(H), z(H), r(H), hc(H);
    for (std::size_t b = 0; b < B; ++b) {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double* xr = &x[(b * T + t) * Ci];
            for (std::size_t j = 0; j < H; ++j) {
                double az = bz[j], ar = br[j];
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                    az += xr[ci] * wz[ci * H + j];
                    ar += xr[ci] * wr[ci * H + j];
                }
                for (std::size_t k = 0; k < H; ++k) {
                    az += h[k] * uz[k * H + j];
                    ar += h[k] * ur[k * H + j];
                }
                z[j] = sigmoid(az);
                r[j] = sigmoid(ar);
            }
            for (std::size_t j = 0; j < H; ++j) {
                double ah = bh[j];
                for (std::size_t ci = 0; ci < Ci; ++ci)
                    ah += xr[ci] * wh[ci * H + j];
                for (std::size_t k = 0; k < H; ++k)
                    ah += r[k] * h[k] * uh[k * H + j];
                hc[j] = std::tanh(ah);
            }
            for (std::size_t j = 0; j < H; ++j) {
                h[j] = (1.0 - z[j]) * h[j] + z[j] * hc[j];
                h_seq[(b * T + t) * H + j] = h[j];
            }
        }
    }
}

void naive_dense(const std::vector<double>& x, std::size_t B, std::size_t Ci,
                 const std::vector<double>& w, std::size_t Co,
                 const std::vector<double>& bias, bool softmax,
                 std::vector<double>& y) {
    y.assign(B * Co, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
        double* yr = &y[b * Co];
        for (std::size_t co = 0; co < Co; ++co) {
            double acc = bias[co];
            for (std::size_t ci = 0; ci < Ci; ++ci)
                acc += x[b * Ci + ci] * w[ci * Co + co];
            yr[co] = acc;
        }
        if (softmax) {
            const double peak = *std::max_element(yr, yr + Co);
            double total = 0.0;
            for (std::size_t co = 0; co < Co; ++co) {
                yr[co] = std::exp(yr[co] - peak);
                total += yr[co];
            }
            for (std::size_t co = 0; co < Co; ++co)
                yr[co] /= total;
        }
    }
}

std::vector<double> random_buffer(std::mt19937_64& rng, std::size_t n,
                                  double amp) {
    std::vector<double> out(n);
    for (double& v : out)
        v = uniform(rng, -amp, amp);
    return out;
}

struct GradCheck {
    double worst_rel = 0.0;
    std::size_t checked = 0;

    // Relative agreement between analytic g and central-difference fd;
    // near-zero pairs are exact agreements for this purpose.
    void take(double g, double fd) {
        ++checked;
        const double scale = std::max(std::abs(g), std::abs(fd));
        if (scale < 1e-8)
            return;
        worst_rel = std::max(worst_rel, std::abs(g - fd) / scale);
    }
};

// Central finite difference of loss(buffer) at index i.
template <typename LossFn>
double central_fd(std::vector<double>& buf, std::size_t i, LossFn&& loss) {
    const double eps = 1e-5;
    const double saved = buf[i];
    buf[i] = saved + eps;
    const double hi = loss();
    buf[i] = saved - eps;
    const double lo = loss();
    buf[i] = saved;
    return (hi - lo) / (2.0 * eps);
}

} // namespace

// Layer kernels against naive references (forward) and central finite
// differences (backward), on random small instances.
bool criterion_3(const fs::path&) {
    std::mt19937_64 rng(303);
    double worst_fwd = 0.0;
    GradCheck grad;
    std::size_t instances = 0;

    // Conv1d: 40 instances.
    for (int i = 0; i < 40; ++i) {
        const std::size_t B = 1 + rng() % 2, T = 3 + rng() % 4,
                          Ci = 1 + rng() % 3, Co = 1 + rng() % 3,
                          K = 1 + rng() % 3;
        const bool relu = rng() % 2 == 0;
        auto x = random_buffer(rng, B * T * Ci, 1.5);
        auto kern = random_buffer(rng, K * Ci * Co, 1.0);
        auto bias = random_buffer(rng, Co, 0.5);
        const auto proj = random_buffer(rng, B * T * Co, 1.0);

        std::vector<double> y(B * T * Co), ref;
        aeolus::nn::conv1d_forward(x.data(), B, T, Ci, kern.data(), K, Co,
                                   bias.data(), relu, y.data());
        naive_conv(x, B, T, Ci, kern, K, Co, bias, relu, ref);
        for (std::size_t j = 0; j < y.size(); ++j)
            worst_fwd = std::max(worst_fwd, std::abs(y[j] - ref[j]));

        const auto loss = [&] {
            std::vector<double> out(B * T * Co);
            aeolus::nn::conv1d_forward(x.data(), B, T, Ci, kern.data(), K, Co,
                                       bias.data(), relu, out.data());
            double l = 0.0;
            for (std::size_t j = 0; j < out.size(); ++j)
                l += out[j] * proj[j];
            return l;
        };
        std::vector<double> dkern(kern.size(), 0.0), dbias(Co, 0.0),
            dx(x.size(), 0.0);
        aeolus::nn::conv1d_backward(x.data(), y.data(), proj.data(), B, T, Ci,
                                    kern.data(), K, Co, relu, dkern.data(),
                                    dbias.data(), dx.data());
        for (std::size_t j = 0; j < kern.size(); ++j)
            grad.take(dkern[j], central_fd(kern, j, loss));
        for (std::size_t j = 0; j < Co; ++j)
            grad.take(dbias[j], central_fd(bias, j, loss));
        for (std::size_t j = 0; j < x.size(); ++j)
            grad.take(dx[j], central_fd(x, j, loss));
        ++instances;
    }

    // GRU: 35 instances.
    for (int i = 0; i < 35; ++i) {
        const std::size_t B = 1 + rng() % 2, T = 2 + rng() % 4,
                          Ci = 1 + rng() % 3, H = 1 + rng() % 3;
        auto x = random_buffer(rng, B * T * Ci, 1.2);
        auto wz = random_buffer(rng, Ci * H, 0.8);
        auto wr = random_buffer(rng, Ci * H, 0.8);
        auto wh = random_buffer(rng, Ci * H, 0.8);
        auto uz = random_buffer(rng, H * H, 0.8);
        auto ur = random_buffer(rng, H * H, 0.8);
        auto uh = random_buffer(rng, H * H, 0.8);
        auto bz = random_buffer(rng, H, 0.4);
        auto br = random_buffer(rng, H, 0.4);
        auto bh = random_buffer(rng, H, 0.4);
        const auto proj = random_buffer(rng, B * T * H, 1.0);

        std::vector<double> h_seq(B * T * H), zc(B * T * H), rc(B * T * H),
            hcc(B * T * H), ref;
        aeolus::nn::gru_forward(x.data(), B, T, Ci, H, wz.data(), wr.data(),
                                wh.data(), uz.data(), ur.data(), uh.data(),
                                bz.data(), br.data(), bh.data(), h_seq.data(),
                                zc.data(), rc.data(), hcc.data());
        naive_gru(x, B, T, Ci, H, wz, wr, wh, uz, ur, uh, bz, br, bh, ref);
        for (std::size_t j = 0; j < h_seq.size(); ++j)
            worst_fwd = std::max(worst_fwd, std::abs(h_seq[j] - ref[j]));

        const auto loss = [&] {
            std::vector<double> h(B * T * H), a(B * T * H), b(B * T * H),
                c(B * T * H);
            aeolus::nn::gru_forward(x.data(), B, T, Ci, H, wz.data(),
                                    wr.data(), wh.data(), uz.data(), ur.data(),
                                    uh.data(), bz.data(), br.data(), bh.data(),
                                    h.data(), a.data(), b.data(), c.data());
            double l = 0.0;
            for (std::size_t j = 0; j < h.size(); ++j)
                l += h[j] * proj[j];
            return l;
        };
        std::vector<double> dwz(wz.size(), 0.0), dwr(wr.size(), 0.0),
            dwh(wh.size(), 0.0), duz(uz.size(), 0.0), dur(ur.size(), 0.0),
            duh(uh.size(), 0.0), dbz(H, 0.0), dbr(H, 0.0), dbh(H, 0.0),
            dx(x.size(), 0.0);
        std::vector<double> dh_seq(proj); // consumed destructively
        aeolus::nn::gru_backward(x.data(), h_seq.data(), zc.data(), rc.data(),
                                 hcc.data(), B, T, Ci, H, wz.data(), wr.data(),
                                 wh.data(), uz.data(), ur.data(), uh.data(),
                                 dh_seq.data(), dwz.data(), dwr.data(),
                                 dwh.data(), duz.data(), dur.data(),
                                 duh.data(), dbz.data(), dbr.data(),
                                 dbh.data(), dx.data());
        const std::array<std::pair<std::vector<double>*, std::vector<double>*>,
                         9>
            pairs{{{&wz, &dwz},
                   {&wr, &dwr},
                   {&wh, &dwh},
                   {&uz, &duz},
                   {&ur, &dur},
                   {&uh, &duh},
                   {&bz, &dbz},
                   {&br, &dbr},
                   {&bh, &dbh}}};
        for (auto& [param, dparam] : pairs)
            for (std::size_t j = 0; j < param->size(); ++j)
                grad.take((*dparam)[j], central_fd(*param, j, loss));
        for (std::size_t j = 0; j < x.size(); ++j)
            grad.take(dx[j], central_fd(x, j, loss));
        ++instances;
    }

    // Dense: 35 instances, half with softmax.
    for (int i = 0; i < 35; ++i) {
        const std::size_t B = 1 + rng() % 3, Ci = 1 + rng() % 4,
                          Co = 1 + rng() % 4;
        const bool softmax = i % 2 == 0;
        auto x = random_buffer(rng, B * Ci, 1.5);
        auto w = random_buffer(rng, Ci * Co, 1.0);
        auto bias = random_buffer(rng, Co, 0.5);
        const auto proj = random_buffer(rng, B * Co, 1.0);

        std::vector<double> y(B * Co), ref;
        aeolus::nn::dense_forward(x.data(), B, Ci, w.data(), Co, bias.data(),
                                  softmax, y.data());
        naive_dense(x, B, Ci, w, Co, bias, softmax, ref);
        for (std::size_t j = 0; j < y.size(); ++j)
            worst_fwd = std::max(worst_fwd, std::abs(y[j] - ref[j]));

        const auto loss = [&] {
            std::vector<double> out(B * Co);
            aeolus::nn::dense_forward(x.data(), B, Ci, w.data(), Co,
                                      bias.data(), softmax, out.data());
            double l = 0.0;
            for (std::size_t j = 0; j < out.size(); ++j)
                l += out[j] * proj[j];
            return l;
        };
        std::vector<double> dw(w.size(), 0.0), dbias(Co, 0.0), dx(x.size(),
                                                                  0.0);
        aeolus::nn::dense_backward(x.data(), y.data(), proj.data(), B, Ci,
                                   w.data(), Co, softmax, dw.data(),
                                   dbias.data(), dx.data());
        for (std::size_t j = 0; j < w.size(); ++j)
            grad.take(dw[j], central_fd(w, j, loss));
        for (std::size_t j = 0; j < Co; ++j)
            grad.take(dbias[j], central_fd(bias, j, loss));
        for (std::size_t j = 0; j < x.size(); ++j)
            grad.take(dx[j], central_fd(x, j, loss));
        ++instances;
    }

    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "%zu layer instances: worst forward deviation %.3g (bound "
                  "1e-12), worst gradient relative error %.3g over %zu "
                  "derivatives (bound 1e-4)",
                  instances, worst_fwd, grad.worst_rel, grad.checked);
    return verdict(3,
                   instances >= 100 && worst_fwd <= 1e-12 &&
                       grad.worst_rel <= 1e-4,
                   buf);
}

} // namespace acceptance
