#include "aeolus/nn/layers.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace aeolus::nn {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

} // namespace

void conv1d_forward(const double* x, std::size_t B, std::size_t T,
                    std::size_t Ci, const double* kernel, std::size_t K,
                    std::size_t Co, const double* bias, bool relu, double* y) {
    const std::size_t pad = (K - 1) / 2;
    for (std::size_t b = 0; b < B; ++b) {
        const double* xb = x + b * T * Ci;
        double* yb = y + b * T * Co;
        for (std::size_t t = 0; t < T; ++t) {
            double* yr = yb + t * Co;
            for (std::size_t co = 0; co < Co; ++co)
                yr[co] = bias[co];
            for (std::size_t k = 0; k < K; ++k) {
                const std::size_t src = t + k;
                if (src < pad || src - pad >= T)
                    continue;
                const double* xr = xb + (src - pad) * Ci;
                const double* kr = kernel + k * Ci * Co;
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                    const double xv = xr[ci];
                    const double* kc = kr + ci * Co;
                    for (std::size_t co = 0; co < Co; ++co)
                        yr[co] += xv * kc[co];
                }
            }
            if (relu)
                for (std::size_t co = 0; co < Co; ++co)
                    yr[co] = yr[co] > 0.0 ? yr[co] : 0.0;
        }
    }
}

void conv1d_backward(const double* x, const double* y, const double* dy,
                     std::size_t B, std::size_t T, std::size_t Ci,
                     const double* kernel, std::size_t K, std::size_t Co,
                     bool relu, double* dkernel, double* dbias, double* dx) {
    const std::size_t pad = (K - 1) / 2;
    std::vector<double> g(Co);
    if (dx)
        std::memset(dx, 0, sizeof(double) * B * T * Ci);
    for (std::size_t b = 0; b < B; ++b) {
        const double* xb = x + b * T * Ci;
        const double* yb = y + b * T * Co;
        const double* dyb = dy + b * T * Co;
        double* dxb = dx ? dx + b * T * Ci : nullptr;
        for (std::size_t t = 0; t < T; ++t) {
            const double* yr = yb + t * Co;
            const double* dyr = dyb + t * Co;
            for (std::size_t co = 0; co < Co; ++co) {
                g[co] = relu && yr[co] <= 0.0 ? 0.0 : dyr[co];
                dbias[co] += g[co];
            }
            for (std::size_t k = 0; k < K; ++k) {
                const std::size_t src = t + k;
                if (src < pad || src - pad >= T)
                    continue;
                const double* xr = xb + (src - pad) * Ci;
                double* dxr = dxb ? dxb + (src - pad) * Ci : nullptr;
                const double* kr = kernel + k * Ci * Co;
                double* dkr = dkernel + k * Ci * Co;
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                    const double xv = xr[ci];
                    const double* kc = kr + ci * Co;
                    double* dkc = dkr + ci * Co;
                    double acc = 0.0;
                    for (std::size_t co = 0; co < Co; ++co) {
                        dkc[co] += xv * g[co];
                        acc += kc[co] * g[co];
                    }
                    if (dxr)
                        dxr[ci] += acc;
                }
            }
        }
    }
}

void gru_forward(const double* x, std::size_t B, std::size_t T, std::size_t Ci,
                 std::size_t H, const double* Wz, const double* Wr,
                 const double* Wh, const double* Uz, const double* Ur,
                 const double* Uh, const double* bz, const double* br,
                 const double* bh, double* h_seq, double* z_c, double* r_c,
                 double* hc_c) {
    std::vector<double> az(H), ar(H), ah(H), rh(H);
    for (std::size_t b = 0; b < B; ++b) {
        const double* xb = x + b * T * Ci;
        double* hb = h_seq + b * T * H;
        double* zb = z_c + b * T * H;
        double* rb = r_c + b * T * H;
        double* hcb = hc_c + b * T * H;
        for (std::size_t t = 0; t < T; ++t) {
            const double* xr = xb + t * Ci;
            const double* hprev = t > 0 ? hb + (t - 1) * H : nullptr;
            for (std::size_t h = 0; h < H; ++h) {
                az[h] = bz[h];
                ar[h] = br[h];
                ah[h] = bh[h];
            }
            for (std::size_t ci = 0; ci < Ci; ++ci) {
                const double xv = xr[ci];
                const double* wz = Wz + ci * H;
                const double* wr = Wr + ci * H;
                const double* wh = Wh + ci * H;
                for (std::size_t h = 0; h < H; ++h) {
                    az[h] += xv * wz[h];
                    ar[h] += xv * wr[h];
                    ah[h] += xv * wh[h];
                }
            }
            if (hprev) {
                for (std::size_t j = 0; j < H; ++j) {
                    const double hv = hprev[j];
                    const double* uz = Uz + j * H;
                    const double* ur = Ur + j * H;
                    for (std::size_t h = 0; h < H; ++h) {
                        az[h] += hv * uz[h];
                        ar[h] += hv * ur[h];
                    }
                }
            }
            double* zr = zb + t * H;
            double* rr = rb + t * H;
            for (std::size_t h = 0; h < H; ++h) {
                zr[h] = sigmoid(az[h]);
                rr[h] = sigmoid(ar[h]);
                rh[h] = hprev ? rr[h] * hprev[h] : 0.0;
            }
            if (hprev) {
                for (std::size_t j = 0; j < H; ++j) {
                    const double rv = rh[j];
                    const double* uh = Uh + j * H;
                    for (std::size_t h = 0; h < H; ++h)
                        ah[h] += rv * uh[h];
                }
            }
            double* hcr = hcb + t * H;
            double* hr = hb + t * H;
            for (std::size_t h = 0; h < H; ++h) {
                hcr[h] = std::tanh(ah[h]);
                const double hp = hprev ? hprev[h] : 0.0;
                hr[h] = (1.0 - zr[h]) * hp + zr[h] * hcr[h];
            }
        }
    }
}

void gru_backward(const double* x, const double* h_seq, const double* z_c,
                  const double* r_c, const double* hc_c, std::size_t B,
                  std::size_t T, std::size_t Ci, std::size_t H,
                  const double* Wz, const double* Wr, const double* Wh,
                  const double* Uz, const double* Ur, const double* Uh,
                  double* dh_seq, double* dWz, double* dWr, double* dWh,
                  double* dUz, double* dUr, double* dUh, double* dbz,
                  double* dbr, double* dbh, double* dx) {
    std::vector<double> daz(H), dar(H), dah(H), drh(H), carry(H);
    if (dx)
        std::memset(dx, 0, sizeof(double) * B * T * Ci);
    for (std::size_t b = 0; b < B; ++b) {
        const double* xb = x + b * T * Ci;
        const double* hb = h_seq + b * T * H;
        const double* zb = z_c + b * T * H;
        const double* rb = r_c + b * T * H;
        const double* hcb = hc_c + b * T * H;
        double* dhb = dh_seq + b * T * H;
        double* dxb = dx ? dx + b * T * Ci : nullptr;
        std::fill(carry.begin(), carry.end(), 0.0);
        for (std::size_t ti = T; ti-- > 0;) {
            const double* xr = xb + ti * Ci;
            const double* hprev = ti > 0 ? hb + (ti - 1) * H : nullptr;
            const double* zr = zb + ti * H;
            const double* rr = rb + ti * H;
            const double* hcr = hcb + ti * H;
            double* dhprev = ti > 0 ? dhb + (ti - 1) * H : nullptr;
            for (std::size_t h = 0; h < H; ++h) {
                const double dh = dhb[ti * H + h] + carry[h];
                const double hp = hprev ? hprev[h] : 0.0;
                const double dz = dh * (hcr[h] - hp);
                daz[h] = dz * zr[h] * (1.0 - zr[h]);
                const double dhc = dh * zr[h];
                dah[h] = dhc * (1.0 - hcr[h] * hcr[h]);
                carry[h] = dh * (1.0 - zr[h]); // direct h_{t-1} path
            }
            // d(r . h_{t-1}) = dah U_h^T
            for (std::size_t j = 0; j < H; ++j) {
                const double* uh = Uh + j * H;
                double acc = 0.0;
                for (std::size_t h = 0; h < H; ++h)
                    acc += uh[h] * dah[h];
                drh[j] = acc;
            }
            for (std::size_t h = 0; h < H; ++h) {
                const double hp = hprev ? hprev[h] : 0.0;
                const double dr = drh[h] * hp;
                dar[h] = dr * rr[h] * (1.0 - rr[h]);
                carry[h] += drh[h] * rr[h];
            }
            // h_{t-1} paths through the z and r pre-activations.
            for (std::size_t j = 0; j < H; ++j) {
                const double* uz = Uz + j * H;
                const double* ur = Ur + j * H;
                double acc = 0.0;
                for (std::size_t h = 0; h < H; ++h)
                    acc += uz[h] * daz[h] + ur[h] * dar[h];
                carry[j] += acc;
            }
            // Parameter gradients.
            for (std::size_t h = 0; h < H; ++h) {
                dbz[h] += daz[h];
                dbr[h] += dar[h];
                dbh[h] += dah[h];
            }
            for (std::size_t ci = 0; ci < Ci; ++ci) {
                const double xv = xr[ci];
                double* wz = dWz + ci * H;
                double* wr = dWr + ci * H;
                double* wh = dWh + ci * H;
                for (std::size_t h = 0; h < H; ++h) {
                    wz[h] += xv * daz[h];
                    wr[h] += xv * dar[h];
                    wh[h] += xv * dah[h];
                }
            }
            if (hprev) {
                for (std::size_t j = 0; j < H; ++j) {
                    const double hv = hprev[j];
                    const double rhv = rr[j] * hv;
                    double* uz = dUz + j * H;
                    double* ur = dUr + j * H;
                    double* uh = dUh + j * H;
                    for (std::size_t h = 0; h < H; ++h) {
                        uz[h] += hv * daz[h];
                        ur[h] += hv * dar[h];
                        uh[h] += rhv * dah[h];
                    }
                }
            }
            if (dxb) {
                double* dxr = dxb + ti * Ci;
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                    const double* wz = Wz + ci * H;
                    const double* wr = Wr + ci * H;
                    const double* wh = Wh + ci * H;
                    double acc = 0.0;
                    for (std::size_t h = 0; h < H; ++h)
                        acc += wz[h] * daz[h] + wr[h] * dar[h] + wh[h] * dah[h];
                    dxr[ci] = acc;
                }
            }
            (void)dhprev;
        }
    }
}

void dense_forward(const double* x, std::size_t B, std::size_t Ci,
                   const double* W, std::size_t Co, const double* bias,
                   bool softmax, double* y) {
    for (std::size_t b = 0; b < B; ++b) {
        const double* xr = x + b * Ci;
        double* yr = y + b * Co;
        for (std::size_t co = 0; co < Co; ++co)
            yr[co] = bias[co];
        for (std::size_t ci = 0; ci < Ci; ++ci) {
            const double xv = xr[ci];
            const double* wr = W + ci * Co;
            for (std::size_t co = 0; co < Co; ++co)
                yr[co] += xv * wr[co];
        }
        if (softmax) {
            double mx = yr[0];
            for (std::size_t co = 1; co < Co; ++co)
                mx = std::max(mx, yr[co]);
            double sum = 0.0;
            for (std::size_t co = 0; co < Co; ++co) {
                yr[co] = std::exp(yr[co] - mx);
                sum += yr[co];
            }
            for (std::size_t co = 0; co < Co; ++co)
                yr[co] /= sum;
        }
    }
}

void dense_backward(const double* x, const double* y, const double* dy,
                    std::size_t B, std::size_t Ci, const double* W,
                    std::size_t Co, bool softmax, double* dW, double* dbias,
                    double* dx) {
    std::vector<double> g(Co);
    for (std::size_t b = 0; b < B; ++b) {
        const double* xr = x + b * Ci;
        const double* yr = y + b * Co;
        const double* dyr = dy + b * Co;
        if (softmax) {
            // da_i = p_i (dy_i - sum_j dy_j p_j)
            double dot = 0.0;
            for (std::size_t co = 0; co < Co; ++co)
                dot += dyr[co] * yr[co];
            for (std::size_t co = 0; co < Co; ++co)
                g[co] = yr[co] * (dyr[co] - dot);
        } else {
            for (std::size_t co = 0; co < Co; ++co)
                g[co] = dyr[co];
        }
        for (std::size_t co = 0; co < Co; ++co)
            dbias[co] += g[co];
        for (std::size_t ci = 0; ci < Ci; ++ci) {
            const double xv = xr[ci];
            double* wr = dW + ci * Co;
            double acc = 0.0;
            const double* w = W + ci * Co;
            for (std::size_t co = 0; co < Co; ++co) {
                wr[co] += xv * g[co];
                acc += w[co] * g[co];
            }
            if (dx)
                dx[b * Ci + ci] = acc;
        }
    }
}

} // namespace aeolus::nn
