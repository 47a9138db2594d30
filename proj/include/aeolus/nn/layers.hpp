#pragma once

#include <cstddef>

namespace aeolus::nn {

/// Raw layer kernels. Shapes are row-major:
///   sequences  x: (B, T, C)        index ((b*T + t)*C + c)
///   conv kernel : (K, Cin, Cout)   index ((k*Cin + ci)*Cout + co)
///   gru/dense W : (Cin, H)         index (ci*H + h)
///   gru U       : (H, H)           index (j*H + h)
/// Backward kernels ACCUMULATE into the parameter-gradient buffers (callers
/// zero them once per batch) and overwrite the input-gradient buffer.

/// Same-padded 1-D cross-correlation over time, stride 1; pad_left is
/// (K-1)/2 so even kernels pad one extra sample on the right.
void conv1d_forward(const double* x, std::size_t B, std::size_t T,
                    std::size_t Ci, const double* kernel, std::size_t K,
                    std::size_t Co, const double* bias, bool relu, double* y);

/// Gradient of conv1d_forward. y is the post-activation output (the ReLU
/// mask is y > 0). dx may be null when the input gradient is not needed.
void conv1d_backward(const double* x, const double* y, const double* dy,
                     std::size_t B, std::size_t T, std::size_t Ci,
                     const double* kernel, std::size_t K, std::size_t Co,
                     bool relu, double* dkernel, double* dbias, double* dx);

/// GRU over a sequence, zero initial hidden state:
///   z = sigmoid(x W_z + h U_z + b_z)
///   r = sigmoid(x W_r + h U_r + b_r)
///   hc = tanh(x W_h + (r . h) U_h + b_h)
///   h' = (1 - z) . h + z . hc
/// Writes the full hidden sequence h_seq (B, T, H) and caches the gate
/// activations z/r/hc (same shape) for the backward pass.
void gru_forward(const double* x, std::size_t B, std::size_t T, std::size_t Ci,
                 std::size_t H, const double* Wz, const double* Wr,
                 const double* Wh, const double* Uz, const double* Ur,
                 const double* Uh, const double* bz, const double* br,
                 const double* bh, double* h_seq, double* z_c, double* r_c,
                 double* hc_c);

/// Backprop through time. dh_seq (B, T, H) holds the loss gradient on every
/// hidden output (zero except the last step when only that is consumed);
/// it is consumed destructively. dx may be null.
void gru_backward(const double* x, const double* h_seq, const double* z_c,
                  const double* r_c, const double* hc_c, std::size_t B,
                  std::size_t T, std::size_t Ci, std::size_t H,
                  const double* Wz, const double* Wr, const double* Wh,
                  const double* Uz, const double* Ur, const double* Uh,
                  double* dh_seq, double* dWz, double* dWr, double* dWh,
                  double* dUz, double* dUr, double* dUh, double* dbz,
                  double* dbr, double* dbh, double* dx);

/// y = x W + b on (B, Ci) rows; optional row-wise softmax.
void dense_forward(const double* x, std::size_t B, std::size_t Ci,
                   const double* W, std::size_t Co, const double* bias,
                   bool softmax, double* y);

/// Gradient of dense_forward; y is the (post-softmax) output. dx may be null.
void dense_backward(const double* x, const double* y, const double* dy,
                    std::size_t B, std::size_t Ci, const double* W,
                    std::size_t Co, bool softmax, double* dW, double* dbias,
                    double* dx);

} // namespace aeolus::nn
