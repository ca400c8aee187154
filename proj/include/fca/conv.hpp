#ifndef FCA_CONV_HPP
#define FCA_CONV_HPP

// 3x3 convolution, padding 1, configurable stride, no bias. Single sample,
// channels-first ([C x H x W]).

#include <algorithm>
#include <cstddef>
#include <vector>

#include "fca/tensor.hpp"

namespace fca {

inline std::size_t conv_out_extent(std::size_t in, std::size_t stride) { return (in + 2 - 3) / stride + 1; }

namespace detail {

// range of output positions o with 0 <= o*stride + k - 1 < in
inline std::pair<std::size_t, std::size_t> valid_range(std::size_t k, std::size_t in, std::size_t out,
                                                       std::size_t stride) {
  const auto pos = [&](std::size_t o) {
    return static_cast<std::ptrdiff_t>(o * stride + k) - 1;
  };
  std::size_t lo = 0;
  while (lo < out && pos(lo) < 0) ++lo;
  std::size_t hi = out;
  while (hi > lo && pos(hi - 1) >= static_cast<std::ptrdiff_t>(in)) --hi;
  return {lo, hi};
}

// Patch matrix [Ci*9 x Ho*Wo]; row (ci, ky, kx) holds the input value under that tap for every output position.
inline std::vector<Real> im2col(const Tensor& x, std::size_t stride, std::size_t ho, std::size_t wo) {
  const std::size_t ci_n = x.extent(0), h = x.extent(1), w = x.extent(2), p_n = ho * wo;
  std::vector<Real> col(ci_n * 9 * p_n, Real{0});
  const Real* in = x.data().data();
  for (std::size_t ci = 0; ci < ci_n; ++ci)
    for (std::size_t ky = 0; ky < 3; ++ky) {
      const auto [ylo, yhi] = valid_range(ky, h, ho, stride);
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const auto [xlo, xhi] = valid_range(kx, w, wo, stride);
        Real* row = col.data() + ((ci * 3 + ky) * 3 + kx) * p_n;
        for (std::size_t oy = ylo; oy < yhi; ++oy) {
          const Real* irow = in + (ci * h + oy * stride + ky - 1) * w;
          for (std::size_t ox = xlo; ox < xhi; ++ox) row[oy * wo + ox] = irow[ox * stride + kx - 1];
        }
      }
    }
  return col;
}

} // namespace detail

/// weights: [Co x Ci x 3 x 3]
inline Tensor conv3x3_forward(const Tensor& x, const Tensor& weights, std::size_t stride) {
  const std::size_t ci_n = x.extent(0), h = x.extent(1), w = x.extent(2);
  const std::size_t co_n = weights.extent(0);
  if (weights.extent(1) != ci_n) throw ShapeError("conv3x3: input channel mismatch");
  const std::size_t ho = conv_out_extent(h, stride), wo = conv_out_extent(w, stride), p_n = ho * wo;
  const auto col = detail::im2col(x, stride, ho, wo);
  Tensor out({co_n, ho, wo});
  const Real* wt = weights.data().data();
  Real* o = out.data().data();
  const std::size_t k_n = ci_n * 9;
  for (std::size_t co = 0; co < co_n; ++co) {
    Real* orow = o + co * p_n;
    for (std::size_t k = 0; k < k_n; ++k) {
      const Real kv = wt[co * k_n + k];
      const Real* crow = col.data() + k * p_n;
      for (std::size_t p = 0; p < p_n; ++p) orow[p] += kv * crow[p];
    }
  }
  return out;
}

/// Accumulates dL/dW into grad_w; returns dL/dx when `want_input` is set (else an empty tensor).
inline Tensor conv3x3_backward(const Tensor& x, const Tensor& weights, std::size_t stride, const Tensor& grad_out,
                               Tensor& grad_w, bool want_input) {
  const std::size_t ci_n = x.extent(0), h = x.extent(1), w = x.extent(2);
  const std::size_t co_n = weights.extent(0);
  const std::size_t ho = grad_out.extent(1), wo = grad_out.extent(2), p_n = ho * wo;
  const std::size_t k_n = ci_n * 9;
  const auto col = detail::im2col(x, stride, ho, wo);
  const Real* wt = weights.data().data();
  const Real* go = grad_out.data().data();
  Real* gw = grad_w.data().data();
  // Four taps at a time with two partial sums each, so the reductions do not form one serial chain.
  for (std::size_t co = 0; co < co_n; ++co) {
    const Real* grow = go + co * p_n;
    Real* gwrow = gw + co * k_n;
    std::size_t k = 0;
    for (; k + 4 <= k_n; k += 4) {
      const Real* c0 = col.data() + k * p_n;
      const Real* c1 = c0 + p_n;
      const Real* c2 = c1 + p_n;
      const Real* c3 = c2 + p_n;
      Real a[4][2] = {};
      std::size_t p = 0;
      for (; p + 2 <= p_n; p += 2)
        for (std::size_t l = 0; l < 2; ++l) {
          const Real g = grow[p + l];
          a[0][l] += g * c0[p + l];
          a[1][l] += g * c1[p + l];
          a[2][l] += g * c2[p + l];
          a[3][l] += g * c3[p + l];
        }
      for (; p < p_n; ++p) {
        a[0][0] += grow[p] * c0[p];
        a[1][0] += grow[p] * c1[p];
        a[2][0] += grow[p] * c2[p];
        a[3][0] += grow[p] * c3[p];
      }
      for (std::size_t j = 0; j < 4; ++j) gwrow[k + j] += a[j][0] + a[j][1];
    }
    for (; k < k_n; ++k) {
      const Real* crow = col.data() + k * p_n;
      Real acc{0};
      for (std::size_t p = 0; p < p_n; ++p) acc += grow[p] * crow[p];
      gwrow[k] += acc;
    }
  }
  if (!want_input) return Tensor();

  std::vector<Real> dcol(k_n * p_n, Real{0});
  for (std::size_t co = 0; co < co_n; ++co) {
    const Real* grow = go + co * p_n;
    for (std::size_t k = 0; k < k_n; ++k) {
      const Real kv = wt[co * k_n + k];
      Real* drow = dcol.data() + k * p_n;
      for (std::size_t p = 0; p < p_n; ++p) drow[p] += kv * grow[p];
    }
  }
  Tensor gx(x.shape());
  Real* gi = gx.data().data();
  for (std::size_t ci = 0; ci < ci_n; ++ci)
    for (std::size_t ky = 0; ky < 3; ++ky) {
      const auto [ylo, yhi] = detail::valid_range(ky, h, ho, stride);
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const auto [xlo, xhi] = detail::valid_range(kx, w, wo, stride);
        const Real* drow = dcol.data() + ((ci * 3 + ky) * 3 + kx) * p_n;
        for (std::size_t oy = ylo; oy < yhi; ++oy) {
          Real* girow = gi + (ci * h + oy * stride + ky - 1) * w;
          for (std::size_t ox = xlo; ox < xhi; ++ox) girow[ox * stride + kx - 1] += drow[oy * wo + ox];
        }
      }
    }
  return gx;
}

} // namespace fca

#endif
