#include "socialpec/ops.hpp"

#include <algorithm>
#include <cmath>

#include "simd_math.hpp"

namespace socialpec {
namespace ops {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

void require_rank(const Tensor& x, std::size_t rank, const char* op) {
  if (x.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) +
                         ", got shape " + shape_str(x.shape()));
  }
}

constexpr double kTanhClamp = 1.0 - 1e-12;

}  // namespace

Var add(Tape& t, Var a, Var b) {
  const Tensor& xa = t.val(a);
  require_same_shape(xa, t.val(b), "add");
  Tensor out = xa;
  out.add(t.val(b));
  return t.make(std::move(out), [a, b](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    tp.grad(a).add(g);
    tp.grad(b).add(g);
  });
}

Var mul(Tape& t, Var a, Var b) {
  const Tensor& xa = t.val(a);
  const Tensor& xb = t.val(b);
  require_same_shape(xa, xb, "mul");
  Tensor out(xa.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = xa[i] * xb[i];
  return t.make(std::move(out), [a, b](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& va = tp.val(a);
    const Tensor& vb = tp.val(b);
    Tensor& ga = tp.grad(a);
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      ga[i] += vb[i] * g[i];
      gb[i] += va[i] * g[i];
    }
  });
}

Var scale(Tape& t, Var x, double c) {
  const Tensor& vx = t.val(x);
  Tensor out(vx.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = c * vx[i];
  return t.make(std::move(out), [x, c](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < g.numel(); ++i) gx[i] += c * g[i];
  });
}

Var sum_list(Tape& t, const std::vector<Var>& xs) {
  if (xs.empty()) throw InvalidInputError("sum_list: empty input list");
  Tensor out = t.val(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    require_same_shape(out, t.val(xs[i]), "sum_list");
    out.add(t.val(xs[i]));
  }
  return t.make(std::move(out), [xs](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    for (Var x : xs) tp.grad(x).add(g);
  });
}

Var reduce_sum(Tape& t, Var x) {
  const Tensor& vx = t.val(x);
  double s = 0.0;
  for (std::size_t i = 0; i < vx.numel(); ++i) s += vx[i];
  return t.make(Tensor::scalar(s), [x](Tape& tp, Var self) {
    const double g = tp.grad(self)[0];
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < gx.numel(); ++i) gx[i] += g;
  });
}

Var dense(Tape& t, Var x, Var w, Var b) {
  const Tensor& vx = t.val(x);
  const Tensor& vw = t.val(w);
  const Tensor& vb = t.val(b);
  require_rank(vx, 1, "dense");
  require_rank(vw, 2, "dense");
  require_rank(vb, 1, "dense");
  if (vw.extent(1) != vx.extent(0) || vw.extent(0) != vb.extent(0)) {
    throw DimensionError("dense: W shape " + shape_str(vw.shape()) + " does not chain with x " +
                         shape_str(vx.shape()) + " and b " + shape_str(vb.shape()));
  }
  const std::size_t out_n = vw.extent(0);
  const std::size_t in_n = vw.extent(1);
  Tensor out({out_n});
  const double* wd = vw.data();
  const double* xd = vx.data();
  for (std::size_t i = 0; i < out_n; ++i) {
    out[i] = detail::dot(wd + i * in_n, xd, in_n) + vb[i];
  }
  return t.make(std::move(out), [x, w, b, out_n, in_n](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& vx2 = tp.val(x);
    const Tensor& vw2 = tp.val(w);
    Tensor& gx = tp.grad(x);
    Tensor& gw = tp.grad(w);
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < out_n; ++i) {
      const double gi = g[i];
      gb[i] += gi;
      const double* wrow = vw2.data() + i * in_n;
      double* gwrow = gw.data() + i * in_n;
      for (std::size_t j = 0; j < in_n; ++j) {
        gx[j] += wrow[j] * gi;
        gwrow[j] += vx2[j] * gi;
      }
    }
  });
}

Var conv1d(Tape& t, Var x, Var kernels, Var bias) {
  const Tensor& vx = t.val(x);
  const Tensor& vk = t.val(kernels);
  const Tensor& vb = t.val(bias);
  require_rank(vx, 2, "conv1d");
  require_rank(vk, 3, "conv1d");
  require_rank(vb, 1, "conv1d");
  const std::size_t c_in = vx.extent(0);
  const std::size_t t_in = vx.extent(1);
  const std::size_t c_out = vk.extent(0);
  const std::size_t k_len = vk.extent(2);
  if (vk.extent(1) != c_in) {
    throw DimensionError("conv1d: kernel shape " + shape_str(vk.shape()) +
                         " does not match input channels of " + shape_str(vx.shape()));
  }
  if (vb.extent(0) != c_out) {
    throw DimensionError("conv1d: bias shape " + shape_str(vb.shape()) + " vs " +
                         std::to_string(c_out) + " kernels");
  }
  if (t_in < k_len) {
    throw InvalidInputError("conv1d: input length " + std::to_string(t_in) +
                            " shorter than kernel length " + std::to_string(k_len));
  }
  const std::size_t t_out = t_in - k_len + 1;

  // Gather input windows so each output is one contiguous dot product.
  const std::size_t patch = c_in * k_len;
  std::vector<double> cols(t_out * patch);
  for (std::size_t to = 0; to < t_out; ++to) {
    double* col = cols.data() + to * patch;
    for (std::size_t c = 0; c < c_in; ++c) {
      const double* src = vx.data() + c * t_in + to;
      for (std::size_t k = 0; k < k_len; ++k) col[c * k_len + k] = src[k];
    }
  }
  Tensor out({c_out, t_out});
  for (std::size_t o = 0; o < c_out; ++o) {
    const double* krow = vk.data() + o * patch;
    for (std::size_t to = 0; to < t_out; ++to) {
      out.at(o, to) = detail::dot(krow, cols.data() + to * patch, patch) + vb[o];
    }
  }
  return t.make(std::move(out),
                [x, kernels, bias, c_in, t_in, c_out, k_len, t_out](Tape& tp, Var self) {
                  const Tensor& g = tp.grad(self);
                  const Tensor& vx2 = tp.val(x);
                  const Tensor& vk2 = tp.val(kernels);
                  Tensor& gx = tp.grad(x);
                  Tensor& gk = tp.grad(kernels);
                  Tensor& gb = tp.grad(bias);
                  for (std::size_t o = 0; o < c_out; ++o) {
                    for (std::size_t to = 0; to < t_out; ++to) {
                      const double go = g.at(o, to);
                      gb[o] += go;
                      for (std::size_t c = 0; c < c_in; ++c) {
                        for (std::size_t k = 0; k < k_len; ++k) {
                          gk.at(o, c, k) += go * vx2.at(c, to + k);
                          gx.at(c, to + k) += go * vk2.at(o, c, k);
                        }
                      }
                    }
                  }
                });
}

Var tanh_act(Tape& t, Var x) {
  const Tensor& vx = t.val(x);
  Tensor out(vx.shape());
  detail::vec_tanh(vx.data(), out.data(), out.numel());
  for (std::size_t i = 0; i < out.numel(); ++i) {
    out[i] = std::clamp(out[i], -kTanhClamp, kTanhClamp);
  }
  return t.make(std::move(out), [x](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& y = tp.val(self);
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < g.numel(); ++i) gx[i] += (1.0 - y[i] * y[i]) * g[i];
  });
}

Var leaky_relu(Tape& t, Var x, double slope) {
  const Tensor& vx = t.val(x);
  Tensor out(vx.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) {
    out[i] = vx[i] >= 0.0 ? vx[i] : slope * vx[i];
  }
  return t.make(std::move(out), [x, slope](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& vx2 = tp.val(x);
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      gx[i] += (vx2[i] >= 0.0 ? 1.0 : slope) * g[i];
    }
  });
}

Var maxpool1d(Tape& t, Var x, std::size_t window, std::size_t stride, bool ceil_mode) {
  const Tensor& vx = t.val(x);
  require_rank(vx, 2, "maxpool1d");
  if (window < 1 || stride < 1) {
    throw InvalidInputError("maxpool1d: window and stride must be >= 1");
  }
  const std::size_t channels = vx.extent(0);
  const std::size_t t_in = vx.extent(1);
  if (t_in < 1) {
    throw InvalidInputError("maxpool1d: empty time axis");
  }
  // T' = floor((T-k)/s)+1, or ceil((T-k)/s)+1 with a trailing partial window.
  std::size_t t_out;
  if (t_in >= window) {
    std::size_t span = t_in - window;
    t_out = span / stride + 1;
    if (ceil_mode && span % stride != 0) ++t_out;
  } else {
    t_out = ceil_mode ? 1 : 0;
  }
  if (ceil_mode) {
    // Every window must start inside the input.
    t_out = std::min(t_out, (t_in - 1) / stride + 1);
  }

  Tensor out({channels, t_out});
  std::vector<std::size_t> argmax(channels * t_out);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t to = 0; to < t_out; ++to) {
      const std::size_t begin = to * stride;
      const std::size_t end = std::min(begin + window, t_in);
      std::size_t best = begin;
      double best_v = vx.at(c, begin);
      for (std::size_t i = begin + 1; i < end; ++i) {
        if (vx.at(c, i) > best_v) {  // ties keep the first occurrence
          best_v = vx.at(c, i);
          best = i;
        }
      }
      out.at(c, to) = best_v;
      argmax[c * t_out + to] = best;
    }
  }
  return t.make(std::move(out), [x, argmax = std::move(argmax), channels, t_out](Tape& tp,
                                                                                 Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gx = tp.grad(x);
    for (std::size_t c = 0; c < channels; ++c) {
      for (std::size_t to = 0; to < t_out; ++to) {
        gx.at(c, argmax[c * t_out + to]) += g.at(c, to);
      }
    }
  });
}

Var transpose2d(Tape& t, Var x) {
  const Tensor& vx = t.val(x);
  require_rank(vx, 2, "transpose2d");
  const std::size_t rows = vx.extent(0);
  const std::size_t cols = vx.extent(1);
  Tensor out({cols, rows});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out.at(j, i) = vx.at(i, j);
  }
  return t.make(std::move(out), [x, rows, cols](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) gx.at(i, j) += g.at(j, i);
    }
  });
}

Var flatten(Tape& t, Var x) {
  const Tensor& vx = t.val(x);
  Tensor out({vx.numel()});
  for (std::size_t i = 0; i < vx.numel(); ++i) out[i] = vx[i];
  return t.make(std::move(out), [x](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& gx = tp.grad(x);
    for (std::size_t i = 0; i < g.numel(); ++i) gx[i] += g[i];
  });
}

Var concat(Tape& t, Var a, Var b) {
  const Tensor& va = t.val(a);
  const Tensor& vb = t.val(b);
  require_rank(va, 1, "concat");
  require_rank(vb, 1, "concat");
  const std::size_t na = va.numel();
  const std::size_t nb = vb.numel();
  Tensor out({na + nb});
  for (std::size_t i = 0; i < na; ++i) out[i] = va[i];
  for (std::size_t i = 0; i < nb; ++i) out[na + i] = vb[i];
  return t.make(std::move(out), [a, b, na, nb](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    Tensor& ga = tp.grad(a);
    Tensor& gb = tp.grad(b);
    for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
    for (std::size_t i = 0; i < nb; ++i) gb[i] += g[na + i];
  });
}

Var max_reduce(Tape& t, const std::vector<Var>& xs) {
  if (xs.empty()) throw InvalidInputError("max_reduce: empty input list");
  const Tensor& first = t.val(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) require_same_shape(first, t.val(xs[i]), "max_reduce");
  Tensor out = first;
  std::vector<std::uint32_t> winner(out.numel(), 0);
  for (std::size_t l = 1; l < xs.size(); ++l) {
    const Tensor& v = t.val(xs[l]);
    for (std::size_t i = 0; i < out.numel(); ++i) {
      if (v[i] > out[i]) {  // strict: ties stay with the earliest input
        out[i] = v[i];
        winner[i] = static_cast<std::uint32_t>(l);
      }
    }
  }
  return t.make(std::move(out), [xs, winner = std::move(winner)](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      tp.grad(xs[winner[i]])[i] += g[i];
    }
  });
}

Var pec(Tape& t, Var phi, Var patterns, Var lambda, Var bias) {
  const Tensor& vphi = t.val(phi);
  const Tensor& vp = t.val(patterns);
  const Tensor& vl = t.val(lambda);
  const Tensor& vb = t.val(bias);
  require_rank(vphi, 2, "pec");
  require_rank(vp, 3, "pec");
  if (vphi.extent(1) != 2 || vp.extent(2) != 2) {
    throw DimensionError("pec: states must be 2-D, got phi " + shape_str(vphi.shape()) +
                         ", patterns " + shape_str(vp.shape()));
  }
  const std::size_t t_in = vphi.extent(0);
  const std::size_t n = vp.extent(0);
  const std::size_t len = vp.extent(1);
  if (vl.numel() != n || vb.numel() != n) {
    throw DimensionError("pec: lambda/bias length must equal pattern count " + std::to_string(n));
  }
  if (t_in < len) {
    throw InvalidInputError("pec: trajectory length " + std::to_string(t_in) +
                            " shorter than pattern length " + std::to_string(len));
  }
  const std::size_t t_out = t_in - len + 1;

  Tensor dist_sum({t_out, n});  // saved for the pullback
  for (std::size_t to = 0; to < t_out; ++to) {
    double* drow = dist_sum.data() + to * n;
    for (std::size_t k = 0; k < len; ++k) {
      const double px = vphi.at(to + k, 0);
      const double py = vphi.at(to + k, 1);
      const double* pat = vp.data() + k * 2;
      for (std::size_t j = 0; j < n; ++j) {
        const double ex = px - pat[j * len * 2];
        const double ey = py - pat[j * len * 2 + 1];
        drow[j] += std::sqrt(ex * ex + ey * ey);
      }
    }
  }
  Tensor out({t_out, n});
  detail::vec_log_shifted(dist_sum.data(), kPecEpsilon, out.data(), out.numel());
  for (std::size_t to = 0; to < t_out; ++to) {
    double* orow = out.data() + to * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] = vl[j] * orow[j] + vb[j];
  }
  return t.make(std::move(out), [phi, patterns, lambda, bias, dist_sum = std::move(dist_sum),
                                 t_out, n, len](Tape& tp, Var self) {
    const Tensor& g = tp.grad(self);
    const Tensor& vphi2 = tp.val(phi);
    const Tensor& vp2 = tp.val(patterns);
    const Tensor& vl2 = tp.val(lambda);
    Tensor& gphi = tp.grad(phi);
    Tensor& gp = tp.grad(patterns);
    Tensor& gl = tp.grad(lambda);
    Tensor& gb = tp.grad(bias);
    for (std::size_t to = 0; to < t_out; ++to) {
      for (std::size_t j = 0; j < n; ++j) {
        const double go = g.at(to, j);
        if (go == 0.0) continue;
        const double d = dist_sum.at(to, j);
        gl[j] += std::log(kPecEpsilon + d) * go;
        gb[j] += go;
        const double common = vl2[j] * go / (kPecEpsilon + d);
        for (std::size_t k = 0; k < len; ++k) {
          const double ex = vphi2.at(to + k, 0) - vp2.at(j, k, 0);
          const double ey = vphi2.at(to + k, 1) - vp2.at(j, k, 1);
          const double dk = std::sqrt(ex * ex + ey * ey);
          if (dk > 0.0) {  // subgradient 0 where the norm is not differentiable
            const double w = common / dk;
            gphi.at(to + k, 0) += w * ex;
            gphi.at(to + k, 1) += w * ey;
            gp.at(j, k, 0) -= w * ex;
            gp.at(j, k, 1) -= w * ey;
          }
        }
      }
    }
  });
}

Var gaussian_nll(Tape& t, Var raw, State truth) {
  const Tensor& vr = t.val(raw);
  if (vr.rank() != 1 || vr.numel() != 5) {
    throw DimensionError("gaussian_nll: raw head output must have shape (5), got " +
                         shape_str(vr.shape()));
  }
  const RawHeadOutput head{vr[0], vr[1], vr[2], vr[3], vr[4]};
  const GaussianParams g = gaussian_head(head);
  const double value = nll(g, truth);
  return t.make(Tensor::scalar(value), [raw, truth](Tape& tp, Var self) {
    const double go = tp.grad(self)[0];
    const Tensor& vr2 = tp.val(raw);
    const double sx = std::exp(vr2[2]);
    const double sy = std::exp(vr2[3]);
    double rho = std::tanh(vr2[4]);
    const bool clamped = std::abs(rho) > 1.0 - 1e-6;
    rho = std::clamp(rho, -(1.0 - 1e-6), 1.0 - 1e-6);
    const double u = (truth.x - vr2[0]) / sx;
    const double v = (truth.y - vr2[1]) / sy;
    const double one = 1.0 - rho * rho;
    const double z = u * u - 2.0 * rho * u * v + v * v;
    Tensor& gr = tp.grad(raw);
    gr[0] += go * (-(u - rho * v) / (sx * one));
    gr[1] += go * (-(v - rho * u) / (sy * one));
    gr[2] += go * (1.0 - (u * u - rho * u * v) / one);
    gr[3] += go * (1.0 - (v * v - rho * u * v) / one);
    // d/dc includes the tanh factor (1 - rho^2); zero where the clamp binds.
    gr[4] += clamped ? 0.0 : go * (-rho - u * v + z * rho / one);
  });
}

}  // namespace ops
}  // namespace socialpec
