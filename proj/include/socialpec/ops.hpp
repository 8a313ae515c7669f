#pragma once

#include <vector>

#include "socialpec/gaussian.hpp"
#include "socialpec/tape.hpp"

namespace socialpec {
namespace ops {

// Elementwise sum of two same-shape tensors.
Var add(Tape& t, Var a, Var b);

// Elementwise product; using the same var twice accumulates both gradient
// contributions.
Var mul(Tape& t, Var a, Var b);

// Multiply by a constant.
Var scale(Tape& t, Var x, double c);

// Sum of a list of same-shape tensors.
Var sum_list(Tape& t, const std::vector<Var>& xs);

// Sum of all entries, as a scalar.
Var reduce_sum(Tape& t, Var x);

// y[i] = sum_j W[i,j] x[j] + b[i] for x:[in], W:[out,in], b:[out].
Var dense(Tape& t, Var x, Var w, Var b);

// Valid (no padding), stride-1 cross-correlation:
// y[o,t] = sum_{c,k} K[o,c,k] x[c,t+k] + b[o] for x:[C,T], K:[O,C,L], b:[O].
Var conv1d(Tape& t, Var x, Var kernels, Var bias);

// tanh with outputs clamped to [-1+1e-12, 1-1e-12] so saturation can never
// poison downstream log/division.
Var tanh_act(Tape& t, Var x);

// x if x >= 0 else slope * x.
Var leaky_relu(Tape& t, Var x, double slope);

// Max pooling over the time axis of x:[C,T]. In ceil mode a trailing partial
// window is kept. Backward routes each window's gradient to the first
// occurrence of the maximum.
Var maxpool1d(Tape& t, Var x, std::size_t window, std::size_t stride, bool ceil_mode);

// [A,B] -> [B,A].
Var transpose2d(Tape& t, Var x);

// Row-major copy to rank 1.
Var flatten(Tape& t, Var x);

// 1-D concatenation.
Var concat(Tape& t, Var a, Var b);

// Elementwise maximum over a non-empty list of same-shape tensors; gradient
// goes to the first input attaining each maximum.
Var max_reduce(Tape& t, const std::vector<Var>& xs);

// Pattern extraction convolution. phi:[T,2] is a trajectory, patterns is
// {P:[N,L,2], lambda:[N], bias:[N]}; the output is [T-L+1, N] with
//   psi[t,j] = lambda[j] * log(eps + sum_k ||phi[t+k,:] - P[j,k,:]||_2) + bias[j]
// and eps = 1e-8 keeping the log finite when a segment coincides with a
// pattern. Differentiable in phi, P, lambda and bias.
Var pec(Tape& t, Var phi, Var patterns, Var lambda, Var bias);

// Negative log-likelihood of `truth` under the Gaussian built from the raw
// head outputs [x,y,a,b,c] (see gaussian_head). Scalar output.
Var gaussian_nll(Tape& t, Var raw, State truth);

constexpr double kPecEpsilon = 1e-8;

}  // namespace ops
}  // namespace socialpec
