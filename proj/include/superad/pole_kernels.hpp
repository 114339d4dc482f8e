#pragma once

// Convolution kernels over the pole basis.
//
// A pole function splits as U(x) + V(y) with x = (1+it)^{-1},
// y = (1-it)^{-1}. Pure powers multiply by exponent addition; mixed
// monomials reduce through x y = (x + y)/2, which the sweep applies from the
// highest total degree downwards.

#include <span>
#include <vector>

#include "superad/pole_function.hpp"

namespace superad {

enum class Exec { serial, parallel };

/// Weighted symmetric pair sum  sum_{j=lo}^{hi} w_j g_j g_{total-j}.
/// `g[j-1]` holds g_j. Requires lo + hi == total and w symmetric
/// (w[j-lo] == w[hi-j]); `weights` empty means all ones.
/// In float mode pairs whose bound w_j |g_j| |g_{total-j}| falls below
/// the pruning threshold relative to the largest pair are skipped.
template <class Coeff>
PoleFunction<Coeff> pair_sum(std::span<const PoleFunction<Coeff>> g, int total, int lo, int hi,
                             std::span<const typename CoeffTraits<Coeff>::Scalar> weights,
                             Exec exec = Exec::parallel);

/// Same sum, term by term through `multiply` and the product table.
template <class Coeff>
PoleFunction<Coeff> pair_sum_reference(std::span<const PoleFunction<Coeff>> g, int total, int lo, int hi,
                                       std::span<const typename CoeffTraits<Coeff>::Scalar> weights);

/// Single product by the bivariate sweep.
template <class Coeff>
PoleFunction<Coeff> multiply_sweep(const PoleFunction<Coeff>& a, const PoleFunction<Coeff>& b);

/// f * a with f = (e_1 + e_2)/4.
template <class Coeff>
PoleFunction<Coeff> times_coupling(const PoleFunction<Coeff>& a);

}  // namespace superad
