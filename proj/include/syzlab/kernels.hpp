#pragma once

#include <span>

#include "syzlab/semiflat.hpp"

namespace syz {

// Instruction-set variants of the batched residual kernel.
enum class SimdPath { Scalar, Avx2, Neon };

const char* simd_path_name(SimdPath p);
bool simd_path_available(SimdPath p);
// Widest path usable on this machine.
SimdPath best_simd_path();

// Relative Monge-Ampere residual omega^2 / (alpha^2 Omega ^ conj(Omega)) - 1
// of the semi-flat form in the y-chart, for kappa = 1, at the points
// (l[i], x2[i]).  The form does not depend on theta or x1.
void ma_residual_batch(const ModelParams& p, std::span<const double> ell,
                       std::span<const double> x2, std::span<double> out,
                       SimdPath path = best_simd_path());

}  // namespace syz
