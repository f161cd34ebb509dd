#pragma once

#include <vector>

#include "nfisac/types.hpp"

namespace nfisac {

/// Rotate so the first entry with |v_i| > 1e-12 |v| has zero phase.
VecC phase_normalize(VecC v);

/// SINR-optimal unit-norm receive combiner D^{-1} f_r / |D^{-1} f_r| with
/// D = sum_u (G W_u)(G W_u)^H + noise_var I.
VecC optimal_combiner(const MatC& g, const std::vector<MatC>& w, const VecC& f_r,
                      double noise_var);

}  // namespace nfisac
