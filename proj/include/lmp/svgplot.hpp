// SPDX-License-Identifier: Apache-2.0
//
// Self-contained SVG rendering of error-rate curves: one panel per M value,
// log-scale error axis clipped at 1/trials, dashed baselines.
#pragma once

#include <iosfwd>

#include "lmp/rfsim.hpp"

namespace lmp {

void emit_plot(const rfsim::ErrorCurve& curve, std::ostream& out);

}  // namespace lmp
