#pragma once

// Umbrella header for the whole library.

#include "multimin/chebyshev.hpp"
#include "multimin/experiments.hpp"
#include "multimin/functions.hpp"
#include "multimin/geometry.hpp"
#include "multimin/io.hpp"
#include "multimin/kirchhoff.hpp"
#include "multimin/minimax.hpp"
#include "multimin/quadrature.hpp"
#include "multimin/roots.hpp"
#include "multimin/sampling.hpp"
#include "multimin/util.hpp"
#include "multimin/vec.hpp"
