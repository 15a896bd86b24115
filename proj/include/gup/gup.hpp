#pragma once

// Convenience umbrella: pulls in the whole library.

#include "gup/algebra.hpp"
#include "gup/classical.hpp"
#include "gup/errors.hpp"
#include "gup/kernels.hpp"
#include "gup/lattice.hpp"
#include "gup/numerics.hpp"
#include "gup/params.hpp"
#include "gup/spectral.hpp"
