#pragma once

// Umbrella header: time-asymmetric quantum mechanics at desk scale.
// Hardy-class membership tests for energy wave functions, unitary S-matrix
// pole models, Gamow-Jordan chains and their state operators, causal
// semigroup evolution, and Born-probability decay curves.

#include "gamowkit/born.hpp"
#include "gamowkit/errors.hpp"
#include "gamowkit/evolution.hpp"
#include "gamowkit/expm.hpp"
#include "gamowkit/grid.hpp"
#include "gamowkit/hardy.hpp"
#include "gamowkit/io.hpp"
#include "gamowkit/jordan.hpp"
#include "gamowkit/parallel.hpp"
#include "gamowkit/rational.hpp"
#include "gamowkit/smatrix.hpp"
#include "gamowkit/wavefunction.hpp"
