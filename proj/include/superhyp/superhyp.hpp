#pragma once

// Umbrella header: exact and floating Grassmann arithmetic, orthosymplectic
// supermatrices, the extended Wigner action on super Minkowski space, super
// hyperbolic geometry, and the volume-form diagnostics.

#include "superhyp/errors.hpp"
#include "superhyp/rational.hpp"
#include "superhyp/scalar.hpp"
#include "superhyp/grassmann.hpp"
#include "superhyp/random.hpp"
#include "superhyp/supermatrix.hpp"
#include "superhyp/minkowski.hpp"
#include "superhyp/geometry.hpp"
#include "superhyp/volume.hpp"
#include "superhyp/serialization.hpp"
