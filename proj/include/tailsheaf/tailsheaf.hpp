#pragma once

// Everything except the command-line layer.

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "groebner.hpp"
#include "hilbert.hpp"
#include "zero_dim.hpp"
#include "presentation.hpp"
#include "fitting.hpp"
#include "cohomology.hpp"
#include "classify.hpp"
#include "construct.hpp"
#include "structure.hpp"
#include "serialize.hpp"
