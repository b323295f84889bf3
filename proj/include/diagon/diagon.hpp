#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "parser.hpp"
#include "surface.hpp"
#include "lattice.hpp"
#include "diagonalizer.hpp"
#include "classifier.hpp"
#include "counting.hpp"
