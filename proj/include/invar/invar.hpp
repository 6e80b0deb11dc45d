#ifndef INVAR_INVAR_HPP
#define INVAR_INVAR_HPP

#include "rational.hpp"
#include "polynomial.hpp"
#include "parse.hpp"
#include "matrix.hpp"
#include "univariate.hpp"
#include "linear_solve.hpp"
#include "derivations.hpp"
#include "invariant_kernel.hpp"
#include "transforms.hpp"

#endif // INVAR_INVAR_HPP
