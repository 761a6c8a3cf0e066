#pragma once

#include "dbo/format.hpp"
#include "dbo/grid.hpp"
#include "dbo/jacobi.hpp"
#include "dbo/kernel.hpp"
#include "dbo/matrix.hpp"
#include "dbo/operators.hpp"
#include "dbo/quadrature.hpp"
#include "dbo/random.hpp"
#include "dbo/spectra.hpp"
#include "dbo/spline.hpp"
#include "dbo/tridiagonal.hpp"
#include "dbo/verify.hpp"
