#pragma once

#include "graphdim/error.hpp"
#include "graphdim/estimators.hpp"
#include "graphdim/harness.hpp"
#include "graphdim/manifolds.hpp"
#include "graphdim/matrix.hpp"
#include "graphdim/neighborhood.hpp"
#include "graphdim/numerics.hpp"
#include "graphdim/parallel.hpp"
#include "graphdim/random.hpp"
#include "graphdim/regression.hpp"
