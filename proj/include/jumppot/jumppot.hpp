#pragma once

#include "jumppot/error.hpp"
#include "jumppot/special.hpp"
#include "jumppot/quadrature.hpp"
#include "jumppot/parallel.hpp"
#include "jumppot/profiles.hpp"
#include "jumppot/geometry.hpp"
#include "jumppot/kernels.hpp"
#include "jumppot/constants.hpp"
#include "jumppot/reference.hpp"
#include "jumppot/montecarlo.hpp"
#include "jumppot/experiments.hpp"
