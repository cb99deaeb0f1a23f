#pragma once

#include "halflin/classify.hpp"
#include "halflin/coefficients.hpp"
#include "halflin/criteria.hpp"
#include "halflin/equation.hpp"
#include "halflin/errors.hpp"
#include "halflin/fixedpoint.hpp"
#include "halflin/phi.hpp"
#include "halflin/recursion.hpp"
#include "halflin/series.hpp"
#include "halflin/trajectory.hpp"
