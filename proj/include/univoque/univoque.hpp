#pragma once

#include "univoque/errors.hpp"
#include "univoque/rational.hpp"
#include "univoque/polynomial.hpp"
#include "univoque/digits.hpp"
#include "univoque/base.hpp"
#include "univoque/expansion.hpp"
#include "univoque/subshift.hpp"
#include "univoque/bifurcation.hpp"
#include "univoque/dimension.hpp"
