#pragma once

#include "clockpt/error.hpp"
#include "clockpt/numeric.hpp"
#include "clockpt/spectral.hpp"
#include "clockpt/tree.hpp"
#include "clockpt/recursion.hpp"
#include "clockpt/quartic.hpp"
#include "clockpt/fixedpoint.hpp"
#include "clockpt/phase.hpp"
