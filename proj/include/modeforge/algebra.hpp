#pragma once

#include "algebra/cpoly.hpp"
#include "algebra/frac.hpp"
#include "algebra/jet.hpp"
#include "algebra/linalg.hpp"
#include "algebra/logseries.hpp"
#include "algebra/mpoly.hpp"
#include "algebra/qseries.hpp"
#include "algebra/rational.hpp"
#include "algebra/upoly.hpp"
