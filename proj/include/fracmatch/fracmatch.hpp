#pragma once

// Stable fractional matchings under strict cardinal preferences: instance
// model, Gale-Shapley, fractional stability verification, CMFP
// classification, the envy-graph fractional solver, and mechanism audits.

#include "fracmatch/audit.hpp"
#include "fracmatch/cmfp.hpp"
#include "fracmatch/envy.hpp"
#include "fracmatch/errors.hpp"
#include "fracmatch/fractional.hpp"
#include "fracmatch/generate.hpp"
#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"
#include "fracmatch/json_io.hpp"
#include "fracmatch/lp.hpp"
#include "fracmatch/rational.hpp"
#include "fracmatch/solver.hpp"
