#pragma once

#include "viscoflow/config.hpp"
#include "viscoflow/csv.hpp"
#include "viscoflow/diagnostics.hpp"
#include "viscoflow/equations.hpp"
#include "viscoflow/fluid_model.hpp"
#include "viscoflow/grid.hpp"
#include "viscoflow/linear_stability.hpp"
#include "viscoflow/parallel.hpp"
#include "viscoflow/polynomial.hpp"
#include "viscoflow/profiles.hpp"
#include "viscoflow/quasilinear.hpp"
#include "viscoflow/ringdown.hpp"
#include "viscoflow/run.hpp"
#include "viscoflow/scenario.hpp"
#include "viscoflow/solver.hpp"
