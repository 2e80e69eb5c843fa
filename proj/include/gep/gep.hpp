#pragma once

// Umbrella header.

#include "gep/adequacy.hpp"
#include "gep/config.hpp"
#include "gep/constraints.hpp"
#include "gep/cost_model.hpp"
#include "gep/evaluator.hpp"
#include "gep/ga_engine.hpp"
#include "gep/io.hpp"
#include "gep/load_model.hpp"
#include "gep/planning_model.hpp"
#include "gep/reliability.hpp"
#include "gep/rng.hpp"
#include "gep/scenarios.hpp"
#include "gep/wind_model.hpp"
