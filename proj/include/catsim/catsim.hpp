#pragma once

#include "catsim/config.hpp"
#include "catsim/env.hpp"
#include "catsim/government.hpp"
#include "catsim/individual.hpp"
#include "catsim/insurer.hpp"
#include "catsim/math_util.hpp"
#include "catsim/metrics.hpp"
#include "catsim/qtable_io.hpp"
#include "catsim/rl.hpp"
#include "catsim/rng.hpp"
#include "catsim/scenario_io.hpp"
#include "catsim/trace_io.hpp"
#include "catsim/utility.hpp"
#include "catsim/welfare.hpp"
#include "catsim/world.hpp"
