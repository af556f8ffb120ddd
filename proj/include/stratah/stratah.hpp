#pragma once

#include "stratah/analysis.hpp"
#include "stratah/average_hazard.hpp"
#include "stratah/contrasts.hpp"
#include "stratah/dataset.hpp"
#include "stratah/errors.hpp"
#include "stratah/kaplan_meier.hpp"
#include "stratah/numeric.hpp"
#include "stratah/render.hpp"
#include "stratah/rng.hpp"
#include "stratah/scenario.hpp"
#include "stratah/simulation.hpp"
#include "stratah/standardized.hpp"
#include "stratah/step_function.hpp"
#include "stratah/version.hpp"
#include "stratah/weibull.hpp"
#include "stratah/weights.hpp"
