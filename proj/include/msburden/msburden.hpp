#pragma once

// Convenience umbrella for the whole library.

#include "msburden/analysis.hpp"
#include "msburden/auc.hpp"
#include "msburden/cox.hpp"
#include "msburden/csv.hpp"
#include "msburden/errors.hpp"
#include "msburden/km.hpp"
#include "msburden/rmtif.hpp"
#include "msburden/simulate.hpp"
#include "msburden/stats.hpp"
#include "msburden/step_curve.hpp"
#include "msburden/types.hpp"
#include "msburden/utility.hpp"
#include "msburden/version.hpp"
