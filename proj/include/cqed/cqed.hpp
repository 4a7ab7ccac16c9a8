#pragma once

#include "cqed/analytic.hpp"
#include "cqed/constants.hpp"
#include "cqed/csv.hpp"
#include "cqed/dispersive.hpp"
#include "cqed/errors.hpp"
#include "cqed/motion.hpp"
#include "cqed/oracle.hpp"
#include "cqed/params.hpp"
#include "cqed/peaks.hpp"
#include "cqed/scenario/config.hpp"
#include "cqed/scenario/presets.hpp"
#include "cqed/scenario/runner.hpp"
#include "cqed/spectrum.hpp"
#include "cqed/stats.hpp"
