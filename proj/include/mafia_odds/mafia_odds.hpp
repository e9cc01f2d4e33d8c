// Umbrella header.
#pragma once

#include "bounds.hpp"
#include "core.hpp"
#include "counterexamples.hpp"
#include "inequalities.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "win_table.hpp"
