#pragma once

// Umbrella header.

#include "adhs/adhs.hpp"
#include "adhs/config.hpp"
#include "adhs/energy.hpp"
#include "adhs/engine.hpp"
#include "adhs/errors.hpp"
#include "adhs/field.hpp"
#include "adhs/hcc.hpp"
#include "adhs/metrics.hpp"
#include "adhs/report_io.hpp"
#include "adhs/rng.hpp"
#include "adhs/scenario.hpp"
#include "adhs/sweep.hpp"
#include "adhs/topology.hpp"
