#pragma once

#include "bivsurv/betaproc.hpp"
#include "bivsurv/counts.hpp"
#include "bivsurv/dabrowska.hpp"
#include "bivsurv/data.hpp"
#include "bivsurv/grid.hpp"
#include "bivsurv/json_io.hpp"
#include "bivsurv/pruitt.hpp"
#include "bivsurv/rational.hpp"
#include "bivsurv/rng.hpp"
#include "bivsurv/simulate.hpp"
#include "bivsurv/univariate.hpp"
