#pragma once

#include "slcl/types.hpp"
#include "slcl/model.hpp"
#include "slcl/merit.hpp"
#include "slcl/linearize.hpp"
#include "slcl/bound_solve.hpp"
#include "slcl/innersolve.hpp"
#include "slcl/driver.hpp"
#include "slcl/catalog.hpp"
#include "slcl/bench.hpp"
