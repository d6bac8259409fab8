#pragma once

#include "bench.hpp"
#include "cbs.hpp"
#include "constraint_tree.hpp"
#include "ecbs.hpp"
#include "grid3d.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "low_level.hpp"
#include "prioritized.hpp"
#include "solution.hpp"
#include "validate.hpp"
