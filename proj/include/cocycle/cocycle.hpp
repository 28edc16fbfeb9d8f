#pragma once

#include "error.hpp"
#include "linalg.hpp"
#include "spd_geometry.hpp"
#include "space.hpp"
#include "centers.hpp"
#include "base_dynamics.hpp"
#include "trig_poly.hpp"
#include "section.hpp"
#include "cocycles.hpp"
#include "solvers.hpp"
#include "parallel.hpp"
#include "reduction.hpp"
