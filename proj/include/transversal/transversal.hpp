#pragma once

#include "transversal/error.hpp"
#include "transversal/generators.hpp"
#include "transversal/geometry.hpp"
#include "transversal/io.hpp"
#include "transversal/polytope.hpp"
#include "transversal/prevalence.hpp"
#include "transversal/random.hpp"
#include "transversal/separator.hpp"
#include "transversal/stats.hpp"
