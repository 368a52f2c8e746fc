#pragma once

#include "flola/design.hpp"
#include "flola/error.hpp"
#include "flola/lola.hpp"
#include "flola/noise.hpp"
#include "flola/random.hpp"
#include "flola/sampler.hpp"
#include "flola/testbed.hpp"
#include "flola/voronoi.hpp"
