#pragma once

// Umbrella header for the composite-channel coding library.

#include "composite/bss.hpp"
#include "composite/channels.hpp"
#include "composite/errors.hpp"
#include "composite/gaussian.hpp"
#include "composite/hull.hpp"
#include "composite/montecarlo.hpp"
#include "composite/numeric.hpp"
#include "composite/parallel.hpp"
#include "composite/rng.hpp"
#include "composite/specfn.hpp"
#include "composite/types.hpp"
#include "composite/version.hpp"
