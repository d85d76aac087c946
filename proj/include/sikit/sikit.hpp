#pragma once

// Umbrella header: the whole toolkit.

#include "sikit/analysis.hpp"
#include "sikit/channel.hpp"
#include "sikit/csvio.hpp"
#include "sikit/error.hpp"
#include "sikit/grid.hpp"
#include "sikit/jsonio.hpp"
#include "sikit/mixedmode.hpp"
#include "sikit/montecarlo.hpp"
#include "sikit/network.hpp"
#include "sikit/rng.hpp"
#include "sikit/skewstat.hpp"
#include "sikit/stackup.hpp"
#include "sikit/tdr.hpp"
#include "sikit/touchstone.hpp"
#include "sikit/units.hpp"
