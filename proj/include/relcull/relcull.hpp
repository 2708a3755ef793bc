#pragma once

// Umbrella header.

#include "relcull/analysis.hpp"
#include "relcull/curate.hpp"
#include "relcull/embed.hpp"
#include "relcull/error.hpp"
#include "relcull/labelspace.hpp"
#include "relcull/manifest.hpp"
#include "relcull/pairgeom.hpp"
#include "relcull/relheads.hpp"
#include "relcull/rng.hpp"
#include "relcull/sgdata.hpp"
#include "relcull/vdnet.hpp"
