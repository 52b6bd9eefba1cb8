#pragma once

// Umbrella header.

#include "rotsum/cf.hpp"
#include "rotsum/experiments.hpp"
#include "rotsum/farey.hpp"
#include "rotsum/figures.hpp"
#include "rotsum/moments.hpp"
#include "rotsum/normalization.hpp"
#include "rotsum/ostrowski.hpp"
#include "rotsum/pparam.hpp"
#include "rotsum/quadratic.hpp"
#include "rotsum/rational.hpp"
#include "rotsum/rng.hpp"
#include "rotsum/scan.hpp"
#include "rotsum/stable.hpp"
#include "rotsum/sudler.hpp"
