#ifndef CCFL_CCFL_HPP
#define CCFL_CCFL_HPP

#include "ccfl/allocation.hpp"
#include "ccfl/channel.hpp"
#include "ccfl/covert.hpp"
#include "ccfl/errors.hpp"
#include "ccfl/golden_section.hpp"
#include "ccfl/latency.hpp"
#include "ccfl/montecarlo.hpp"
#include "ccfl/optimizer.hpp"
#include "ccfl/report.hpp"
#include "ccfl/rng.hpp"
#include "ccfl/scenario.hpp"
#include "ccfl/sweep.hpp"
#include "ccfl/version.hpp"

#endif  // CCFL_CCFL_HPP
