#pragma once

// Linear MMSE equalization for dispersive intensity-modulated links with
// square-law detection: sampled impulse responses, closed-form output
// statistics, Wiener filter variants, constellation-span shaping, and
// Monte-Carlo sweep tooling.

#include "imdd/channel.hpp"
#include "imdd/config.hpp"
#include "imdd/constellation.hpp"
#include "imdd/conv_operator.hpp"
#include "imdd/csv.hpp"
#include "imdd/fft.hpp"
#include "imdd/rng.hpp"
#include "imdd/shaping.hpp"
#include "imdd/sim.hpp"
#include "imdd/statistics.hpp"
#include "imdd/sweep.hpp"
#include "imdd/wiener.hpp"
