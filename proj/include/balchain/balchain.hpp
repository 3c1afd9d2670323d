#pragma once

#include "balchain/chain.hpp"
#include "balchain/errors.hpp"
#include "balchain/io.hpp"
#include "balchain/numeric.hpp"
#include "balchain/quad_ring.hpp"
#include "balchain/sequences.hpp"
#include "balchain/steady_state.hpp"
#include "balchain/verifier.hpp"
