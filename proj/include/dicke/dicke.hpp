// dicke.hpp: umbrella header for the open Dicke model library

#pragma once

#include "dicke/correlations.hpp"
#include "dicke/errors.hpp"
#include "dicke/fluctuations.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"
#include "dicke/modulation.hpp"
#include "dicke/parallel.hpp"
#include "dicke/steady_states.hpp"
#include "dicke/types.hpp"
