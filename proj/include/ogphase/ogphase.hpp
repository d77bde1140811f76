#pragma once

// Off-diagonal geometric phases of mixed quantum states under unitary
// evolution: umbrella header.

#include "ogphase/errors.hpp"
#include "ogphase/linalg.hpp"
#include "ogphase/perm_engine.hpp"
#include "ogphase/phases.hpp"
#include "ogphase/purification.hpp"
#include "ogphase/random.hpp"
#include "ogphase/rootfind.hpp"
#include "ogphase/selftest.hpp"
#include "ogphase/states.hpp"
#include "ogphase/tolerances.hpp"
#include "ogphase/transport.hpp"
