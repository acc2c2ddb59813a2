#pragma once

#include "powerlocal/arith.hpp"
#include "powerlocal/bounds.hpp"
#include "powerlocal/chebotarev.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/lattice.hpp"
#include "powerlocal/modular.hpp"
#include "powerlocal/parallel.hpp"
#include "powerlocal/powermap.hpp"
#include "powerlocal/prime_cache.hpp"
#include "powerlocal/ratfact.hpp"
