#pragma once

#include "santa/certify.hpp"
#include "santa/clp.hpp"
#include "santa/core.hpp"
#include "santa/error.hpp"
#include "santa/generate.hpp"
#include "santa/io.hpp"
#include "santa/lp.hpp"
#include "santa/matching.hpp"
#include "santa/oracle.hpp"
#include "santa/rational.hpp"
#include "santa/solve.hpp"
