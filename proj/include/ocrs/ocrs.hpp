#pragma once

#include "ocrs/acceptance.hpp"
#include "ocrs/attenuation.hpp"
#include "ocrs/bounds.hpp"
#include "ocrs/error.hpp"
#include "ocrs/facts.hpp"
#include "ocrs/five_var.hpp"
#include "ocrs/generators.hpp"
#include "ocrs/graph.hpp"
#include "ocrs/lp.hpp"
#include "ocrs/monte_carlo.hpp"
#include "ocrs/nelder_mead.hpp"
#include "ocrs/oracles.hpp"
#include "ocrs/quadrature.hpp"
#include "ocrs/rng.hpp"
#include "ocrs/simplex.hpp"
#include "ocrs/trials.hpp"
