#pragma once

#include "glauber/experiment.hpp"
#include "glauber/graph.hpp"
#include "glauber/graphgen.hpp"
#include "glauber/ising.hpp"
#include "glauber/learner.hpp"
#include "glauber/lowerbound.hpp"
#include "glauber/model_io.hpp"
#include "glauber/oracle.hpp"
#include "glauber/rng.hpp"
#include "glauber/simulate.hpp"
#include "glauber/trace.hpp"
#include "glauber/verify.hpp"
