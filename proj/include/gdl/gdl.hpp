#pragma once

#include "gdl/experiments.hpp"
#include "gdl/generators.hpp"
#include "gdl/graph.hpp"
#include "gdl/load_balancing.hpp"
#include "gdl/markov_oracle.hpp"
#include "gdl/max_model.hpp"
#include "gdl/random.hpp"
