#pragma once

// Umbrella header.

#include "fjs/error.hpp"
#include "fjs/learning.hpp"
#include "fjs/instance.hpp"
#include "fjs/solution_graph.hpp"
#include "fjs/moves.hpp"
#include "fjs/budget.hpp"
#include "fjs/local_search.hpp"
#include "fjs/random.hpp"
#include "fjs/constructive.hpp"
#include "fjs/metaheuristics.hpp"
#include "fjs/oracle.hpp"
#include "fjs/io.hpp"
#include "fjs/harness.hpp"
