#pragma once

#include "fairalloc/rational.hpp"
#include "fairalloc/lex_cost.hpp"
#include "fairalloc/packed_lex.hpp"
#include "fairalloc/errors.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/perturbation.hpp"
#include "fairalloc/assignment.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/fairness.hpp"
#include "fairalloc/cycles.hpp"
#include "fairalloc/arrangement.hpp"
#include "fairalloc/bundle.hpp"
#include "fairalloc/search.hpp"
#include "fairalloc/theorem_check.hpp"
#include "fairalloc/io.hpp"
