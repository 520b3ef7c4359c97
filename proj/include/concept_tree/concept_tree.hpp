#pragma once

// Umbrella header.

#include "concept_tree/concepts.hpp"
#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"
#include "concept_tree/eval.hpp"
#include "concept_tree/oracle.hpp"
#include "concept_tree/random.hpp"
#include "concept_tree/rules.hpp"
#include "concept_tree/sampler.hpp"
#include "concept_tree/tree.hpp"
