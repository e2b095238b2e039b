#pragma once

// Umbrella header for the whole pipeline: residue tables, sequence parsing,
// feature extraction, the warehouse and its knowledge table, and the
// three-phase classifier with its bench harness.

#include "psc/amino_acids.hpp"
#include "psc/bench.hpp"
#include "psc/cascade.hpp"
#include "psc/config.hpp"
#include "psc/errors.hpp"
#include "psc/features.hpp"
#include "psc/fuzzy.hpp"
#include "psc/mlp.hpp"
#include "psc/neighborhood.hpp"
#include "psc/ranking.hpp"
#include "psc/rng.hpp"
#include "psc/sequence.hpp"
#include "psc/synthetic.hpp"
#include "psc/text.hpp"
#include "psc/warehouse.hpp"
