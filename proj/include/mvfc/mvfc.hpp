#pragma once

#include "mvfc/bench.hpp"
#include "mvfc/collab.hpp"
#include "mvfc/csv.hpp"
#include "mvfc/dataset.hpp"
#include "mvfc/ensemble.hpp"
#include "mvfc/error.hpp"
#include "mvfc/exhaustive.hpp"
#include "mvfc/graph.hpp"
#include "mvfc/interaction_gain.hpp"
#include "mvfc/linear_model.hpp"
#include "mvfc/partition.hpp"
#include "mvfc/serialize.hpp"
