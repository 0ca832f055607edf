#pragma once

// Umbrella header.

#include "kbfocus/baselines.hpp"
#include "kbfocus/corpus.hpp"
#include "kbfocus/errors.hpp"
#include "kbfocus/etr.hpp"
#include "kbfocus/fca.hpp"
#include "kbfocus/instances.hpp"
#include "kbfocus/knn.hpp"
#include "kbfocus/metrics.hpp"
#include "kbfocus/ntriples.hpp"
#include "kbfocus/prng.hpp"
#include "kbfocus/ranked_list.hpp"
#include "kbfocus/ranking.hpp"
#include "kbfocus/schema.hpp"
#include "kbfocus/schema_io.hpp"
#include "kbfocus/tree.hpp"
