#pragma once

// Umbrella header for the feature-selection benchmarking toolkit.

#include "fsbench/core/csv.hpp"
#include "fsbench/core/error.hpp"
#include "fsbench/core/hash.hpp"
#include "fsbench/core/matrix.hpp"
#include "fsbench/core/rng.hpp"
#include "fsbench/core/timer.hpp"

#include "fsbench/data/dataset.hpp"

#include "fsbench/model/cv.hpp"
#include "fsbench/model/forest.hpp"
#include "fsbench/model/logreg.hpp"
#include "fsbench/model/metrics.hpp"

#include "fsbench/select/feature_scores.hpp"
#include "fsbench/select/lasso_path.hpp"
#include "fsbench/select/mutual_information.hpp"
#include "fsbench/select/registry.hpp"
#include "fsbench/select/wrappers.hpp"

#include "fsbench/llm/cache.hpp"
#include "fsbench/llm/exchange.hpp"
#include "fsbench/llm/pipeline.hpp"
#include "fsbench/llm/prompt.hpp"
#include "fsbench/llm/provider.hpp"
#include "fsbench/llm/score_parse.hpp"

#include "fsbench/bench/config.hpp"
#include "fsbench/bench/harness.hpp"
#include "fsbench/bench/plot.hpp"
#include "fsbench/bench/runner.hpp"
#include "fsbench/bench/svg.hpp"
