#pragma once

#include "ledgergraph/error.hpp"
#include "ledgergraph/fetch.hpp"
#include "ledgergraph/graph.hpp"
#include "ledgergraph/metrics.hpp"
#include "ledgergraph/nullmodel.hpp"
#include "ledgergraph/pajek.hpp"
#include "ledgergraph/parallel.hpp"
#include "ledgergraph/pipeline.hpp"
#include "ledgergraph/records.hpp"
#include "ledgergraph/timeutil.hpp"
