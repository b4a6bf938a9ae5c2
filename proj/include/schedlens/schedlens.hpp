#pragma once

#include "schedlens/dataset.hpp"
#include "schedlens/features.hpp"
#include "schedlens/forest.hpp"
#include "schedlens/perturb.hpp"
#include "schedlens/pipeline.hpp"
#include "schedlens/policy.hpp"
#include "schedlens/rules_align.hpp"
#include "schedlens/sim_state.hpp"
#include "schedlens/simulator.hpp"
#include "schedlens/task_rules.hpp"
#include "schedlens/trace.hpp"
#include "schedlens/tree.hpp"
#include "schedlens/workload.hpp"
