#pragma once

#include "oodbsim/clustering.hpp"
#include "oodbsim/config.hpp"
#include "oodbsim/engine.hpp"
#include "oodbsim/experiment.hpp"
#include "oodbsim/metrics.hpp"
#include "oodbsim/model.hpp"
#include "oodbsim/rng.hpp"
#include "oodbsim/storage.hpp"
#include "oodbsim/workload.hpp"
