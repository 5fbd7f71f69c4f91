#pragma once

#include "trainclean/cross_validation.hpp"
#include "trainclean/dataset.hpp"
#include "trainclean/diversity.hpp"
#include "trainclean/error.hpp"
#include "trainclean/filtering.hpp"
#include "trainclean/hardness.hpp"
#include "trainclean/harness.hpp"
#include "trainclean/hpo.hpp"
#include "trainclean/hyperparameters.hpp"
#include "trainclean/io.hpp"
#include "trainclean/learner.hpp"
#include "trainclean/parallel.hpp"
#include "trainclean/partition.hpp"
#include "trainclean/random.hpp"
#include "trainclean/stats.hpp"
#include "trainclean/synthetic.hpp"
