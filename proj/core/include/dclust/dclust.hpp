#pragma once

#include "dclust/baselines.hpp"
#include "dclust/contrastive.hpp"
#include "dclust/data.hpp"
#include "dclust/error.hpp"
#include "dclust/kernels.hpp"
#include "dclust/metrics.hpp"
#include "dclust/model_io.hpp"
#include "dclust/models.hpp"
#include "dclust/objectives.hpp"
#include "dclust/optim.hpp"
#include "dclust/report.hpp"
#include "dclust/rng.hpp"
