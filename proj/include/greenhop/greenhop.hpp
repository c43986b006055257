#pragma once

// Umbrella header: the whole library in one include.

#include "greenhop/aggregate.hpp"
#include "greenhop/config.hpp"
#include "greenhop/dataset.hpp"
#include "greenhop/descriptor.hpp"
#include "greenhop/dft.hpp"
#include "greenhop/errors.hpp"
#include "greenhop/flops.hpp"
#include "greenhop/knn.hpp"
#include "greenhop/llsr.hpp"
#include "greenhop/model_io.hpp"
#include "greenhop/parallel.hpp"
#include "greenhop/pipeline.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/regions.hpp"
#include "greenhop/rng.hpp"
#include "greenhop/saab.hpp"
#include "greenhop/standardize.hpp"
#include "greenhop/strings.hpp"
