#pragma once

#include "analytic_density.hpp"
#include "bootstrap.hpp"
#include "distance.hpp"
#include "kernel.hpp"
#include "limit_lab.hpp"
#include "majorant.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "resampling.hpp"
#include "rng.hpp"
#include "sample.hpp"
#include "smoothed_density.hpp"
#include "stats.hpp"
#include "step_density.hpp"
