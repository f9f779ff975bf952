#pragma once

#include "wavegp/bounds.hpp"
#include "wavegp/covariance.hpp"
#include "wavegp/error.hpp"
#include "wavegp/expansion.hpp"
#include "wavegp/experiment.hpp"
#include "wavegp/filter.hpp"
#include "wavegp/fourier.hpp"
#include "wavegp/gaussian_process.hpp"
#include "wavegp/grid.hpp"
#include "wavegp/io.hpp"
#include "wavegp/quadrature.hpp"
#include "wavegp/rng.hpp"
#include "wavegp/wavelet_system.hpp"
