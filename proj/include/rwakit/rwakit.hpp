// Umbrella header.
#pragma once

#include "rwakit/core.hpp"
#include "rwakit/emit.hpp"
#include "rwakit/experiment.hpp"
#include "rwakit/integrator.hpp"
#include "rwakit/jc_series.hpp"
#include "rwakit/rabi_series.hpp"
#include "rwakit/riccati.hpp"
