#pragma once

#include "sirtax/grid.hpp"
#include "sirtax/initial.hpp"
#include "sirtax/kinetics.hpp"
#include "sirtax/stencil.hpp"
#include "sirtax/stepper.hpp"
#include "sirtax/diagnostics.hpp"
#include "sirtax/run.hpp"
#include "sirtax/config.hpp"
#include "sirtax/io.hpp"
#include "sirtax/modes.hpp"
